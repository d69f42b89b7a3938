#include "so12/su11_rep.hpp"

#include <cmath>

namespace so12 {

namespace {

const std::complex<double> I(0.0, 1.0);

OperatorMatrix wrap(Mat m, bool herm) { return {int(m.rows()), std::move(m), herm}; }

Mat kplus(double k, int N) {
  Mat m = Mat::Zero(N, N);
  for (int n = 0; n + 1 < N; ++n) m(n + 1, n) = std::sqrt((2 * k + n) * (n + 1.0));
  return m;
}

}  // namespace

void RepParams::validate() const {
  if (!(k > 0)) throw ConfigError("Bargmann index k must be positive");
  if (cutoff < 4) throw ConfigError("cutoff must be at least 4");
}

int RepParams::cover() const {
  if (k == std::floor(k)) return 1;
  if (2 * k == std::floor(2 * k)) return 2;
  return 0;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

double interior_max(const Mat& m, int trim) {
  const int n = int(m.rows()) - trim;
  if (n <= 0) return 0.0;
  return m.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

Mat boson_annihilator(int N) {
  Mat a = Mat::Zero(N, N);
  for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Generators build_generators(const RepParams& p) {
  p.validate();
  const int N = p.cutoff;
  Mat K0 = Mat::Zero(N, N);
  for (int n = 0; n < N; ++n) K0(n, n) = p.k + n;
  Mat Kp = kplus(p.k, N);
  Mat Km = Kp.adjoint();
  Mat K1 = 0.5 * (Kp + Km);
  Mat K2 = (Kp - Km) / (2.0 * I);
  return {wrap(K0, true), wrap(Kp, false), wrap(Km, false), wrap(K1, true), wrap(K2, true)};
}

OperatorMatrix casimir(const RepParams& p) {
  auto g = build_generators(p);
  Mat L = g.K1.entries * g.K1.entries + g.K2.entries * g.K2.entries - g.K0.entries * g.K0.entries;
  return wrap(L, true);
}

CompositeLadder composite_ladder(const RepParams& p) {
  auto g = build_generators(p);
  const int N = p.cutoff;
  Eigen::VectorXcd d(N);
  for (int n = 0; n < N; ++n) d(n) = 1.0 / std::sqrt(2 * p.k + n);
  Mat a = d.asDiagonal() * g.Kminus.entries;
  Mat ad = g.Kplus.entries * d.asDiagonal();
  Mat Nop = g.K0.entries - p.k * Mat::Identity(N, N);
  return {wrap(a, false), wrap(ad, false), wrap(Nop, true)};
}

CompositeQP composite_qp(const RepParams& p) {
  auto c = composite_ladder(p);
  const double r = 1.0 / std::sqrt(2.0);
  Mat Q = r * (c.a_dag.entries + c.a.entries);
  Mat P = I * r * (c.a_dag.entries - c.a.entries);
  return {wrap(Q, true), wrap(P, true)};
}

NumberStateStats number_state_stats(double k, int n) {
  if (!(k > 0)) throw DomainError("number_state_stats: k must be positive");
  if (n < 0) throw DomainError("number_state_stats: n must be non-negative");
  const double v = (double(n) * n + 2.0 * n * k + k) / 2;
  return {0.0, 0.0, v, v, v * v, (n + k) * (n + k) / 4, 0.0};
}

ContractionTable contraction_limit(const std::vector<double>& ks, int n1, int n2) {
  if (n1 < 0 || n2 < 1) throw DomainError("contraction_limit: need n1 >= 0, n2 >= 1");
  ContractionTable t;
  t.monotone = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double k = ks[i];
    if (!(k > 0)) throw DomainError("contraction_limit: k must be positive");
    if (i > 0 && !(k > ks[i - 1])) throw DomainError("contraction_limit: k values must increase");
    ContractionRow r;
    r.k = k;
    r.K3_diag = 1.0 + n1 / k;
    r.Kplus_elem = std::sqrt((1.0 + n1 / (2 * k)) * (n1 + 1.0));
    r.Kminus_elem = std::sqrt((1.0 + (n2 - 1.0) / (2 * k)) * double(n2));
    r.K3_limit = 1.0;
    r.Kplus_limit = std::sqrt(n1 + 1.0);
    r.Kminus_limit = std::sqrt(double(n2));
    if (i > 0) {
      const auto& q = t.rows.back();
      auto closer = [](double now, double before, double lim) {
        return std::abs(now - lim) <= std::abs(before - lim);
      };
      t.monotone = t.monotone && closer(r.K3_diag, q.K3_diag, 1.0) &&
                   closer(r.Kplus_elem, q.Kplus_elem, r.Kplus_limit) &&
                   closer(r.Kminus_elem, q.Kminus_elem, r.Kminus_limit);
    }
    t.rows.push_back(r);
  }
  return t;
}

HolsteinPrimakoff holstein_primakoff(const RepParams& p) {
  p.validate();
  const int N = p.cutoff;
  Mat a = boson_annihilator(N);
  Eigen::VectorXcd s(N);
  for (int n = 0; n < N; ++n) s(n) = std::sqrt(n + 2 * p.k);
  Mat Kp = a.adjoint() * s.asDiagonal();
  Mat Km = s.asDiagonal() * a;
  Mat K0 = Mat::Zero(N, N);
  for (int n = 0; n < N; ++n) K0(n, n) = n + p.k;
  return {wrap(Kp, false), wrap(Km, false), wrap(K0, true)};
}

}  // namespace so12
