#include "so12/coherent.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "so12/kahan.hpp"

namespace so12 {

namespace {

// log |c_n|^2 given as a function of n; returns normalized-family vector with exact tail
StateVector build(double k, int cutoff, const std::function<double(int)>& log_w,
                  const std::function<double(int)>& phase) {
  int N = cutoff > 0 ? std::max(cutoff, 4) : 16;
  for (;;) {
    // tail: sum of weights from N on, until they are negligible and decreasing
    Kahan<double> tail;
    for (int n = N; n < N + 1000000; ++n) {
      const double lw = log_w(n);
      tail.add(std::exp(lw));
      if (lw < -78 && log_w(n + 1) < lw) break;
    }
    const double tn = std::sqrt(std::max(tail.sum, 0.0));
    if (tn < kTailTol || N >= kMaxCutoff) {
      if (tn >= kTailTol) throw CutoffExhausted("state tail exceeds 1e-8 at the maximal cutoff 2048");
      StateVector v;
      v.k = k;
      v.coeffs.resize(N);
      for (int n = 0; n < N; ++n) v.coeffs(n) = std::polar(std::exp(0.5 * log_w(n)), phase(n));
      v.tail_norm = tn;
      return v;
    }
    N = std::min(2 * N, kMaxCutoff);
  }
}

double log_g_real(double k, double x) { return log_g_k(k, cplx(x, 0.0)).value.real(); }

// Poisson-weighted sum e^{-x} sum f(n) x^n/n!
double poisson_sum(double x, const std::function<double(double)>& f) {
  if (x == 0) return f(0);
  const double lx = std::log(x);
  const double c = std::floor(x);
  const double width = 12 * std::sqrt(x) + 40;
  Kahan<double> s;
  for (double n = std::max(0.0, c - width); n <= c + width; n += 1.0)
    s.add(std::exp(n * lx - x - std::lgamma(n + 1)) * f(n));
  return s.sum;
}

}  // namespace

PerelomovState PerelomovState::from_lambda(double k, cplx lambda) {
  if (!(k > 0)) throw DomainError("Perelomov state: k must be positive");
  const double r = std::abs(lambda);
  if (!(r < 1)) throw DomainError("Perelomov state: |lambda| must be < 1");
  return {k, lambda, std::polar(2 * std::atanh(r), std::arg(lambda))};
}

PerelomovState PerelomovState::from_w(double k, cplx w) {
  if (!(k > 0)) throw DomainError("Perelomov state: k must be positive");
  return {k, std::polar(std::tanh(0.5 * std::abs(w)), std::arg(w)), w};
}

StateVector bg_amplitudes(const BGState& s, int cutoff) {
  if (!(s.k > 0)) throw DomainError("BG state: k must be positive");
  const double r = std::abs(s.z), ph = std::arg(s.z);
  if (r == 0) {
    StateVector v;
    v.k = s.k;
    v.coeffs = Vec::Zero(std::max(cutoff, 4));
    v.coeffs(0) = 1.0;
    return v;
  }
  const double lg = log_g_real(s.k, r * r), lr = std::log(r);
  return build(
      s.k, cutoff,
      [&](int n) { return 2 * n * lr - log_pochhammer(2 * s.k, n) - std::lgamma(n + 1.0) - lg; },
      [&](int n) { return n * ph; });
}

StateVector perelomov_amplitudes(const PerelomovState& s, int cutoff) {
  const double r = std::abs(s.lambda), ph = std::arg(s.lambda);
  if (!(r < 1)) throw DomainError("Perelomov state: |lambda| must be < 1");
  if (r == 0) {
    StateVector v;
    v.k = s.k;
    v.coeffs = Vec::Zero(std::max(cutoff, 4));
    v.coeffs(0) = 1.0;
    return v;
  }
  const double l1 = std::log1p(-r * r), lr = std::log(r);
  return build(
      s.k, cutoff,
      [&](int n) { return 2 * s.k * l1 + log_pochhammer(2 * s.k, n) - std::lgamma(n + 1.0) + 2 * n * lr; },
      [&](int n) { return n * ph; });
}

StateVector sg_amplitudes(const SGState& s, int cutoff) {
  if (!(s.k > 0)) throw DomainError("SG state: k must be positive");
  const double r = std::abs(s.alpha), ph = std::arg(s.alpha);
  if (r == 0) {
    StateVector v;
    v.k = s.k;
    v.coeffs = Vec::Zero(std::max(cutoff, 4));
    v.coeffs(0) = 1.0;
    return v;
  }
  const double lr = std::log(r);
  return build(
      s.k, cutoff, [&](int n) { return -r * r + 2 * n * lr - std::lgamma(n + 1.0); },
      [&](int n) { return n * ph; });
}

double bg_number_prob(double k, cplx z, int n) {
  if (n < 0) throw DomainError("bg_number_prob: n must be non-negative");
  const double r = std::abs(z);
  if (r == 0) return n == 0 ? 1.0 : 0.0;
  return std::exp(2 * n * std::log(r) - log_pochhammer(2 * k, n) - std::lgamma(n + 1.0) - log_g_real(k, r * r));
}

double bg_inv_sqrt_series(double k, double r) {
  if (r == 0) return 1 / std::sqrt(2 * k);
  const double lg = log_g_real(k, r * r), lr = std::log(r);
  Kahan<double> s;
  const double peak = r;
  for (int n = 0; n < 100000; ++n) {
    const double w = std::exp(2 * n * lr - log_pochhammer(2 * k, n) - std::lgamma(n + 1.0) - lg);
    s.add(w / std::sqrt(2 * k + n));
    if (n > peak && w < 1e-18 * s.sum) break;
  }
  return s.sum;
}

double bg_inv_sqrt_integral(double k, double r) {
  if (r == 0) return 1 / std::sqrt(2 * k);
  const double x = r * r;
  const double lg = log_g_real(k, x);
  // t = u^2 removes the t^{-1/2} endpoint singularity; t in [0, 40]
  auto f = [&](double u) {
    const double t = u * u;
    return 2 * std::exp(-2 * k * t + log_g_real(k, x * std::exp(-t)) - lg);
  };
  const double um = std::sqrt(40.0);
  // split where the integrand decays, width ~ r^{-1/2}
  const double b = std::min(um, 8 / std::sqrt(r + 1));
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double v = GK::integrate(f, 0.0, b, 12, 1e-13) + GK::integrate(f, b, um, 12, 1e-13);
  return v / std::sqrt(std::numbers::pi);
}

BGExpectations bg_expectations(double k, cplx z) {
  if (!(k > 0)) throw DomainError("bg_expectations: k must be positive");
  const double r = std::abs(z), phi = std::arg(z);
  const double rho = rho_k(k, r);
  BGExpectations e{};
  e.K0 = k + r * rho;
  e.K0_sq = k * k + r * r + r * rho;
  e.var_K0 = r * r * (1 - rho * rho) + (1 - 2 * k) * r * rho;
  e.Nbar = r * rho;
  e.var_N = e.var_K0;
  if (e.Nbar > 0) {
    e.R = 1 / (rho * rho) - 2 * k / (r * rho) - 1;
    e.Q = r * (1 / rho - rho) - 2 * k;
  }
  e.K1 = r * std::cos(phi);
  e.K2 = -r * std::sin(phi);
  e.K1_sq = r * r * std::cos(phi) * std::cos(phi) + 0.5 * e.K0;
  e.K2_sq = r * r * std::sin(phi) * std::sin(phi) + 0.5 * e.K0;
  e.var_K1 = e.var_K2 = 0.5 * e.K0;
  e.anticomm = -r * r * std::sin(2 * phi);
  e.S_corr = 0.5 * e.anticomm - e.K1 * e.K2;
  e.E_inv = r > 0 ? rho / r : 1 / (2 * k);
  e.E_inv_sqrt = r <= 20 ? bg_inv_sqrt_series(k, r) : bg_inv_sqrt_integral(k, r);
  e.a_expect = z * e.E_inv_sqrt;
  return e;
}

cplx bg_overlap(double k, cplx z2, cplx z1) {
  const cplx lnum = log_g_k(k, std::conj(z2) * z1).value;
  const double lden = 0.5 * (log_g_real(k, std::norm(z2)) + log_g_real(k, std::norm(z1)));
  return std::exp(lnum - lden);
}

PerelomovExpectations perelomov_expectations(double k, cplx lambda) {
  if (!(k > 0)) throw DomainError("perelomov_expectations: k must be positive");
  const double r = std::abs(lambda), th = std::arg(lambda);
  if (!(r < 1)) throw DomainError("perelomov_expectations: |lambda| must be < 1");
  const double r2 = r * r, d = 1 - r2, d2 = d * d;
  PerelomovExpectations e{};
  e.K0 = k * (1 + r2) / d;
  e.K0_sq = k * k * (1 + r2) * (1 + r2) / d2 + 2 * k * r2 / d2;
  e.var_K0 = 2 * k * r2 / d2;
  e.Nbar = e.K0 - k;
  e.var_N = e.var_K0;
  e.R = 1 / (2 * k);
  if (e.Nbar > 0) e.Q = e.Nbar / (2 * k);
  e.K1 = 2 * k * r / d * std::cos(th);
  e.K2 = -2 * k * r / d * std::sin(th);
  const double p = 1 + 2 * r2 * std::cos(2 * th) + r2 * r2;  // |1+lambda^2|^2
  const double m = 1 - 2 * r2 * std::cos(2 * th) + r2 * r2;  // |1-lambda^2|^2
  e.var_K1 = 0.5 * k * p / d2;
  e.var_K2 = 0.5 * k * m / d2;
  e.K1_sq = e.var_K1 + e.K1 * e.K1;
  e.K2_sq = e.var_K2 + e.K2 * e.K2;
  e.S_corr = -k * r2 * std::sin(2 * th) / d2;
  e.sum_sq_identity = e.K1 * e.K1 + e.K2 * e.K2 - e.K0 * e.K0 + k * k;
  e.fluct_identity = e.var_K1 + e.var_K2 - e.var_K0 - k;
  return e;
}

double perelomov_number_prob(double k, cplx lambda, int n) {
  const double r = std::abs(lambda);
  if (!(r < 1)) throw DomainError("perelomov_number_prob: |lambda| must be < 1");
  if (r == 0) return n == 0 ? 1.0 : 0.0;
  return std::exp(2 * k * std::log1p(-r * r) + log_pochhammer(2 * k, n) - std::lgamma(n + 1.0) + 2 * n * std::log(r));
}

double bose_statistics(double lm, int n) {
  if (!(lm > 0 && lm < 1)) throw DomainError("bose_statistics: need 0 < |lambda| < 1");
  return (1 - lm * lm) * std::pow(lm, 2 * n);
}

double sg_h1(double k, double r) {
  return poisson_sum(r * r, [k](double n) { return std::sqrt(2 * k + n); });
}

double sg_h2(double k, double r) {
  return poisson_sum(r * r, [k](double n) { return std::sqrt((2 * k + n) * (2 * k + n + 1)); });
}

SGExpectations sg_expectations(double k, cplx alpha) {
  if (!(k > 0)) throw DomainError("sg_expectations: k must be positive");
  const double r = std::abs(alpha), b = std::arg(alpha), r2 = r * r;
  SGExpectations e{};
  e.h1 = sg_h1(k, r);
  e.h2 = sg_h2(k, r);
  e.h = 0.5 * r2 * r2 - 0.5 * (e.h2 - 2 * k - 1) * r2 + 0.5 * k;
  const double c = std::cos(b), s = std::sin(b);
  e.K1 = r * c * e.h1;
  e.K2 = -r * s * e.h1;
  e.K0 = r2 + k;
  e.K0_sq = (r2 + k) * (r2 + k) + r2;
  e.var_K0 = r2;
  e.K1_sq = r2 * c * c * e.h2 + e.h;
  e.K2_sq = r2 * s * s * e.h2 + e.h;
  const double dh = e.h2 - e.h1 * e.h1;
  e.var_K1 = r2 * c * c * dh + e.h;
  e.var_K2 = r2 * s * s * dh + e.h;
  e.S_corr = -0.5 * r2 * std::sin(2 * b) * dh;
  return e;
}

SGAsymptotics sg_asymptotics(double k, double r, int order) {
  if (r < 5) throw DomainError("sg_asymptotics: requires |alpha| >= 5");
  if (order < 0 || order > 2) throw DomainError("sg_asymptotics: order must be 0, 1 or 2");
  const double x = 1 / (r * r);
  const double c14 = -0.5 * k * k + 0.375 * k - 7.0 / 128;
  auto poly = [&](std::initializer_list<double> c) {
    double s = 0, p = 1;
    int j = 0;
    for (double v : c) {
      if (j++ > order) break;
      s += v * p;
      p *= x;
    }
    return s;
  };
  SGAsymptotics a;
  a.h1 = r * poly({1, k - 0.125, c14});
  a.h1_sq = r * r * poly({1, 2 * k - 0.25, 0.5 * k - 3.0 / 32});
  a.h2 = r * r * poly({1, 2 * k + 0.5, -0.125});
  a.diff = poly({0.75, -0.5 * k - 1.0 / 32});
  a.h = 0.25 * r * r * poly({1, 2 * k + 0.25});
  return a;
}

CrossOverlaps cross_overlaps(double k, cplx alpha, cplx z, cplx lambda) {
  if (!(k > 0)) throw DomainError("cross_overlaps: k must be positive");
  const double rl = std::abs(lambda);
  if (!(rl < 1)) throw DomainError("cross_overlaps: |lambda| must be < 1");
  const cplx u = std::conj(alpha) * z, v = std::conj(alpha) * lambda;
  Kahan<cplx> C, D;
  cplx tc = 1.0, td = 1.0;  // u^n/(sqrt((2k)_n) n!), sqrt((2k)_n) v^n / n!
  const double big = std::max(std::abs(u), std::abs(v));
  for (int n = 0; n < 100000; ++n) {
    C.add(tc);
    D.add(td);
    const double g = std::sqrt(2 * k + n);
    tc *= u / (g * (n + 1.0));
    td *= v * g / (n + 1.0);
    if (n > 2 * big + 10 && std::abs(tc) < 1e-17 * std::abs(C.sum) && std::abs(td) < 1e-17 * std::abs(D.sum)) break;
  }
  CrossOverlaps o;
  o.C_k = C.sum;
  o.D_k = D.sum;
  const double lgz = log_g_real(k, std::norm(z));
  const double ea = std::exp(-0.5 * std::norm(alpha));
  const double pl = std::pow(1 - rl * rl, k);
  o.overlap_az = ea * std::exp(-0.5 * lgz) * o.C_k;
  o.overlap_al = ea * pl * o.D_k;
  o.overlap_lz = pl * std::exp(std::conj(lambda) * z - 0.5 * lgz);
  return o;
}

Evolved<BGState> time_evolve(const BGState& s, double t) {
  return {{s.k, s.z * std::polar(1.0, -t)}, std::polar(1.0, -s.k * t)};
}

Evolved<PerelomovState> time_evolve(const PerelomovState& s, double t) {
  const cplx ph = std::polar(1.0, -t);
  return {{s.k, s.lambda * ph, s.w * ph}, std::polar(1.0, -s.k * t)};
}

Evolved<SGState> time_evolve(const SGState& s, double t) {
  return {{s.k, s.alpha * std::polar(1.0, -t)}, std::polar(1.0, -s.k * t)};
}

cplx expect(const StateVector& v, const Mat& op) {
  const int n = std::min<int>(v.cutoff(), op.rows());
  return v.coeffs.head(n).dot(op.topLeftCorner(n, n) * v.coeffs.head(n));
}

}  // namespace so12
