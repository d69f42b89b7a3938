#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "so12/coherent.hpp"
#include "so12/hardy.hpp"
#include "so12/interference.hpp"
#include "so12/phase_dist.hpp"
#include "so12/squeeze.hpp"

namespace so12::cli {

namespace {

const double pi = std::numbers::pi;
const cplx I(0, 1);

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Mat sub(const Mat& m, const std::vector<int>& idx) {
  Mat r(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) r(i, j) = m(idx[i], idx[j]);
  return r;
}

Check exact(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0, Compare::abs, ""}; }

struct Moments {
  double K0, K0_sq, K1, K2, K1_sq, K2_sq, N, N_sq;
  double var1() const { return K1_sq - K1 * K1; }
  double var2() const { return K2_sq - K2 * K2; }
};

Moments moments(const StateVector& v) {
  auto g = build_generators({v.k, v.cutoff() + 2});
  const Mat &K0 = g.K0.entries, &K1 = g.K1.entries, &K2 = g.K2.entries;
  Moments m;
  m.K0 = expect(v, K0).real();
  m.K0_sq = expect(v, K0 * K0).real();
  m.K1 = expect(v, K1).real();
  m.K2 = expect(v, K2).real();
  m.K1_sq = expect(v, K1 * K1).real();
  m.K2_sq = expect(v, K2 * K2).real();
  m.N = m.K0 - v.k;
  m.N_sq = m.K0_sq - 2 * v.k * m.K0 + v.k * v.k;
  return m;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

Criterion casimir_identity() {
  Criterion c{1, "Casimir identity K1^2 + K2^2 - K0^2 = k(1-k)", {}};
  for (double k : {0.25, 0.5, 0.75, 1.0, 1.5}) {
    const Mat L = casimir({k, 64}).entries;
    c.checks.push_back({"interior residual k=" + num(k), interior_max(L - k * (1 - k) * Mat::Identity(64, 64)), 0,
                        1e-10, Compare::abs, "N=64"});
  }
  c.checks.push_back({"k(1-k) at k=1/2", 0.5 * (1 - 0.5), 0.25, 0, Compare::abs, "closed form"});
  c.checks.push_back({"k(1-k) at k=1/4", 0.25 * (1 - 0.25), 3.0 / 16, 0, Compare::abs, "closed form"});
  c.checks.push_back({"k(1-k) at k=3/4", 0.75 * (1 - 0.75), 3.0 / 16, 0, Compare::abs, "closed form"});
  c.checks.push_back({"k(1-k) at k=1", 1.0 * (1 - 1.0), 0, 0, Compare::abs, "closed form"});
  return c;
}

Criterion ground_state() {
  Criterion c{2, "ground-state fluctuations var K1 = var K2 = k/2", {}};
  for (double k : {0.25, 0.5, 0.75, 1.0, 1.5}) {
    auto st = number_state_stats(k, 0);
    c.checks.push_back({"var_K1 closed k=" + num(k), st.var_K1, k / 2, 1e-12, Compare::abs, ""});
    c.checks.push_back({"var_K2 closed k=" + num(k), st.var_K2, k / 2, 1e-12, Compare::abs, ""});
    auto g = build_generators({k, 32});
    const Mat &K1 = g.K1.entries, &K2 = g.K2.entries;
    const double v1 = (K1 * K1)(0, 0).real() - std::norm(K1(0, 0));
    const double v2 = (K2 * K2)(0, 0).real() - std::norm(K2(0, 0));
    c.checks.push_back({"var_K1 matrix k=" + num(k), v1, k / 2, 1e-10, Compare::abs, "N=32"});
    c.checks.push_back({"var_K2 matrix k=" + num(k), v2, k / 2, 1e-10, Compare::abs, "N=32"});
  }
  return c;
}

Criterion bg_minimal() {
  Criterion c{3, "BG minimal uncertainty var K1 var K2 = <K0>^2/4", {}};
  const cplx z = std::polar(2.0, pi / 3);
  auto e = bg_expectations(0.5, z);
  c.checks.push_back({"closed form", e.var_K1 * e.var_K2, e.K0 * e.K0 / 4, 1e-8, Compare::rel, "k=1/2"});
  auto v = bg_amplitudes({0.5, z});
  auto m = moments(v);
  c.checks.push_back({"matrices, N auto", m.var1() * m.var2(), m.K0 * m.K0 / 4, 1e-8, Compare::rel,
                      "N=" + std::to_string(v.cutoff())});
  return c;
}

Criterion mandel_q() {
  Criterion c{4, "BG Mandel Q approaches -1/2", {}};
  double prev = 1e300;
  bool monotone = true;
  double q50 = 0;
  for (double r : {10.0, 20.0, 50.0}) {
    const double q = *bg_expectations(0.5, r).Q;
    // direct series over the number distribution
    double s1 = 0, s2 = 0, p_tot = 0;
    for (int n = 0; n < 4000; ++n) {
      const double p = bg_number_prob(0.5, r, n);
      s1 += n * p;
      s2 += double(n) * n * p;
      p_tot += p;
      if (n > 2 * r && p < 1e-20) break;
    }
    const double Nbar = s1 / p_tot, varN = s2 / p_tot - Nbar * Nbar;
    c.checks.push_back({"Q closed vs series |z|=" + num(r), q, (varN - Nbar) / Nbar, 1e-6, Compare::abs, ""});
    monotone = monotone && std::abs(q + 0.5) < prev;
    prev = std::abs(q + 0.5);
    q50 = q;
  }
  c.checks.push_back(exact("|Q + 1/2| decreasing over |z| = 10, 20, 50", monotone));
  c.checks.push_back({"|Q(50) + 1/2|", std::abs(q50 + 0.5), 0.02, 0, Compare::below, ""});
  return c;
}

Criterion perelomov_r() {
  Criterion c{5, "Perelomov R = 1/(2k)", {}};
  for (double k : {0.5, 1.0, 1.5})
    c.checks.push_back({"closed form k=" + num(k), perelomov_expectations(k, 0.5).R, 1 / (2 * k), 0, Compare::abs, ""});
  auto m = moments(perelomov_amplitudes(PerelomovState::from_lambda(1.0, 0.5), 256));
  const double R = (m.N_sq - m.N * m.N - m.N) / (m.N * m.N);
  c.checks.push_back({"matrices k=1 lambda=0.5", R, 0.5, 1e-8, Compare::rel, "N=256"});
  return c;
}

Criterion perelomov_squeeze() {
  Criterion c{6, "Perelomov squeezing var = k/2 below <K0>/2", {}};
  const double k = 0.5;
  const double half_K0 = k * (1 + 0.25) / (1 - 0.25) / 2;
  for (double theta : {0.0, pi / 2}) {
    const cplx lam = std::polar(0.5, theta);
    auto e = perelomov_expectations(k, lam);
    const double sq = std::min(e.var_K1, e.var_K2);
    const std::string t = theta == 0 ? "theta=0" : "theta=pi/2";
    c.checks.push_back({"squeezed variance " + t, sq, 0.25, 1e-10, Compare::abs, ""});
    c.checks.push_back({"<K0>/2 " + t, e.K0 / 2, half_K0, 1e-10, Compare::abs, ""});
    c.checks.push_back({"variance below <K0>/2 " + t, sq, e.K0 / 2, 0, Compare::below, ""});
    auto m = moments(perelomov_amplitudes(PerelomovState::from_lambda(k, lam), 256));
    c.checks.push_back({"squeezed variance matrices " + t, std::min(m.var1(), m.var2()), 0.25, 1e-10, Compare::abs,
                        "N=256"});
  }
  return c;
}

Criterion transitions() {
  Criterion c{7, "transition amplitudes on the half line", {}};
  struct Want {
    int m, n;
    double value;
    bool imaginary;  // compare Im c, else Re c
    std::string label;
  };
  const std::vector<Want> wants = {
      {0, 0, 0.6965, false, "c00"}, {1, 0, 0.0351, false, "c10"}, {0, 1, -0.5173, true, "Im c01"},
      {0, 2, 0.2586, false, "c02"}};
  for (const auto& w : wants) {
    auto t = transition_amplitude(w.m, w.n);
    auto part = [&](cplx z) { return w.imaginary ? z.imag() : z.real(); };
    auto other = [&](cplx z) { return w.imaginary ? z.real() : z.imag(); };
    const std::string note = w.label == "c02" ? "defining integral gives pi^{-1/4}(2 - 3 M0)" : "";
    c.checks.push_back({w.label + " quadrature", part(t.quadrature), w.value, 1e-3, Compare::abs, note});
    c.checks.push_back({w.label + " quadrature, other part", other(t.quadrature), 0, 1e-3, Compare::abs, ""});
    if (t.closed_form)
      c.checks.push_back({w.label + " erfc closed form", part(*t.closed_form), w.value, 1e-3, Compare::abs, note});
  }
  auto c00 = transition_amplitude(0, 0);
  c.checks.push_back({"|c00|^2 quadrature", std::norm(c00.quadrature), 0.4851, 1e-3, Compare::abs, ""});
  if (c00.closed_form)
    c.checks.push_back({"|c00|^2 closed form", std::norm(*c00.closed_form), 0.4851, 1e-3, Compare::abs, ""});
  c.checks.push_back({"erfc(1/sqrt 2)", erf_family(cplx(1 / std::sqrt(2.0), 0)).erfc.real(), 0.31731, 5e-6,
                      Compare::abs, ""});
  return c;
}

Criterion cos_sin() {
  Criterion c{8, "cos/sin variants, ground-state squares", {}};
  auto v = cos_sin_variants(0.5, 16);
  auto sq0 = [](const OperatorMatrix& m) { return (m.entries * m.entries)(0, 0).real(); };
  c.checks.push_back({"Ctilde^2", sq0(v.Ctilde), 0.25, 1e-12, Compare::abs, ""});
  c.checks.push_back({"Stilde^2", sq0(v.Stilde), 0.25, 1e-12, Compare::abs, ""});
  c.checks.push_back({"Chat^2", sq0(v.Chat), 9.0 / 64, 1e-12, Compare::abs, ""});
  c.checks.push_back({"Shat^2", sq0(v.Shat), 9.0 / 64, 1e-12, Compare::abs, ""});
  c.checks.push_back({"Ccheck^2", sq0(v.Ccheck), 4.0 / 9, 1e-12, Compare::abs, ""});
  c.checks.push_back({"Scheck^2", sq0(v.Scheck), 4.0 / 9, 1e-12, Compare::abs, ""});
  return c;
}

Criterion completeness() {
  Criterion c{9, "completeness quadratures and radial moments", {}};
  double sg = 0;
  for (double k : {0.5, 1.0}) {
    double bg = 0, pe = 0;
    for (int n2 = 0; n2 <= 10; ++n2)
      for (int n1 : {n2, (n2 + 3) % 11}) {
        const double delta = n1 == n2 ? 1.0 : 0.0;
        bg = std::max(bg, std::abs(bg_completeness(k, n2, n1) - delta));
        pe = std::max(pe, std::abs(perelomov_completeness(k, n2, n1) - delta));
        if (k == 0.5) sg = std::max(sg, std::abs(sg_completeness(n2, n1) - delta));
      }
    c.checks.push_back({"BG max |delta error| k=" + num(k), bg, 0, 1e-8, Compare::abs, "n <= 10"});
    c.checks.push_back({"Perelomov max |delta error| k=" + num(k), pe, 0, 1e-8, Compare::abs, "n <= 10"});
    for (int n = 0; n <= 6; ++n)
      c.checks.push_back({"radial moment k=" + num(k) + " n=" + std::to_string(n), bg_radial_moment(k, n),
                          std::tgamma(n + 1.0) * std::tgamma(2 * k + n) / 4, 1e-9, Compare::rel, ""});
  }
  c.checks.push_back({"SG max |delta error|", sg, 0, 1e-8, Compare::abs, "n <= 10"});
  return c;
}

Criterion brackets() {
  Criterion c{10, "classical bracket algebra", {}};
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<TwoModePoint> pts;
  for (int i = 0; i < 100; ++i) pts.push_back({u(rng), u(rng), u(rng), u(rng)});

  auto pb = [](int i, int j, const TwoModePoint& x) {
    return poisson_bracket(g_observable(i), g_observable(j), x);
  };
  auto gv = [](int i, const TwoModePoint& x) { return g_observable(i).value(x); };
  double su2 = 0, so12g = 0;
  for (auto& x : pts) {
    su2 = std::max({su2, std::abs(pb(1, 2, x) - gv(3, x)), std::abs(pb(2, 3, x) - gv(1, x)),
                    std::abs(pb(3, 1, x) - gv(2, x))});
    so12g = std::max({so12g, std::abs(pb(0, 4, x) + gv(5, x)), std::abs(pb(0, 5, x) - gv(4, x)),
                      std::abs(pb(4, 5, x) - gv(0, x))});
  }
  double h = 0;
  for (double phi : {-2.0, 0.3, 1.7})
    for (double Iv : {0.2, 1.0, 3.5}) {
      PlaneValue h0 = h_function(0, phi, Iv), h1 = h_function(1, phi, Iv), h2 = h_function(2, phi, Iv);
      h = std::max({h, std::abs(plane_bracket(h0, h1) + h2.value), std::abs(plane_bracket(h0, h2) - h1.value),
                    std::abs(plane_bracket(h1, h2) - h0.value)});
    }
  c.checks.push_back({"so(1,2) of h0, h1, h2", h, 0, 1e-9, Compare::abs, ""});
  c.checks.push_back({"su(2) of g1, g2, g3", su2, 0, 1e-9, Compare::abs, "100 points"});
  c.checks.push_back({"so(1,2) of g0, g4, g5", so12g, 0, 1e-9, Compare::abs, "{g4,g5} = +g0"});
  c.checks.push_back({"sp(4) closure residual", bracket_closure_residual(sp4_algebra(), pts), 0, 1e-9, Compare::abs,
                      "100 points, analytic gradients"});
  return c;
}

Criterion sp4_matrices() {
  Criterion c{11, "sp(4,R)/so(2,3) matrices in rational arithmetic", {}};
  Sp4Algebra alg = sp4_algebra();
  Sp4Report r = sp4_verify(alg);
  c.checks.push_back(exact("symplectic condition", r.symplectic));
  c.checks.push_back(exact("root set", r.roots));
  c.checks.push_back(exact("su(2) subalgebra", r.su2));
  c.checks.push_back(exact("nilpotent table", r.nilpotent));
  c.checks.push_back(exact("so(2,3) commutators via m_jk table", r.so23));
  c.checks.push_back(exact("matrix structure constants = Poisson", r.poisson_homomorphism));
  for (int j = 0; j < 10; ++j)
    c.checks.push_back(exact("printed decomposition of g" + std::to_string(j), r.ghat_printed[j]));
  return c;
}

Criterion rep_class() {
  Criterion c{12, "representation classification and Casimirs", {}};
  RepClass a = rep_classification(0.5, 0.0), b = rep_classification(1.0, 0.5);
  c.checks.push_back(exact("(1/2, 0) valid with one sp(2) pair", a.valid && a.sp2_indices.size() == 1));
  if (a.sp2_indices.size() == 1)
    c.checks.push_back({"(1/2, 0) k", a.sp2_indices[0].first, 0.25, 1e-15, Compare::abs, ""});
  c.checks.push_back(exact("(1, 1/2) valid with two sp(2) pairs", b.valid && b.sp2_indices.size() == 2));
  if (b.sp2_indices.size() == 2) {
    auto ks = std::minmax(b.sp2_indices[0].first, b.sp2_indices[1].first);
    c.checks.push_back({"(1, 1/2) smaller k", ks.first, 0.25, 1e-15, Compare::abs, ""});
    c.checks.push_back({"(1, 1/2) larger k", ks.second, 0.75, 1e-15, Compare::abs, ""});
  }
  const int N = 12;
  Sp4Quantum q = sp4_two_mode(N);
  std::vector<int> even, odd;
  for (int n1 = 0; n1 <= 3; ++n1)
    for (int n2 = 0; n2 <= 3; ++n2) ((n1 + n2) % 2 ? odd : even).push_back(n1 * N + n2);
  auto dev = [&](const Mat& C, const std::vector<int>& idx, double l) {
    Mat s = sub(C, idx);
    return max_abs(s - l * Mat::Identity(s.rows(), s.cols()));
  };
  c.checks.push_back({"C2 even sector vs l2(1/2, 0)", dev(q.C2, even, a.l2), 0, 1e-10, Compare::abs, "n1, n2 <= 3"});
  c.checks.push_back({"C2 odd sector vs l2(1, 1/2)", dev(q.C2, odd, b.l2), 0, 1e-10, Compare::abs, "n1, n2 <= 3"});
  c.checks.push_back({"C4 even sector vs l4(1/2, 0)", dev(q.C4, even, a.l4), 0, 1e-10, Compare::abs, "n1, n2 <= 3"});
  c.checks.push_back({"C4 odd sector vs l4(1, 1/2)", dev(q.C4, odd, b.l4), 0, 1e-10, Compare::abs, "n1, n2 <= 3"});
  return c;
}

Criterion rho_bound() {
  Criterion c{13, "rho_k < 1 and its asymptote", {}};
  for (double k : {0.25, 0.5, 1.0, 2.0}) {
    double mx = 0;
    for (int i = 0; i <= 1000; ++i) mx = std::max(mx, rho_k(k, 0.1 * i));
    c.checks.push_back({"max rho_k on [0, 100] k=" + num(k), mx, 1.0, 0, Compare::below,
                        k == 0.25 ? "rho = tanh(2x) here; 1 - rho < 1e-16 beyond x ~ 9 is below double resolution"
                                  : "step 0.1"});
    c.checks.push_back({"rho_k(100) vs 1 - (4k-1)/(4x) k=" + num(k), rho_k(k, 100.0), 1 - (4 * k - 1) / 400.0, 1e-3,
                        Compare::rel, ""});
  }
  return c;
}

Criterion barnes() {
  Criterion c{14, "Barnes-Hardy expansion", {}};
  const double a = 1, s = 0.5;
  std::vector<double> lx, le;
  for (double x : {15.0, 30.0, 60.0}) {
    const double lead = std::exp(x - s * std::log(x));
    const double d = std::abs(barnes_expansion(a, s, x, 2).value - barnes_series(a, s, x, 200).value) / lead;
    lx.push_back(std::log(x));
    le.push_back(std::log(d));
  }
  c.checks.push_back({"log-log slope of order-2 error / leading term", (le[2] - le[0]) / (lx[2] - lx[0]), -3.0, 0.3,
                      Compare::abs, "x = 15, 30, 60, a=1, s=1/2"});
  for (auto [aa, ss] : {std::pair{1.0, 0.5}, {0.5, 2.0}, {2.0, 1.0}}) {
    c.checks.push_back({"c0 a=" + num(aa) + " s=" + num(ss), barnes_coefficient(aa, ss, 0), 1.0, 1e-14, Compare::abs, ""});
    c.checks.push_back({"c1 a=" + num(aa) + " s=" + num(ss), barnes_coefficient(aa, ss, 1), (ss + 1) / 2 - aa, 1e-14,
                        Compare::abs, ""});
  }
  return c;
}

Criterion homodyne() {
  Criterion c{15, "homodyne Pythagoras deficit k(k-1)", {}};
  StateVector bg = bg_amplitudes({0.5, std::polar(1.3, 0.7)}, 40);
  HomodyneEstimates h = homodyne_estimators(TwoModeState::from_sector(0, bg));
  c.checks.push_back({"sector k=1/2", h.pythagoras_deficit, -0.25, 1e-10, Compare::abs, "BG state, d=0"});
  StateVector pe = perelomov_amplitudes(PerelomovState::from_lambda(1.0, std::polar(0.4, -0.5)), 40);
  HomodyneEstimates h1 = homodyne_estimators(TwoModeState::from_sector(1, pe));
  c.checks.push_back({"sector k=1", h1.pythagoras_deficit, 0.0, 1e-10, Compare::abs, "Perelomov state, d=1"});
  return c;
}

}  // namespace

double Check::delta() const {
  const double d = std::abs(computed - expected);
  return mode == Compare::rel ? d / std::max(std::abs(expected), 1e-300) : d;
}

bool Check::pass(double tol_cap) const {
  if (mode == Compare::below) return computed < expected;
  return delta() <= std::min(tol, tol_cap);
}

bool Criterion::pass(double tol_cap) const {
  return std::all_of(checks.begin(), checks.end(), [&](const Check& c) { return c.pass(tol_cap); });
}

std::vector<Criterion> acceptance_suite() {
  return {casimir_identity(), ground_state(), bg_minimal(), mandel_q(),  perelomov_r(),
          perelomov_squeeze(), transitions(), cos_sin(),  completeness(), brackets(),
          sp4_matrices(),      rep_class(),   rho_bound(), barnes(),     homodyne()};
}

}  // namespace so12::cli
