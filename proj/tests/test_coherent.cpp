#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "so12/coherent.hpp"

using namespace so12;

namespace {

const cplx I(0, 1);

struct Moments {
  double K0, K0_sq, K1, K2, K1_sq, K2_sq, anti, N, N_sq;
};

// quadratic forms with generators two rows larger than the vector
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
  m.anti = expect(v, K1 * K2 + K2 * K1).real();
  m.N = m.K0 - v.k;
  m.N_sq = m.K0_sq - 2 * v.k * m.K0 + v.k * v.k;
  return m;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("BG amplitudes") {
  auto v0 = bg_amplitudes({0.5, 0.0}, 8);
  CHECK(std::abs(v0.coeffs(0) - 1.0) == 0);
  CHECK(v0.coeffs.tail(7).norm() == 0);
  const cplx z = 2.0 * std::exp(I * std::numbers::pi / 3.0);
  auto v = bg_amplitudes({0.5, z});
  CHECK(v.tail_norm < kTailTol);
  CHECK(std::abs(v.coeffs.squaredNorm() + v.tail_norm * v.tail_norm - 1) < 1e-10);
  auto g = build_generators({0.5, v.cutoff()});
  const Vec res = g.Kminus.entries * v.coeffs - z * v.coeffs;
  CHECK(res.head(v.cutoff() - 1).norm() < 1e-13);
  CHECK(res.norm() < 1e-8 * (1 + std::abs(z)));
  CHECK(std::norm(v.coeffs(0)) == doctest::Approx(1 / g_k(0.5, 4.0).value).epsilon(1e-13));
  CHECK_THROWS_AS(bg_amplitudes({0.5, 2000.0}), CutoffExhausted);
}

TEST_CASE("BG closed forms versus matrices") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 50; ++i) {
    const double k = 0.2 + 2.5 * U(rng);
    const cplx z = std::polar(6 * U(rng) + 0.05, 2 * std::numbers::pi * U(rng));
    auto e = bg_expectations(k, z);
    auto m = moments(bg_amplitudes({k, z}));
    CHECK(rel(e.K0, m.K0) < 1e-7);
    CHECK(rel(e.K0_sq, m.K0_sq) < 1e-7);
    CHECK(std::abs(e.K1 - m.K1) < 1e-7 * (1 + std::abs(z)));
    CHECK(std::abs(e.K2 - m.K2) < 1e-7 * (1 + std::abs(z)));
    CHECK(rel(e.K1_sq, m.K1_sq) < 1e-7);
    CHECK(rel(e.K2_sq, m.K2_sq) < 1e-7);
    CHECK(std::abs(e.anticomm - m.anti) < 1e-7 * (1 + std::norm(z)));
    CHECK(rel(e.var_K0, m.K0_sq - m.K0 * m.K0) < 1e-6);
    // Casimir deficit
    CHECK(std::abs(m.K1_sq + m.K2_sq - m.K0_sq - k * (1 - k)) < 1e-8 * (1 + m.K0_sq));
    CHECK(e.var_K1 * e.var_K2 == doctest::Approx(e.K0 * e.K0 / 4));
    CHECK(std::abs(e.S_corr) < 1e-12 * (1 + std::norm(z)));
    const double Q = (m.N_sq - m.N * m.N - m.N) / m.N;
    CHECK(std::abs(*e.Q - Q) < 1e-6);
  }
}

TEST_CASE("BG special values") {
  auto e0 = bg_expectations(0.7, 0.0);
  CHECK(e0.K0 == 0.7);
  CHECK(!e0.Q.has_value());
  auto e = bg_expectations(1.0, 3.0 * std::exp(0.7 * I));
  CHECK(std::atan2(-e.K2, e.K1) == doctest::Approx(0.7));
  // k independence of <K1>, <K2>
  for (double k : {0.25, 0.5, 1.0, 3.0}) {
    auto m = moments(bg_amplitudes({k, cplx(1.2, -0.7)}));
    CHECK(std::abs(m.K1 - 1.2) < 1e-9);
    CHECK(std::abs(m.K2 - 0.7) < 1e-9);
  }
  // <(K0+k)^{-1}> and <(K0+k)^{-1/2}> against direct vector sums
  const double k = 0.75;
  const cplx z(2.0, 1.0);
  auto v = bg_amplitudes({k, z});
  double inv = 0, isq = 0;
  for (int n = 0; n < v.cutoff(); ++n) {
    inv += std::norm(v.coeffs(n)) / (2 * k + n);
    isq += std::norm(v.coeffs(n)) / std::sqrt(2 * k + n);
  }
  auto ez = bg_expectations(k, z);
  CHECK(rel(ez.E_inv, inv) < 1e-9);
  CHECK(rel(ez.E_inv_sqrt, isq) < 1e-9);
  auto ca = composite_ladder({k, v.cutoff() + 2});
  CHECK(std::abs(expect(v, ca.a.entries) - ez.a_expect) < 1e-8);
  // series and integral representations agree across the switch
  for (double r : {0.5, 5.0, 20.0, 25.0})
    for (double kk : {0.25, 0.5, 2.0}) CHECK(rel(bg_inv_sqrt_integral(kk, r), bg_inv_sqrt_series(kk, r)) < 1e-9);
  // large-|z| form 1087
  const double r = 200;
  CHECK(rel(bg_inv_sqrt_integral(0.5, r), std::pow(r, -0.5) * (1 - 0.75 / (4 * r))) < 1e-4);
}

TEST_CASE("BG Mandel Q approaches -1/2") {
  double prev = 1e300;
  for (double r : {10.0, 20.0, 50.0}) {
    auto v = bg_amplitudes({0.5, r});
    auto m = moments(v);
    const double Q = (m.N_sq - m.N * m.N - m.N) / m.N;
    const double q = *bg_expectations(0.5, r).Q;
    CHECK(std::abs(q - Q) < 1e-5);
    CHECK(std::abs(q + 0.5) < prev);
    prev = std::abs(q + 0.5);
  }
  CHECK(prev < 0.02);
}

TEST_CASE("BG overlap and number distribution") {
  CHECK(std::abs(bg_overlap(0.5, cplx(1, 2), cplx(1, 2)) - 1.0) < 1e-13);
  CHECK(std::abs(bg_overlap(0.8, 0.0, cplx(1.5, 0.3)) - 1 / std::sqrt(g_k(0.8, std::norm(cplx(1.5, 0.3))).value)) < 1e-13);
  auto v2 = bg_amplitudes({1.0, 1.0}, 256), v1 = bg_amplitudes({1.0, I}, 256);
  CHECK(std::abs(bg_overlap(1.0, 1.0, I) - v2.coeffs.dot(v1.coeffs)) < 1e-12);
  CHECK(bg_number_prob(0.5, 2.0, 0) == doctest::Approx(1 / g_k(0.5, 4.0).value));
  double s = 0;
  for (int n = 0; n < 400; ++n) s += bg_number_prob(0.75, 4.0, n);
  CHECK(std::abs(s - 1) < 1e-10);
  auto e = bg_expectations(0.5, 50.0);
  CHECK(e.var_N / e.Nbar == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("Perelomov states") {
  auto p = PerelomovState::from_lambda(1.0, std::polar(0.6, std::numbers::pi / 4));
  auto q = PerelomovState::from_w(1.0, p.w);
  CHECK(std::abs(q.lambda - p.lambda) < 1e-15);
  CHECK(std::arg(p.w) == doctest::Approx(std::arg(p.lambda)));
  auto v = perelomov_amplitudes(p);
  CHECK(std::abs(v.coeffs.squaredNorm() + v.tail_norm * v.tail_norm - 1) < 1e-10);
  // (K0+k)^{-1} K- v = lambda v
  auto g = build_generators({1.0, v.cutoff()});
  Vec d(v.cutoff());
  for (int n = 0; n < v.cutoff(); ++n) d(n) = 1.0 / (2.0 + n);
  CHECK((d.asDiagonal() * (g.Kminus.entries * v.coeffs) - p.lambda * v.coeffs).norm() < 1e-8);
  auto v0 = perelomov_amplitudes(PerelomovState::from_lambda(0.5, 0.0), 6);
  CHECK(std::abs(v0.coeffs(0) - 1.0) == 0);
  CHECK_THROWS_AS(PerelomovState::from_lambda(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(perelomov_expectations(0.5, 1.2), DomainError);
}

TEST_CASE("Perelomov closed forms versus matrices") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 50; ++i) {
    const double k = 0.2 + 2.5 * U(rng);
    const cplx l = std::polar(0.85 * U(rng) + 0.01, 2 * std::numbers::pi * U(rng));
    auto e = perelomov_expectations(k, l);
    auto m = moments(perelomov_amplitudes(PerelomovState::from_lambda(k, l)));
    CHECK(rel(e.K0, m.K0) < 1e-7);
    CHECK(rel(e.K0_sq, m.K0_sq) < 1e-7);
    CHECK(std::abs(e.K1 - m.K1) < 1e-7 * e.K0);
    CHECK(std::abs(e.K2 - m.K2) < 1e-7 * e.K0);
    CHECK(rel(e.var_K1, m.K1_sq - m.K1 * m.K1) < 1e-6);
    CHECK(rel(e.var_K2, m.K2_sq - m.K2 * m.K2) < 1e-6);
    CHECK(std::abs(e.S_corr - (0.5 * m.anti - m.K1 * m.K2)) < 1e-6 * e.K0_sq);
    CHECK(std::abs(e.sum_sq_identity) < 1e-10 * e.K0_sq);
    CHECK(std::abs(e.fluct_identity) < 1e-10 * e.K0_sq);
    CHECK(std::abs(e.var_K1 * e.var_K2 - e.K0 * e.K0 / 4 - e.S_corr * e.S_corr) < 1e-10 * e.K0_sq * e.K0_sq);
    CHECK(std::abs(m.K1_sq + m.K2_sq - m.K0_sq - k * (1 - k)) < 1e-8 * (1 + m.K0_sq));
  }
}

TEST_CASE("Perelomov R and squeezing") {
  auto v = perelomov_amplitudes(PerelomovState::from_lambda(1.0, 0.5), 256);
  auto m = moments(v);
  const double R = (m.N_sq - m.N * m.N - m.N) / (m.N * m.N);
  CHECK(std::abs(R - 0.5) / 0.5 < 1e-8);
  CHECK(perelomov_expectations(1.0, 0.3).R == 0.5);
  auto e0 = perelomov_expectations(0.5, 0.5);
  CHECK(std::abs(e0.var_K2 - 0.25) < 1e-12);
  CHECK(std::abs(e0.K0 / 2 - 0.5 * 0.5 * 1.25 / 0.75) < 1e-12);
  auto e1 = perelomov_expectations(0.5, 0.5 * I);
  CHECK(std::abs(e1.var_K1 - 0.25) < 1e-12);
  auto lam0 = perelomov_expectations(0.8, 0.0);
  CHECK(lam0.K0 == 0.8);
  CHECK(lam0.K1 == 0);
}

TEST_CASE("Bose statistics") {
  const double l = 0.7;
  CHECK(bose_statistics(l, 0) == doctest::Approx(1 - l * l));
  double s = 0, mean = 0;
  for (int n = 0; n < 2000; ++n) {
    s += bose_statistics(l, n);
    mean += n * bose_statistics(l, n);
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(mean == doctest::Approx(perelomov_expectations(0.5, l).Nbar).epsilon(1e-12));
  CHECK(perelomov_number_prob(0.5, l, 3) == doctest::Approx(bose_statistics(l, 3)));
}

TEST_CASE("SG states") {
  auto v0 = sg_amplitudes({0.5, 0.0}, 6);
  CHECK(std::abs(v0.coeffs(0) - 1.0) == 0);
  for (double k : {0.25, 2.0}) {
    auto v = sg_amplitudes({k, cplx(1.1, -0.8)});
    CHECK(moments(v).N == doctest::Approx(std::norm(cplx(1.1, -0.8))).epsilon(1e-9));
  }
  auto v = sg_amplitudes({1.0, 1.5 * I});
  auto c = composite_ladder({1.0, v.cutoff()});
  CHECK((c.a.entries * v.coeffs - 1.5 * I * v.coeffs).norm() < 1e-8);
}

TEST_CASE("SG closed forms versus matrices") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 50; ++i) {
    const double k = 0.2 + 2.5 * U(rng);
    const cplx a = std::polar(4 * U(rng) + 0.05, 2 * std::numbers::pi * U(rng));
    auto e = sg_expectations(k, a);
    auto m = moments(sg_amplitudes({k, a}));
    CHECK(rel(e.K0, m.K0) < 1e-7);
    CHECK(rel(e.K0_sq, m.K0_sq) < 1e-7);
    CHECK(std::abs(e.K1 - m.K1) < 1e-7 * e.K0);
    CHECK(std::abs(e.K2 - m.K2) < 1e-7 * e.K0);
    CHECK(rel(e.K1_sq, m.K1_sq) < 1e-7);
    CHECK(rel(e.K2_sq, m.K2_sq) < 1e-7);
    CHECK(std::abs(e.S_corr - (0.5 * m.anti - m.K1 * m.K2)) < 1e-6 * e.K0_sq);
    CHECK(std::abs(m.K1_sq + m.K2_sq - m.K0_sq - k * (1 - k)) < 1e-8 * (1 + m.K0_sq));
  }
  CHECK(sg_expectations(0.75, 2.0).var_K0 == doctest::Approx(4.0));
  auto z = sg_expectations(0.6, 0.0);
  CHECK(z.K0 == 0.6);
  CHECK(z.K1 == 0);
}

TEST_CASE("SG asymptotic expansions") {
  CHECK_THROWS_AS(sg_asymptotics(0.5, 4.0), DomainError);
  const double k = 0.5, r = 20;
  const double h1 = sg_h1(k, r), h2 = sg_h2(k, r);
  CHECK(rel(sg_asymptotics(k, r, 1).h1, h1) < 1e-4);
  auto e = sg_expectations(k, r);
  CHECK(rel(sg_asymptotics(k, r, 0).h, e.h) < 0.01);
  CHECK(rel(e.var_K1, r * r) < 0.01);
  // deviations decay at the predicted powers
  for (double kk : {0.5, 1.5}) {
    auto dev = [&](double rr, int order) {
      auto a = sg_asymptotics(kk, rr, order);
      return std::abs(a.h1 - sg_h1(kk, rr)) / rr;
    };
    const double s1 = std::log(dev(40, 1) / dev(10, 1)) / std::log(4.0);
    const double s2 = std::log(dev(40, 2) / dev(10, 2)) / std::log(4.0);
    CHECK(s1 == doctest::Approx(-4).epsilon(0.05));
    CHECK(s2 == doctest::Approx(-6).epsilon(0.05));
    auto dd = [&](double rr) { return std::abs(sg_asymptotics(kk, rr, 1).diff - (sg_h2(kk, rr) - std::pow(sg_h1(kk, rr), 2))); };
    CHECK(std::log(dd(40) / dd(10)) / std::log(4.0) == doctest::Approx(-4).epsilon(0.1));
    auto d2 = [&](double rr) { return std::abs(sg_asymptotics(kk, rr, 2).h2 - sg_h2(kk, rr)) / (rr * rr); };
    CHECK(std::log(d2(40) / d2(10)) / std::log(4.0) == doctest::Approx(-6).epsilon(0.05));
  }
  CHECK(std::abs(sg_asymptotics(0.5, 30).diff - 0.75) < 1e-3);
}

TEST_CASE("cross overlaps") {
  const double k = 1.0;
  const cplx a(1, 0), z(0, 1), l(0.3, -0.2);
  auto o = cross_overlaps(k, a, z, l);
  CHECK(std::abs(cross_overlaps(k, 0.0, z, l).C_k - 1.0) < 1e-15);
  cplx C = 0, t = 1;
  for (int n = 0; n < 200; ++n) {
    C += t;
    t *= std::conj(a) * z / (std::sqrt(2 * k + n) * (n + 1.0));
  }
  CHECK(std::abs(o.C_k - C) < 1e-12);
  auto va = sg_amplitudes({k, a}, 200), vz = bg_amplitudes({k, z}, 200);
  auto vl = perelomov_amplitudes(PerelomovState::from_lambda(k, l), 200);
  CHECK(std::abs(o.overlap_az - va.coeffs.dot(vz.coeffs)) < 1e-10);
  CHECK(std::abs(o.overlap_al - va.coeffs.dot(vl.coeffs)) < 1e-10);
  CHECK(std::abs(o.overlap_lz - vl.coeffs.dot(vz.coeffs)) < 1e-10);
  // modulus of <lambda|z> largest for equal phases
  auto same = cross_overlaps(k, 0.0, std::polar(1.0, 0.4), std::polar(0.5, 0.4)).overlap_lz;
  auto opp = cross_overlaps(k, 0.0, std::polar(1.0, 0.4), std::polar(0.5, 0.4 + std::numbers::pi)).overlap_lz;
  auto mid = cross_overlaps(k, 0.0, std::polar(1.0, 0.4), std::polar(0.5, 1.4)).overlap_lz;
  CHECK(std::abs(same) > std::abs(mid));
  CHECK(std::abs(mid) > std::abs(opp));
}

TEST_CASE("time evolution") {
  const BGState s{0.75, cplx(1.2, 0.4)};
  auto e0 = time_evolve(s, 0.0);
  CHECK(e0.state.z == s.z);
  CHECK(e0.global_phase == 1.0);
  const double t = 2 * std::numbers::pi;
  auto e = time_evolve(s, t);
  CHECK(std::abs(e.state.z - s.z) < 1e-14);
  CHECK(std::abs(e.global_phase - std::exp(-I * 0.75 * t)) < 1e-14);
  // evolved vector equals exp(-i K0 t) applied to the original
  for (double tt : {0.3, 1.7}) {
    auto v = bg_amplitudes(s, 64);
    Vec u = v.coeffs;
    for (int n = 0; n < u.size(); ++n) u(n) *= std::exp(-I * (0.75 + n) * tt);
    auto ev = time_evolve(s, tt);
    auto w = bg_amplitudes(ev.state, 64);
    CHECK((ev.global_phase * w.coeffs - u).norm() < 1e-12);
    auto g = build_generators({0.75, 66});
    CHECK(expect(w, g.K1.entries).real() == doctest::Approx(std::abs(s.z) * std::cos(std::arg(s.z) - tt)));
  }
  auto p = time_evolve(PerelomovState::from_lambda(0.5, 0.3), 1.0);
  CHECK(std::abs(p.state.lambda - 0.3 * std::exp(-I)) < 1e-15);
  auto q = time_evolve(SGState{0.5, 2.0}, 1.0);
  CHECK(std::abs(q.state.alpha - 2.0 * std::exp(-I)) < 1e-15);
}
