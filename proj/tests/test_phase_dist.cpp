#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "so12/phase_dist.hpp"
#include "so12/special_fn.hpp"

using namespace so12;

namespace {

const cplx I(0, 1);
const double pi = std::numbers::pi;

DensityOperator random_rho(double k, int dim, std::mt19937& rng) {
  std::normal_distribution<double> N;
  Mat A(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) A(i, j) = cplx(N(rng), N(rng));
  Mat r = A * A.adjoint();
  r /= r.trace();
  return DensityOperator::from_matrix(k, r);
}

// <n| e^{wK+} e^{-conj w K-} |n> = sum_j (-|w|^2)^j n!/(n-j)! Gamma(2k+n)/Gamma(2k+n-j) / j!^2
double normal_diag(double k, int n, double w2) {
  double s = 0;
  for (int j = 0; j <= n; ++j)
    s += std::pow(-w2, j) * std::exp(std::lgamma(n + 1.0) - std::lgamma(n - j + 1.0) + std::lgamma(2 * k + n) -
                                     std::lgamma(2 * k + n - j) - 2 * std::lgamma(j + 1.0));
  return s;
}

}  // namespace

TEST_CASE("measure weights") {
  CHECK(bg_measure_weight(1.0, 0.0).m_tilde == doctest::Approx(1 / pi).epsilon(1e-15));
  CHECK(bg_measure_weight(1.5, 0.0).m_tilde == doctest::Approx(1 / (2 * pi)).epsilon(1e-15));
  for (double r : {1e-3, 1e-5, 1e-7}) {
    double lim = -(2 / pi) * (std::numbers::egamma + std::log(r));
    CHECK(std::abs(bg_measure_weight(0.5, r).m_tilde - lim) < 5 * r * r * std::abs(std::log(r)) + 1e-12);
  }
  for (double k : {0.75, 1.0, 2.0}) {
    double r = 1e-6;
    CHECK(bg_measure_weight(k, r).m_tilde == doctest::Approx(1 / ((2 * k - 1) * pi)).epsilon(1e-6));
  }
  // large |z| against the asymptotic form: error O(|z|^-2)
  double direct = bg_measure_weight(1.0, 30.0).m_tilde;
  CHECK(std::abs(bg_measure_tilde_asymptotic(1.0, 30.0) / direct - 1) < 0.01);
  // Boost oracle for the weight itself
  for (double k : {0.5, 1.0, 1.75})
    for (double r : {0.2, 1.0, 5.0}) {
      double ref = 2 / (pi * std::tgamma(2 * k)) * std::pow(r, 2 * k - 1) * boost::math::cyl_bessel_k(2 * k - 1, 2 * r);
      CHECK(bg_measure_weight(k, r).m_tilde == doctest::Approx(ref).epsilon(1e-11));
      double gk = boost::math::hypergeometric_pFq({}, {2 * k}, r * r) * 1.0;
      CHECK(bg_measure_weight(k, r).m == doctest::Approx(ref * gk).epsilon(1e-10));
    }
  CHECK_THROWS_AS(bg_measure_weight(0.5, 0.0), DomainError);
}

TEST_CASE("completeness quadratures") {
  for (double k : {0.5, 1.0, 1.5}) {
    for (int n2 = 0; n2 <= 10; ++n2)
      for (int n1 : {n2, (n2 + 3) % 11}) {
        const double delta = n1 == n2 ? 1.0 : 0.0;
        CHECK(std::abs(bg_completeness(k, n2, n1) - delta) < 1e-8);
        CHECK(std::abs(perelomov_completeness(k, n2, n1) - delta) < 1e-8);
        CHECK(std::abs(sg_completeness(n2, n1) - delta) < 1e-9);
      }
  }
  CHECK(std::abs(bg_completeness(0.75, 30, 30, {}, Exec::serial) - 1.0) < 1e-8);
  CHECK(bg_completeness(1.0, 7, 7, {}, Exec::serial) == bg_completeness(1.0, 7, 7, {}, Exec::parallel));
  CHECK(std::abs(perelomov_completeness(0.51, 4, 4) - 1.0) < 1e-8);

  // radial moments: n! Gamma(2k+n)/4
  for (double k : {0.5, 1.0, 1.5})
    for (int n = 0; n <= 6; ++n) {
      double ref = std::tgamma(n + 1.0) * std::tgamma(2 * k + n) / 4;
      CHECK(bg_radial_moment(k, n) == doctest::Approx(ref).epsilon(1e-9));
    }
  CHECK(bg_radial_moment(1.0, 3) == doctest::Approx(36.0).epsilon(1e-9));

  CHECK_THROWS_AS(perelomov_completeness(0.25, 0, 0), DomainError);
  CHECK_THROWS_AS(bg_completeness(1.0, 60, 0), ConfigError);
}

TEST_CASE("reproducing kernels") {
  CHECK(std::abs(reproducing_kernel(KernelSpace::bg_holo, 1.0, 0.0, cplx(2, 1)) - 1.0) < 1e-15);
  const cplx l1(0.3, -0.2), l2(-0.1, 0.5);
  // series definition of the disc kernel
  cplx s = 0;
  for (int n = 0; n < 200; ++n)
    s += std::exp(log_pochhammer(2.0, n) - std::lgamma(n + 1.0)) * std::pow(std::conj(l2) * l1, n);
  CHECK(std::abs(reproducing_kernel(KernelSpace::perelomov_disc, 1.0, l2, l1) - s) < 1e-12);

  for (int n = 0; n <= 5; ++n) {
    CHECK(std::abs(kernel_moment(KernelSpace::perelomov_disc, 1.0, n, 0, l1) - std::pow(l1, n)) < 1e-8);
    CHECK(std::abs(kernel_moment(KernelSpace::bg_holo, 1.0, n, 0, cplx(0.7, 0.4)) - std::pow(cplx(0.7, 0.4), n)) <
          1e-8 * std::max(1.0, std::pow(0.81, n)));
  }
  // non-holomorphic moments
  for (double k : {0.5, 1.5}) {
    const cplx z1(0.4, 0.9);
    CHECK(std::abs(kernel_moment(KernelSpace::bg_holo, k, 1, 2, z1)) < 1e-9);
    CHECK(std::abs(kernel_moment(KernelSpace::bg_holo, k, 0, 3, z1)) < 1e-9);
    CHECK(std::abs(kernel_moment(KernelSpace::perelomov_disc, k, 2, 4, l1)) < 1e-9);
    // n >= nbar: n!(2k)_n / ((n-nbar)! (2k)_{n-nbar}) z1^{n-nbar}
    const double c = 6 * pochhammer(2 * k, 3) / pochhammer(2 * k, 1);
    CHECK(std::abs(kernel_moment(KernelSpace::bg_holo, k, 3, 2, z1) - c * z1) < 1e-8 * c);
  }

  // circle kernel against its series with regularisation
  const double eps = 0.2, d = 0.7;
  cplx cs = 0;
  for (int n = 0; n < 400; ++n)
    cs += std::exp(log_pochhammer(1.5, n) - std::lgamma(n + 1.0)) * std::pow((1 - eps) * std::exp(I * d), n);
  CHECK(std::abs(reproducing_kernel(KernelSpace::circle_k, 0.75, 0.0, d, eps) - cs) < 1e-12);
  CHECK_THROWS_AS(reproducing_kernel(KernelSpace::circle_k, 0.75, 1.0, 1.0, 0.0), DomainError);

  // Gegenbauer generating function
  for (double t : {-0.6, 0.1, 0.9}) {
    const double x = 0.35;
    CHECK(gegenbauer_kernel(1.25, t, x, 80) == doctest::Approx(std::pow(1 - 2 * t * x + x * x, -2.5)).epsilon(1e-13));
  }
}

TEST_CASE("Husimi functions") {
  auto g0 = thermal_state(1.0, 0.3, 4);
  const double k = 1.0;
  DensityOperator ground = DensityOperator::from_matrix(k, [] {
    Mat m = Mat::Zero(6, 6);
    m(0, 0) = 1;
    return m;
  }());
  for (cplx z : {cplx(0.5, 0.1), cplx(2, -1), cplx(0, 4)})
    CHECK(husimi(HusimiKind::S, ground, z) == doctest::Approx(1 / g_k(k, std::norm(z)).value).epsilon(1e-13));

  auto th = thermal_state(k, 0.3, 80);
  CHECK(th.tail < 1e-40);
  CHECK(husimi(HusimiKind::S, th, 0.0) == doctest::Approx(0.7).epsilon(1e-14));
  for (cplx z : {cplx(2, 0), cplx(1, 1), cplx(-3, 2)}) {
    const double r2 = std::norm(z);
    double ref = 0.7 * g_k(k, 0.3 * r2).value / g_k(k, r2).value;
    CHECK(husimi(HusimiKind::S, th, z) == doctest::Approx(ref).epsilon(1e-9));
  }
  for (int n = 1; n < 10; ++n) CHECK(std::real(th.entries(n, n) / th.entries(n - 1, n - 1)) == doctest::Approx(0.3));
  auto tiny = thermal_state(k, 1e-12, 10);
  CHECK(std::abs(tiny.entries(0, 0) - 1.0) < 1e-11);
  (void)g0;

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    auto rho = random_rho(0.25 + 0.3 * i, 12, rng);
    for (int j = 0; j < 1000; ++j) {
      cplx p(4 * U(rng), 4 * U(rng));
      cplx l = 0.97 * std::polar(std::abs(U(rng)), pi * U(rng));
      worst = std::min({worst, husimi(HusimiKind::S, rho, p), husimi(HusimiKind::Q, rho, p),
                        husimi(HusimiKind::T, rho, l)});
    }
  }
  CHECK(worst > -1e-15);

  for (double kk : {0.5, 1.0, 1.5}) {
    auto rho = random_rho(kk, 8, rng);
    for (HusimiKind kind : {HusimiKind::S, HusimiKind::T, HusimiKind::Q})
      CHECK(std::abs(husimi_normalization(kind, rho).value - 1.0) < 1e-6);
  }
  CHECK(std::abs(husimi_normalization(HusimiKind::S, th).value - 1.0) < 1e-6);

  auto gp = husimi_grid(HusimiKind::Q, th, -2, 2, -1, 1, 9, 5, Exec::parallel);
  auto gs = husimi_grid(HusimiKind::Q, th, -2, 2, -1, 1, 9, 5, Exec::serial);
  REQUIRE(gp.size() == 45);
  for (size_t i = 0; i < gp.size(); ++i) CHECK(gp[i].value == gs[i].value);
  CHECK(gp[0].re == -2.0);
  CHECK(gp[44].im == 1.0);

  Mat bad = Mat::Identity(3, 3);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  bad(2, 2) = 0.0;
  CHECK_THROWS_AS(DensityOperator::from_matrix(1.0, bad), DomainError);
  CHECK_THROWS_AS(husimi(HusimiKind::T, th, 1.0), DomainError);
}

TEST_CASE("characteristic functions") {
  const double k = 1.0, a = 0.3;
  auto th = thermal_state(k, a, 48);
  CHECK(std::abs(char_fn(CharKind::normal, th, 0.0) - 1.0) < 1e-14);
  CHECK(std::abs(char_fn(CharKind::anti, th, 0.0) - 1.0) < 1e-14);

  Mat g = Mat::Zero(10, 10);
  g(0, 0) = 1;
  auto ground = DensityOperator::from_matrix(k, g);
  for (cplx w : {cplx(0.3, 0.1), cplx(-1.0, 2.0)})
    CHECK(std::abs(char_fn(CharKind::normal, ground, w) - 1.0) < 1e-14);

  const cplx w(0.25, -0.15);
  // closed forms on the number basis
  double cn = 0, ca = 0;
  for (int n = 0; n < 48; ++n) {
    const double p = std::real(th.entries(n, n));
    cn += p * normal_diag(k, n, std::norm(w));
    ca += p * boost::math::hypergeometric_pFq({double(n + 1), 2 * k + n}, {1.0}, -std::norm(w));
  }
  CHECK(std::abs(char_fn(CharKind::normal, th, w) - cn) < 1e-12);
  CHECK(std::abs(char_fn(CharKind::anti, th, w) - ca) < 1e-10);

  // anti-normal function from the S distribution, normal one from the smooth diagonal weight
  auto S = [&](double r) { return (1 - a) * g_k(k, a * r * r).value / g_k(k, r * r).value; };
  auto F = [&](double r) { return thermal_diagonal_weight(k, a, r); };
  CHECK(std::abs(char_fn_quadrature(k, S, w) - ca) < 1e-6);
  CHECK(std::abs(char_fn_quadrature(k, F, w) - cn) < 1e-6);
  CHECK(std::abs(char_fn_quadrature(k, F, 0.0) - 1.0) < 1e-8);

  auto cs = char_fn(CharKind::symmetric, th, w);
  CHECK(std::abs(cs.imag()) < 1e-12);
  CHECK(cs.real() < 1.0);
  CHECK_THROWS_AS(char_fn(CharKind::normal, th, 2.0), CutoffExhausted);
}

TEST_CASE("diagonal representation") {
  const double k = 1.0, a = 0.3;
  auto th = thermal_state(k, a, 80);
  std::vector<cplx> grid{0.0, cplx(0.5, 1.5)};
  auto F = [&](cplx z) { return thermal_diagonal_weight(k, a, std::abs(z)); };
  auto rep = diagonal_rep_forward(k, F, th, grid);
  CHECK(rep.normalization == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.max_deviation < 1e-8);

  const cplx z0(1.0, 0.5);
  auto pure = DensityOperator::pure(bg_amplitudes({k, z0}));
  std::vector<cplx> near{z0, cplx(2, 1)};
  double prev = 1e9;
  for (double sigma : {0.3, 0.1}) {
    auto G = gaussian_surrogate(k, z0, sigma);
    auto r = diagonal_rep_forward(k, G, pure, near, z0, 8 * sigma);
    CHECK(r.normalization == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.max_deviation < prev);
    prev = r.max_deviation;
  }
  CHECK(prev < 0.01);

  Mat g = Mat::Zero(30, 30);
  g(0, 0) = 1;
  auto ground = DensityOperator::from_matrix(k, g);
  auto G = gaussian_surrogate(k, 0.0, 0.2);
  auto r = diagonal_rep_forward(k, G, ground, {cplx(0.5, 0.0)}, 0.0, 1.6);
  CHECK(r.max_deviation > 1e-4);
}
