#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "so12/hardy.hpp"

using namespace so12;

namespace {

const cplx I(0, 1);
const double pi = std::numbers::pi;

template <class F>
cplx line_integral(F f) {
  boost::math::quadrature::sinh_sinh<double> q;
  const double re = q.integrate([&](double x) { return f(x).real(); });
  const double im = q.integrate([&](double x) { return f(x).imag(); });
  return {re, im};
}

template <class F>
double half_line(F f) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f);
}

cplx fd(int n, double x) {
  const double h = 1e-3;
  return (-line_basis(n, x + 2 * h) + 8.0 * line_basis(n, x + h) - 8.0 * line_basis(n, x - h) + line_basis(n, x - 2 * h)) /
         (12 * h);
}

}  // namespace

TEST_CASE("circle generators") {
  for (double k : {0.5, 1.0, 1.5}) {
    const auto c = circle_generators(k, 24);
    const auto a = build_generators({k, 24});
    CHECK((c.K0 - a.K0.entries).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((c.Kplus - a.Kplus.entries).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((c.Kminus - a.Kminus.entries).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((c.K1 - a.K1.entries).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((c.K2 - a.K2.entries).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(c.Kplus(1, 0) - std::sqrt(2 * k)) < 1e-15);
  }
  const auto h = circle_generators(0.5, 8);
  for (int n = 0; n < 8; ++n) CHECK(h.K0(n, n).real() == doctest::Approx(n + 0.5));
  CHECK_THROWS_AS(circle_generators(0.5, 1), ConfigError);
}

TEST_CASE("coherent functions on the circle") {
  CHECK(std::abs(coherent_circle_fn(CoherentFamily::perelomov, 0.5, 0.0, 1.1) - 1.0) < 1e-15);
  CHECK(std::abs(coherent_circle_fn(CoherentFamily::bg, 1.0, 0.0, 0.3) - 1.0) < 1e-15);
  double i0 = 0, t = 1;
  for (int n = 0; n < 40; ++n) {
    i0 += t;
    t /= double(n + 1) * (n + 1);
  }
  CHECK(std::abs(coherent_circle_fn(CoherentFamily::bg, 0.5, 1.0, 0.0) - std::exp(1.0) / std::sqrt(i0)) < 1e-14);

  auto bg = CircleFunction::from_basis(bg_amplitudes({0.5, 1.5 * I}, 64));
  bg.coeffs.resize(64);
  for (double phi : {0.0, 0.7, 2.0, 4.5})
    CHECK(std::abs(bg(phi) - coherent_circle_fn(CoherentFamily::bg, 0.5, 1.5 * I, phi)) < 1e-8);
  CHECK(bg.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

  for (double k : {0.5, 1.0, 2.5}) {
    auto pe = CircleFunction::from_basis(perelomov_amplitudes(PerelomovState::from_lambda(k, cplx(0.3, -0.2))));
    auto sg = CircleFunction::from_basis(sg_amplitudes({k, cplx(-0.8, 1.1)}));
    auto bk = CircleFunction::from_basis(bg_amplitudes({k, cplx(0.4, 0.9)}));
    for (double phi : {0.4, 3.0}) {
      CHECK(std::abs(pe(phi) - coherent_circle_fn(CoherentFamily::perelomov, k, cplx(0.3, -0.2), phi)) < 1e-8);
      CHECK(std::abs(sg(phi) - coherent_circle_fn(CoherentFamily::sg, k, cplx(-0.8, 1.1), phi)) < 1e-8);
      CHECK(std::abs(bk(phi) - coherent_circle_fn(CoherentFamily::bg, k, cplx(0.4, 0.9), phi)) < 1e-8);
    }
    CHECK(pe.norm_sq() == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK_THROWS_AS(coherent_circle_fn(CoherentFamily::perelomov, 1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("K1 and K2 eigenfunctions") {
  for (double phi : {0.3, 1.2, 2.5, 4.0, 5.9}) {
    const auto f = k1k2_eigenfunction_circle(Axis::K2, 0.5, 0.7, phi);
    CHECK(std::norm(f) == doctest::Approx(1 / (2 * std::abs(std::sin(phi)))).epsilon(1e-13));
  }
  CHECK_THROWS_AS(k1k2_eigenfunction_circle(Axis::K2, 0.5, 0.1, 0.0), DomainError);
  CHECK_THROWS_AS(k1k2_eigenfunction_circle(Axis::K1, 0.5, 0.1, pi / 2), DomainError);

  const double h = 0.8;
  auto c1 = k1k2_eigen_recursion(Axis::K1, 0.5, h, 5);
  CHECK(std::abs(c1[1] - 2 * h) < 1e-15);
  CHECK(std::abs(c1[2] - (2 * h * h - 0.5)) < 1e-15);
  CHECK(std::abs(c1[3] - (8.0 / 6 * h * h * h - 5.0 / 3 * h)) < 1e-14);
  CHECK(std::abs(c1[4] - (16.0 / 24 * std::pow(h, 4) - 7.0 / 3 * h * h + 3.0 / 8)) < 1e-14);
  auto c2 = k1k2_eigen_recursion(Axis::K2, 0.5, h, 5);
  CHECK(std::abs(c2[1] + 2.0 * I * h) < 1e-15);
  CHECK(std::abs(c2[2] - (-2 * h * h + 0.5)) < 1e-15);
  CHECK(std::abs(c2[4] - (16.0 / 24 * std::pow(h, 4) - 7.0 / 3 * h * h + 3.0 / 8)) < 1e-14);

  // the closed forms solve the differential equations for general k
  for (double k : {0.5, 1.0, 1.75})
    for (double phi : {0.4, 2.2, 3.9, 5.5}) {
      const double e = 1e-4;
      auto d = [&](Axis a) {
        auto f = [&](double p) { return k1k2_eigenfunction_circle(a, k, h, p); };
        return (-f(phi + 2 * e) + 8.0 * f(phi + e) - 8.0 * f(phi - e) + f(phi - 2 * e)) / (12 * e);
      };
      const cplx f2 = k1k2_eigenfunction_circle(Axis::K2, k, h, phi);
      const cplx K2f = std::sin(phi) * (-I) * d(Axis::K2) - I * k * std::polar(1.0, phi) * f2;
      CHECK(std::abs(K2f - h * f2) < 1e-8 * std::abs(f2));
      const cplx f1 = k1k2_eigenfunction_circle(Axis::K1, k, h, phi);
      const cplx K1f = std::cos(phi) * (-I) * d(Axis::K1) + k * std::polar(1.0, phi) * f1;
      CHECK(std::abs(K1f - h * f1) < 1e-8 * std::abs(f1));
    }

  // the log-coordinate form agrees with the direct one
  for (double u : {-2.0, 0.3, 1.5})
    for (int half : {0, 1})
      for (Axis a : {Axis::K1, Axis::K2}) {
        double psi = half == 0 ? 2 * std::atan(std::exp(u)) : 2 * pi - 2 * std::atan(std::exp(u));
        double phi = a == Axis::K2 ? psi : psi - pi / 2;
        CHECK(std::abs(k1k2_eigenfunction_log(a, 1.0, h, u, half) - k1k2_eigenfunction_circle(a, 1.0, h, phi)) < 1e-12);
      }

  // delta normalization, smeared with Gaussian windows
  for (double sigma : {0.05, 0.1})
    for (Axis a : {Axis::K1, Axis::K2})
      for (double dh : {0.0, sigma, 2 * sigma}) {
        const double h0 = 0.4;
        const double g = std::exp(-0.5 * dh * dh / (sigma * sigma)) / (std::sqrt(2 * pi) * sigma);
        const cplx o = smeared_eigen_overlap(a, 0.5, h0, sigma, h0 + dh);
        CHECK(std::abs(o - g) < 0.02 * g);
      }
}

TEST_CASE("line basis and generators") {
  for (int n : {0, 5, 17}) CHECK(std::norm(line_basis(n, 0.0)) == doctest::Approx(1 / pi).epsilon(1e-14));
  for (double x : {-3.0, 0.4, 11.0})
    for (int n : {1, 4, 9}) {
      CHECK(std::norm(line_basis(n, x)) == doctest::Approx(1 / (pi * (1 + x * x))).epsilon(1e-13));
      CHECK(std::abs(std::conj(line_basis(n, -x)) - line_basis(n, x)) < 1e-15);
      CHECK(std::abs(line_basis_derivative(n, x) - fd(n, x)) < 1e-7);
    }
  CHECK(std::abs(line_integral([](double x) { return std::conj(line_basis(2, x)) * line_basis(3, x); })) < 1e-9);
  CHECK(line_integral([](double x) { return std::norm(line_basis(6, x)) + 0.0 * I; }).real() == doctest::Approx(1.0).epsilon(1e-9));

  const int N = 16;
  const auto g = line_generators(N);
  const auto a = build_generators({0.5, N});
  for (int n = 0; n < N; ++n) CHECK(g.K0(n, n).real() == doctest::Approx(n + 0.5).epsilon(1e-12));
  CHECK((g.K0 - a.K0.entries).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((g.Kplus - a.Kplus.entries).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((g.Kminus - a.Kminus.entries).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((g.K1 - a.K1.entries).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((g.K2 - a.K2.entries).cwiseAbs().maxCoeff() < 1e-10);

  // differential operators on a sampled v_3 with finite-difference derivatives
  const std::pair<OpId, const Mat*> ops[] = {
      {OpId::K0, &g.K0}, {OpId::Kplus, &g.Kplus}, {OpId::Kminus, &g.Kminus}, {OpId::K1, &g.K1}, {OpId::K2, &g.K2}};
  for (double x : {-1.7, 0.0, 0.6, 2.3})
    for (const auto& [op, m] : ops) {
      const cplx lhs = line_operator(op, x, line_basis(3, x), fd(3, x));
      cplx rhs = 0.0;
      for (int j = 0; j < N; ++j) rhs += (*m)(j, 3) * line_basis(j, x);
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  CHECK(std::abs(line_operator(OpId::Kminus, 0.9, line_basis(0, 0.9), line_basis_derivative(0, 0.9))) < 1e-15);
}

TEST_CASE("Cauchy distribution") {
  Cauchy c({2.0, 0.5});
  CHECK(c.quantile(0.5) == doctest::Approx(0.5));
  CHECK(c.quantile(0.25) == doctest::Approx(0.5 - 2.0));
  CHECK(c.quantile(0.75) == doctest::Approx(0.5 + 2.0));
  CHECK(c.quantile(0.75) - c.quantile(0.25) == doctest::Approx(4.0));
  CHECK(c.distribution(c.quantile(0.1)) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(c.density(0.5 + 2.0) == doctest::Approx(0.5 * c.density(0.5)));
  CHECK_THROWS_AS(c.quantile(1.0), DomainError);
  CHECK_THROWS_AS(Cauchy({0.0, 0.0}), DomainError);

  Cauchy a({1.0, 0.0}), b({2.0, 0.0});
  const auto s = a.convolve(b);
  CHECK(s.params().lambda == 3.0);
  CHECK(s.params().a == 0.0);
  for (double x : {0.0, 1.3, -4.0}) {
    const double conv = line_integral([&](double y) { return cplx(b.density(x - y) * a.density(y)); }).real();
    CHECK(std::abs(conv - s.density(x)) < 1e-6);
  }
  for (double t : {-1.5, 0.4, 2.0}) {
    const cplx phi = std::sqrt(2 * pi) * fourier_line_quadrature([&](double x) { return cplx(c.density(x)); }, -t);
    CHECK(std::abs(phi - c.characteristic(t)) < 1e-8);
  }
}

TEST_CASE("Fourier transforms on the line") {
  CHECK(line_fourier(0, 0.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(line_fourier(3, -0.2) == 0.0);
  CHECK(half_line([](double p) { return line_fourier(1, p) * line_fourier(1, p); }) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(half_line([](double p) { return line_fourier(2, p) * line_fourier(5, p); })) < 1e-10);

  const cplx v2 = fourier_line_quadrature([](double x) { return line_basis(2, x); }, 1.3);
  CHECK(std::abs(v2 - line_fourier(2, 1.3)) < 1e-7);
  for (int n = 0; n <= 6; ++n)
    for (double p : {-0.5, -1.0, -2.5}) CHECK(std::abs(fourier_line_quadrature([n](double x) { return line_basis(n, x); }, p)) < 1e-8);
}

TEST_CASE("Hermite projections") {
  for (double x : {-2.0, 0.0, 0.7, 3.1}) {
    CHECK(hermite_projection(0, x).real() == doctest::Approx(std::exp(-x * x / 2) / (2 * std::pow(pi, 0.25))).epsilon(1e-13));
    for (int n = 0; n <= 12; ++n) CHECK(std::abs(hermite_projection(n, x).real() - 0.5 * hermite_function(n, x)) < 1e-12);
  }
  CHECK(std::abs(hermite_projection(1, 0.0) + I * std::pow(pi, -0.75)) < 1e-15);
  for (int n = 0; n <= 12; ++n) CHECK(std::abs(hermite_projection(n, 0.7) - hermite_projection_quadrature(n, 0.7)) < 1e-7);
  CHECK_THROWS_AS(hermite_projection(13, 0.0), ConfigError);

  // Hermite functions against the polynomial definition
  for (int n : {0, 3, 10})
    for (double x : {-1.0, 0.5, 2.0}) {
      const double ref = std::exp(-x * x / 2) * orthopoly(PolyKind::hermite, n, 0, x) /
                         std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(pi));
      CHECK(hermite_function(n, x) == doctest::Approx(ref).epsilon(1e-12));
    }
  CHECK(std::isfinite(hermite_function(64, 15.0)));
}

TEST_CASE("transition amplitudes") {
  const auto c00 = transition_amplitude(0, 0);
  CHECK(std::abs(c00.quadrature - 0.6965) < 5e-5);
  CHECK(std::norm(c00.quadrature) == doctest::Approx(0.4851).epsilon(2e-4));
  // printed as 0.0351; the closed form gives 0.035019
  CHECK(std::abs(transition_amplitude(1, 0).quadrature - 0.0351) < 1e-4);
  CHECK(std::abs(transition_amplitude(0, 1).quadrature + 0.5173 * I) < 5e-5);
  CHECK(std::norm(transition_amplitude(0, 1).quadrature) == doctest::Approx(0.2676).epsilon(5e-4));

  const double e = std::erfc(1 / std::sqrt(2.0));
  CHECK(std::abs(*c00.closed_form - std::pow(pi, 0.25) * std::sqrt(std::exp(1.0)) * e) < 1e-14);
  CHECK(std::abs(*transition_amplitude(1, 0).closed_form -
                 std::pow(pi, 0.25) * (2 * std::sqrt(2 / pi) - 3 * std::sqrt(std::exp(1.0)) * e)) < 1e-14);
  // c_{0,2} = -pi^{-1/4} int (2p^2 - 1) e^{-p^2/2 - p} dp = pi^{-1/4} (2 - 3 M0), M0 = sqrt(pi e / 2) erfc(1/sqrt 2);
  // the printed value 0.2586 equals pi^{-1/4} (1 - M0) instead
  const double M0 = std::sqrt(pi * std::exp(1.0) / 2) * e;
  CHECK(std::abs(transition_amplitude(0, 2).quadrature - std::pow(pi, -0.25) * (2 - 3 * M0)) < 1e-10);
  CHECK(std::abs(*transition_amplitude(0, 2).closed_form - std::pow(pi, -0.25) * (2 - 3 * M0)) < 1e-14);

  double worst = 0;
  for (int m = 0; m <= 8; ++m)
    for (int n = 0; n <= 8; ++n) {
      const auto t = transition_amplitude(m, n);
      worst = std::max(worst, std::abs(t.quadrature - *t.closed_form));
    }
  CHECK(worst < 1e-6);
  CHECK_THROWS_AS(transition_amplitude(9, 0), ConfigError);

  boost::math::quadrature::exp_sinh<double> q;
  for (auto [m, n] : {std::pair{1, 0}, {2, 1}, {0, 3}}) {
    const double num = q.integrate([&](double p) {
      if (p > 30) return 0.0;
      return std::exp(-p * p) * orthopoly(PolyKind::hermite, 2 * m, 0, p) * orthopoly(PolyKind::hermite, 2 * n + 1, 0, p);
    });
    CHECK(hermite_halfline_overlap(m, n) == doctest::Approx(num).epsilon(1e-10));
  }
  CHECK(hermite_halfline_overlap(1, 0) == doctest::Approx(2.0));
}

TEST_CASE("unitary map between line and oscillator") {
  const auto r = unitary_map_check(16);
  CHECK(std::abs(r.Q_line(0, 1) - 1 / std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(r.Q_osc(0, 1) - 1 / std::sqrt(2.0)) < 1e-10);
  for (int n = 0; n < 16; ++n) {
    CHECK(std::abs(r.Q_line(n, n)) < 1e-12);
    CHECK(std::abs(r.Q_osc(n, n)) < 1e-12);
  }
  CHECK(r.max_deviation < 1e-8);
}
