#include "so12/special_fn.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "so12/kahan.hpp"

namespace so12 {

namespace {

constexpr double kRelStop = 1e-16;
constexpr std::size_t kMaxTerms = 10000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

double pochhammer(double a, unsigned n) {
  if (!(a > 0)) throw DomainError("pochhammer: a must be positive");
  double p = 1.0;
  for (unsigned j = 0; j < n; ++j) p *= a + j;
  if (!std::isfinite(p)) throw OverflowError("pochhammer overflow, use log_pochhammer");
  return p;
}

double log_pochhammer(double a, unsigned n) {
  if (!(a > 0)) throw DomainError("log_pochhammer: a must be positive");
  if (n < 32) {
    double s = 0.0;
    for (unsigned j = 0; j < n; ++j) s += std::log(a + j);
    return s;
  }
  return std::lgamma(a + n) - std::lgamma(a);
}

EvalResult<double> bessel_i_series(double nu, double x) {
  if (nu < 0 || x < 0) throw DomainError("bessel_i: nu, x must be non-negative");
  if (x == 0) return {nu == 0 ? 1.0 : 0.0, 0.0, 1};
  const double q = 0.25 * x * x;
  double term = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1));
  Kahan<double> s;
  std::size_t m = 0;
  for (; m < kMaxTerms; ++m) {
    s.add(term);
    term *= q / ((m + 1) * (m + 1 + nu));
    if (m + 1 > 0.5 * x && term < kRelStop * s.sum) {
      ++m;
      break;
    }
  }
  return {s.sum, term + kEps * s.sum, m};
}

namespace {

// sum_m (sign)^m a_m(nu)/x^m truncated at the smallest term
EvalResult<double> hankel_sum(double nu, double x, double sign) {
  const double mu = 4 * nu * nu;
  double term = 1.0;
  Kahan<double> s;
  s.add(term);
  std::size_t m = 1;
  double prev = 1.0;
  for (; m < 200; ++m) {
    const double odd = 2.0 * m - 1;
    double next = term * sign * (mu - odd * odd) / (m * 8.0 * x);
    if (next == 0.0) return {s.sum, 0.0, m};
    if (std::abs(next) > std::abs(prev)) break;
    s.add(next);
    prev = next;
    term = next;
    if (std::abs(next) < kRelStop * std::abs(s.sum)) break;
  }
  return {s.sum, std::abs(prev) + kEps * std::abs(s.sum), m};
}

}  // namespace

EvalResult<double> bessel_i_asymptotic(double nu, double x) {
  if (!(x > 0)) throw DomainError("bessel_i_asymptotic: x must be positive");
  auto h = hankel_sum(nu, x, -1.0);
  const double pre = std::exp(x) / std::sqrt(2 * std::numbers::pi * x);
  return {pre * h.value, pre * h.abs_error_estimate, h.terms_used};
}

EvalResult<double> bessel_k_asymptotic(double nu, double x) {
  if (!(x > 0)) throw DomainError("bessel_k_asymptotic: x must be positive");
  auto h = hankel_sum(nu, x, 1.0);
  const double pre = std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x);
  return {pre * h.value, pre * h.abs_error_estimate, h.terms_used};
}

EvalResult<double> bessel_i(double nu, double x) {
  if (nu < 0 || x < 0) throw DomainError("bessel_i: nu, x must be non-negative");
  if (x < kBesselSwitch) return bessel_i_series(nu, x);
  return bessel_i_asymptotic(nu, x);
}

EvalResult<double> bessel_k(double nu, double x) {
  if (!(x > 0)) throw DomainError("bessel_k: x must be positive");
  if (nu < 0) nu = -nu;
  if (x >= kBesselSwitch) return bessel_k_asymptotic(nu, x);
  if (x < 1e-12) {
    if (nu == 0) return {-(std::numbers::egamma + std::log(0.5 * x)), x * x, 1};
    return {0.5 * std::tgamma(nu) * std::pow(0.5 * x, -nu), 0.0, 1};
  }
  // K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt; trapezoid converges geometrically
  const double h = 0.05;
  Kahan<double> s;
  s.add(0.5 * std::exp(-x));
  std::size_t n = 1;
  double f = 1.0;
  for (; n < 100000; ++n) {
    const double t = n * h;
    const double lf = -x * std::cosh(t) + nu * t;
    f = std::exp(lf) * 0.5 * (1 + std::exp(-2 * nu * t));
    s.add(f);
    if (lf < -40 && -x * std::sinh(t) + nu < 0 && f < kRelStop * s.sum) break;
  }
  return {h * s.sum, h * f + 4 * kEps * h * s.sum, n};
}

EvalResult<cplx> g_k(double k, cplx w) {
  if (!(k > 0)) throw DomainError("g_k: k must be positive");
  const double b = 2 * k;
  cplx term = 1.0;
  Kahan<cplx> s;
  double absum = 0.0;
  std::size_t n = 0;
  const double aw = std::abs(w);
  for (; n < kMaxTerms; ++n) {
    s.add(term);
    absum += std::abs(term);
    term *= w / ((b + n) * (n + 1.0));
    if ((n + 1) * (n + 1) > aw && std::abs(term) < kRelStop * absum) {
      ++n;
      break;
    }
  }
  if (!std::isfinite(absum)) throw OverflowError("g_k overflow, use log_g_k");
  return {s.sum, std::abs(term) + kEps * absum, n};
}

EvalResult<double> g_k(double k, double w) {
  auto r = g_k(k, cplx(w, 0.0));
  return {r.value.real(), r.abs_error_estimate, r.terms_used};
}

EvalResult<cplx> log_g_k(double k, cplx w) {
  if (!(k > 0)) throw DomainError("log_g_k: k must be positive");
  const double aw = std::abs(w);
  if (aw < 1e4) {
    auto r = g_k(k, w);
    return {std::log(r.value), r.abs_error_estimate / std::abs(r.value), r.terms_used};
  }
  // terms scaled by the largest log-modulus, located near n = sqrt|w|
  const double b = 2 * k;
  const double lw = std::log(aw);
  const double ph = std::arg(w);
  auto logmod = [&](double n) { return n * lw - std::lgamma(b + n) + std::lgamma(b) - std::lgamma(n + 1); };
  const double npk = std::floor(std::sqrt(aw));
  const double M = logmod(npk);
  Kahan<cplx> s;
  double absum = 0.0;
  std::size_t used = 0;
  const double width = 40.0 * std::pow(aw, 0.25) + 50;
  const double n0 = std::max(0.0, npk - width);
  const double n1 = npk + width;
  for (double n = n0; n <= n1; n += 1.0, ++used) {
    const double lm = logmod(n) - M;
    if (lm < -745) continue;
    const cplx t = std::polar(std::exp(lm), n * ph);
    s.add(t);
    absum += std::abs(t);
  }
  return {M + std::log(s.sum), kEps * absum / std::abs(s.sum), used};
}

double rho_k(double k, double x) {
  if (!(k > 0)) throw DomainError("rho_k: k must be positive");
  if (x < 0) throw DomainError("rho_k: x must be non-negative");
  if (x == 0) return 0.0;
  // I_{nu+1}(y)/I_nu(y) as a continued fraction, modified Lentz
  const double nu = 2 * k - 1;
  const double y = 2 * x;
  const double tiny = 1e-300;
  double f = tiny, C = f, D = 0.0;
  for (int j = 1; j < 100000; ++j) {
    const double bj = 2 * (nu + j) / y;
    D = bj + D;
    if (D == 0) D = tiny;
    C = bj + 1.0 / C;
    if (C == 0) C = tiny;
    D = 1.0 / D;
    const double delta = C * D;
    f *= delta;
    if (std::abs(delta - 1) < 1e-16) break;
  }
  return f;
}

double rho_k_asymptotic(double k, double x, int order) {
  double r = 1.0;
  if (order >= 1) r -= (4 * k - 1) / (4 * x);
  if (order >= 2) r += (16 * (k * k - k) + 3) / (32 * x * x);
  return r;
}

EvalResult<cplx> confluent_1f1(cplx a, double c, cplx z) {
  if (c <= 0 && c == std::floor(c)) throw DomainError("confluent_1f1: c must not be a non-positive integer");
  cplx term = 1.0;
  Kahan<cplx> s;
  double absum = 0.0;
  std::size_t n = 0;
  const double az = std::abs(z);
  for (; n < kMaxTerms; ++n) {
    s.add(term);
    absum += std::abs(term);
    term *= (a + double(n)) / ((c + n) * (n + 1.0)) * z;
    if (term == cplx(0)) {
      ++n;
      break;
    }
    if (n + 1 > az && std::abs(term) < kRelStop * absum) {
      ++n;
      break;
    }
  }
  return {s.sum, std::abs(term) + kEps * absum, n};
}

namespace {

// Hurwitz zeta by Euler-Maclaurin
EvalResult<cplx> hurwitz_zeta(double s, double a) {
  constexpr int N = 24;
  Kahan<double> sum;
  for (int n = 0; n < N; ++n) sum.add(std::pow(n + a, -s));
  const double b = N + a;
  sum.add(std::pow(b, 1 - s) / (s - 1));
  sum.add(0.5 * std::pow(b, -s));
  static constexpr double B2j[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6};
  double fact = 1.0;   // (2j)!
  double rise = s;     // s(s+1)...(s+2j-2)
  double last = 0.0;
  for (int j = 1; j <= 7; ++j) {
    fact *= (2.0 * j - 1) * (2.0 * j);
    if (j > 1) rise *= (s + 2 * j - 3) * (s + 2 * j - 2);
    last = B2j[j - 1] / fact * rise * std::pow(b, -s - 2 * j + 1);
    sum.add(last);
  }
  return {cplx(sum.sum, 0.0), std::abs(last), N + 9};
}

}  // namespace

EvalResult<cplx> lerch_phi(cplx z, double s, double a) {
  if (!(s > 0) || !(a > 0)) throw DomainError("lerch_phi: s, a must be positive");
  const double az = std::abs(z);
  if (az > 1 + 1e-15) throw DomainError("lerch_phi: |z| > 1");
  if (az == 0) return {cplx(std::pow(a, -s), 0.0), 0.0, 1};
  const bool at_one = std::abs(z - 1.0) < 1e-15;
  if (at_one) {
    if (s <= 1) throw DomainError("lerch_phi: divergent at z = 1 for s <= 1");
    return hurwitz_zeta(s, a);
  }
  if (az < 0.95) {
    cplx zn = 1.0;
    Kahan<cplx> sum;
    std::size_t n = 0;
    double t = 0;
    for (; n < kMaxTerms; ++n) {
      const cplx term = zn * std::pow(a + n, -s);
      sum.add(term);
      t = std::abs(term);
      if (t < kRelStop * std::abs(sum.sum)) {
        ++n;
        break;
      }
      zn *= z;
    }
    return {sum.sum, t * az / (1 - az) + kEps * std::abs(sum.sum), n};
  }
  // Phi = Gamma(s)^-1 int_0^inf t^{s-1} e^{-a t} / (1 - z e^{-t}) dt
  boost::math::quadrature::exp_sinh<double> q;
  auto part = [&](bool im) {
    return [&, im](double t) {
      const cplx v = std::pow(t, s - 1) * std::exp(-a * t) / (1.0 - z * std::exp(-t));
      return im ? v.imag() : v.real();
    };
  };
  double er = 0, ei = 0, l1 = 0;
  std::size_t lv = 0;
  const double re = q.integrate(part(false), 1e-14, &er, &l1, &lv);
  const double im = q.integrate(part(true), 1e-14, &ei, &l1, &lv);
  const double g = std::tgamma(s);
  return {cplx(re, im) / g, (er + ei) / g, std::max<std::size_t>(lv, 1)};
}

EvalResult<cplx> polylog(double s, cplx z) {
  auto r = lerch_phi(z, s, 1.0);
  return {z * r.value, std::abs(z) * r.abs_error_estimate, r.terms_used};
}

ErfPair erf_family(cplx w) {
  if (w.real() < 0) {
    auto p = erf_family(-w);
    return {-p.erf, 2.0 - p.erfc};
  }
  const double aw = std::abs(w);
  const double two_over_sqrtpi = 2.0 / std::sqrt(std::numbers::pi);
  if (aw < 2.0 || w.real() < 1.0) {
    using lc = std::complex<long double>;
    const lc wl(w.real(), w.imag());
    const lc w2 = wl * wl;
    lc term = wl;
    lc sum = 0;
    for (int n = 0; n < 20000; ++n) {
      const lc add = term / (long double)(2 * n + 1);
      sum += add;
      if (n > aw * aw && std::abs(add) < 1e-19L * std::abs(sum)) break;
      term *= -w2 / (long double)(n + 1);
    }
    const cplx e(double(sum.real()), double(sum.imag()));
    const cplx r = two_over_sqrtpi * e;
    return {r, 1.0 - r};
  }
  // erfc(w) = exp(-w^2)/sqrt(pi) * 1/(w + (1/2)/(w + 1/(w + (3/2)/(w + ...))))
  const double tiny = 1e-300;
  cplx f = w, C = w, D = 0.0;
  for (int j = 1; j < 20000; ++j) {
    const double aj = 0.5 * j;
    D = w + aj * D;
    if (D == cplx(0)) D = tiny;
    C = w + aj / C;
    if (C == cplx(0)) C = tiny;
    D = 1.0 / D;
    const cplx delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const cplx ec = std::exp(-w * w) / (std::sqrt(std::numbers::pi) * f);
  return {1.0 - ec, ec};
}

double orthopoly(PolyKind kind, unsigned n, double p, double x) {
  switch (kind) {
    case PolyKind::hermite: {
      double h0 = 1, h1 = 2 * x;
      if (n == 0) return h0;
      for (unsigned j = 1; j < n; ++j) {
        const double h2 = 2 * x * h1 - 2.0 * j * h0;
        h0 = h1;
        h1 = h2;
      }
      return h1;
    }
    case PolyKind::laguerre:
      p = 0;
      [[fallthrough]];
    case PolyKind::laguerre_assoc: {
      if (!(p > -1)) throw DomainError("laguerre_assoc: parameter must exceed -1");
      double l0 = 1, l1 = 1 + p - x;
      if (n == 0) return l0;
      for (unsigned j = 1; j < n; ++j) {
        const double l2 = ((2.0 * j + 1 + p - x) * l1 - (j + p) * l0) / (j + 1.0);
        l0 = l1;
        l1 = l2;
      }
      return l1;
    }
    case PolyKind::gegenbauer: {
      if (!(p > 0)) throw DomainError("gegenbauer: parameter must be positive");
      double c0 = 1, c1 = 2 * p * x;
      if (n == 0) return c0;
      for (unsigned j = 1; j < n; ++j) {
        const double c2 = (2 * (j + p) * x * c1 - (j + 2 * p - 1) * c0) / (j + 1.0);
        c0 = c1;
        c1 = c2;
      }
      return c1;
    }
  }
  return 0.0;
}

double stirling_psi(int n, double y) {
  switch (n) {
    case 0: return 0.5;
    case 1: return (3 * y + 2) / 24;
    case 2: return y * (y + 1) / 48;
    default: throw DomainError("stirling_psi: only n <= 2 provided");
  }
}

double barnes_coefficient(double a, double s, int n) {
  switch (n) {
    case 0: return 1.0;
    case 1: return 0.5 * (s + 1) - a;
    case 2: return (s - 1) * (s - 4 * a + 14.0 / 3) / 8 + 0.5 * (a - 1) * (a - 2);
    default: throw DomainError("barnes_coefficient: only n <= 2 provided");
  }
}

EvalResult<double> barnes_expansion(double a, double s, double x, int order) {
  if (!(a > 0) || !(s > 0)) throw DomainError("barnes_expansion: a, s must be positive");
  if (x < 10) throw DomainError("barnes_expansion: requires x >= 10");
  if (order < 0 || order > 2) throw DomainError("barnes_expansion: order must be 0, 1 or 2");
  const double pre = std::exp(x - s * std::log(x));
  double sum = 0, rise = 1, last = 0;
  for (int n = 0; n <= order; ++n) {
    last = barnes_coefficient(a, s, n) * rise / std::pow(x, n);
    sum += last;
    rise *= s + n;
  }
  return {pre * sum, pre * std::abs(last) * (s + order) / x, std::size_t(order + 1)};
}

EvalResult<double> barnes_series(double a, double s, double x, std::size_t max_terms) {
  Kahan<double> sum;
  double xn = 1.0;  // x^n / n!
  double t = 0;
  std::size_t n = 0;
  for (; n < max_terms; ++n) {
    t = xn * std::pow(n + a, -s);
    sum.add(t);
    xn *= x / (n + 1.0);
    if (n > x && t < kRelStop * sum.sum) {
      ++n;
      break;
    }
  }
  return {sum.sum, t + kEps * sum.sum, n};
}

}  // namespace so12
