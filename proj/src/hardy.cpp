#include "so12/hardy.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

namespace so12 {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

template <class F>
cplx gl_panel(const F& f, double a, double b) {
  using G = boost::math::quadrature::gauss<double, 64>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * (f(c + h * x[i]) + f(c - h * x[i]));
  return h * s;
}

template <class F>
cplx gl_range(const F& f, double a, double b, double width) {
  const int panels = std::max(1, int(std::ceil((b - a) / width)));
  const double h = (b - a) / panels;
  cplx s = 0.0;
  for (int j = 0; j < panels; ++j) s += gl_panel(f, a + j * h, a + (j + 1) * h);
  return s;
}

double log_chi_scale(double k, int n) { return 0.5 * (log_pochhammer(2 * k, n) - std::lgamma(n + 1.0)); }

cplx ipow(int n) {
  static const cplx p[4] = {1.0, I, -1.0, -I};
  return p[((n % 4) + 4) % 4];
}

// Hermite polynomial at complex argument
cplx hermite_c(int n, cplx z) {
  cplx h0 = 1.0, h1 = 2.0 * z;
  if (n == 0) return h0;
  for (int j = 1; j < n; ++j) {
    const cplx h2 = 2.0 * z * h1 - 2.0 * j * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

std::vector<long double> poly_mul(const std::vector<long double>& a, const std::vector<long double>& b) {
  std::vector<long double> c(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

}  // namespace

CircleFunction CircleFunction::from_basis(const StateVector& s) {
  CircleFunction f;
  f.k = s.k;
  f.coeffs.resize(s.coeffs.size());
  for (int n = 0; n < int(s.coeffs.size()); ++n) f.coeffs[n] = std::exp(log_chi_scale(s.k, n)) * s.coeffs[n];
  return f;
}

cplx CircleFunction::operator()(double phi) const {
  cplx s = 0.0;
  for (int n = int(coeffs.size()) - 1; n >= 0; --n) s = s * std::polar(1.0, phi) + coeffs[n];
  return s;
}

cplx CircleFunction::inner(const CircleFunction& g) const {
  if (g.k != k) throw ConfigError("CircleFunction::inner: different k");
  cplx s = 0.0;
  const std::size_t n = std::min(coeffs.size(), g.coeffs.size());
  for (std::size_t j = 0; j < n; ++j) s += std::exp(-2 * log_chi_scale(k, int(j))) * std::conj(coeffs[j]) * g.coeffs[j];
  return s;
}

CircleGenerators circle_generators(double k, int cutoff) {
  if (!(k > 0)) throw DomainError("circle_generators: k must be positive");
  if (cutoff < 2) throw ConfigError("circle_generators: cutoff must be >= 2");
  // on e_n = e^{i n phi}: K0 = -i d + k, K+ = e^{i phi}(-i d + 2k), K- = e^{-i phi}(-i d)
  Mat K0 = Mat::Zero(cutoff, cutoff), Kp = K0, Km = K0;
  for (int n = 0; n < cutoff; ++n) {
    K0(n, n) = n + k;
    if (n + 1 < cutoff) Kp(n + 1, n) = n + 2 * k;
    if (n > 0) Km(n - 1, n) = double(n);
  }
  // chi_n = s_n e_n with s_n / s_{n-1} = sqrt((2k + n - 1) / n)
  for (int n = 1; n < cutoff; ++n) {
    const double r = std::sqrt((2 * k + n - 1) / n);
    Kp(n, n - 1) /= r;
    Km(n - 1, n) *= r;
  }
  CircleGenerators g{K0, Kp, Km, 0.5 * (Kp + Km), (Kp - Km) / (2.0 * I)};
  return g;
}

cplx coherent_circle_fn(CoherentFamily family, double k, cplx param, double phi) {
  if (!(k > 0)) throw DomainError("coherent_circle_fn: k must be positive");
  const cplx u = std::polar(1.0, phi);
  switch (family) {
    case CoherentFamily::bg:
      return std::exp(param * u - 0.5 * log_g_k(k, std::norm(param)).value.real());
    case CoherentFamily::perelomov:
      if (!(std::abs(param) < 1)) throw DomainError("coherent_circle_fn: |lambda| must be < 1");
      return std::pow(1.0 - std::norm(param), k) * std::pow(1.0 - param * u, -2 * k);
    case CoherentFamily::sg: {
      const double r = std::abs(param);
      if (r == 0) return 1.0;
      const cplx ph = u * param / r;
      cplx s = 0.0, e = 1.0;
      for (int n = 0; n < 100000; ++n) {
        const double lt = 0.5 * log_pochhammer(2 * k, n) + n * std::log(r) - std::lgamma(n + 1.0) - 0.5 * r * r;
        const double t = std::exp(lt);
        s += t * e;
        e *= ph;
        if (n > r * r + 2 * k && t < 1e-17 * std::max(1.0, std::abs(s))) break;
      }
      return s;
    }
  }
  return 0.0;
}

cplx k1k2_eigenfunction_circle(Axis which, double k, double h, double phi) {
  if (!(k > 0)) throw DomainError("k1k2_eigenfunction_circle: k must be positive");
  phi = std::fmod(phi, 2 * pi);
  if (phi < 0) phi += 2 * pi;
  const double c = which == Axis::K2 ? std::sin(phi) : std::cos(phi);
  if (std::abs(c) < 1e-14) throw DomainError("k1k2_eigenfunction_circle: singular point");
  const double t = which == Axis::K2 ? std::tan(0.5 * phi) : std::tan(0.5 * phi + 0.25 * pi);
  const double mod = std::pow(std::abs(c), -k) / std::sqrt(2.0);
  return mod * std::exp(I * (h * std::log(std::abs(t)) - k * phi));
}

cplx k1k2_eigenfunction_log(Axis which, double k, double h, double u, int half) {
  if (!(k > 0)) throw DomainError("k1k2_eigenfunction_log: k must be positive");
  if (half != 0 && half != 1) throw ConfigError("k1k2_eigenfunction_log: half must be 0 or 1");
  const double a = 2 * std::atan(std::exp(u));
  const double psi = half == 0 ? a : 2 * pi - a;
  double phi = which == Axis::K2 ? psi : psi - 0.5 * pi;
  if (phi < 0) phi += 2 * pi;
  // |sin psi| = 1 / cosh u
  const double lmod = k * std::log(std::cosh(u)) - 0.5 * std::log(2.0);
  return std::exp(cplx(lmod, h * u - k * phi));
}

cplx smeared_eigen_overlap(Axis which, double k, double h0, double sigma, double h) {
  if (!(sigma > 0)) throw DomainError("smeared_eigen_overlap: sigma must be positive");
  const double U = 9 / sigma;
  const double hw = 8 * sigma;
  auto gauss = [&](double x) { return std::exp(-0.5 * (x - h0) * (x - h0) / (sigma * sigma)) / (std::sqrt(2 * pi) * sigma); };
  cplx total = 0.0;
  for (int half = 0; half < 2; ++half) {
    auto integrand = [&](double u) {
      const cplx psi = gl_range([&](double hp) { return gauss(hp) * k1k2_eigenfunction_log(which, k, hp, u, half); }, h0 - hw,
                                h0 + hw, std::min(2 * hw, 8.0 / (1 + std::abs(u))));
      // dphi = |sin psi| du
      return std::conj(k1k2_eigenfunction_log(which, k, h, u, half)) * psi / std::cosh(u);
    };
    total += gl_range(integrand, -U, U, 8.0);
  }
  return total / (2 * pi);
}

std::vector<cplx> k1k2_eigen_recursion(Axis which, double k, double h, int count) {
  if (count < 1) throw ConfigError("k1k2_eigen_recursion: count must be positive");
  // K+ e_n = (n + 2k) e_{n+1}, K- e_n = n e_{n-1}
  std::vector<cplx> a(count, 0.0);
  a[0] = 1.0;
  for (int m = 0; m + 1 < count; ++m) {
    const cplx prev = m > 0 ? (m - 1 + 2 * k) * a[m - 1] : cplx(0);
    if (which == Axis::K1)
      a[m + 1] = (2 * h * a[m] - prev) / double(m + 1);
    else
      a[m + 1] = (prev - 2.0 * I * h * a[m]) / double(m + 1);
  }
  return a;
}

cplx line_basis(int n, double xi) {
  if (n < 0) throw DomainError("line_basis: n must be >= 0");
  const cplx p(1, xi), q(1, -xi);
  return std::pow(p / q, n) / (std::sqrt(pi) * q);
}

cplx line_basis_derivative(int n, double xi) {
  if (n < 0) throw DomainError("line_basis_derivative: n must be >= 0");
  const cplx p(1, xi), q(1, -xi);
  // (1/i) v_n' = (1 + i xi + 2n)(1 + i xi)^{n-1} / (sqrt(pi)(1 - i xi)^{n+2})
  return I * (p + 2.0 * n) * std::pow(p / q, n) / (p * q * q * std::sqrt(pi));
}

cplx line_operator(OpId op, double xi, cplx f, cplx df) {
  const cplx p(1, xi), q(1, -xi);
  switch (op) {
    case OpId::K0: return (xi * f + (xi * xi + 1) * df) / (2.0 * I);
    case OpId::Kplus: return 0.5 * p * (f - I * p * df);
    case OpId::Kminus: return -0.5 * q * (f + I * q * df);
    case OpId::K1: return 0.5 * I * (xi * f + (xi * xi - 1) * df);
    case OpId::K2: return -I * (0.5 * f + xi * df);
  }
  return 0.0;
}

CircleGenerators line_generators(int cutoff) {
  if (cutoff < 2) throw ConfigError("line_generators: cutoff must be >= 2");
  // xi = tan(phi/2) turns every matrix element into a trigonometric polynomial; the midpoint rule is exact
  const int N = 4 * cutoff + 64;
  Mat V(N, cutoff), W(N, cutoff);
  Eigen::VectorXd wt(N);
  std::vector<double> xs(N);
  for (int j = 0; j < N; ++j) {
    const double phi = -pi + (j + 0.5) * 2 * pi / N;
    xs[j] = std::tan(0.5 * phi);
    wt[j] = 0.5 * (1 + xs[j] * xs[j]) * 2 * pi / N;
  }
  Mat D(N, cutoff);
#pragma omp parallel for
  for (int n = 0; n < cutoff; ++n)
    for (int j = 0; j < N; ++j) {
      V(j, n) = line_basis(n, xs[j]);
      D(j, n) = line_basis_derivative(n, xs[j]);
    }
  auto element = [&](OpId op) {
    for (int n = 0; n < cutoff; ++n)
      for (int j = 0; j < N; ++j) W(j, n) = wt[j] * line_operator(op, xs[j], V(j, n), D(j, n));
    Mat m = V.adjoint() * W;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (std::abs(m(i, j)) < 1e-12) m(i, j) = 0.0;
    return m;
  };
  return {element(OpId::K0), element(OpId::Kplus), element(OpId::Kminus), element(OpId::K1), element(OpId::K2)};
}

void CauchyParams::validate() const {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw DomainError("Cauchy: lambda must be positive");
  if (!std::isfinite(a)) throw DomainError("Cauchy: a must be finite");
}

Cauchy::Cauchy(CauchyParams p) : p_(p) { p_.validate(); }

double Cauchy::density(double x) const {
  const double d = x - p_.a;
  return p_.lambda / (pi * (p_.lambda * p_.lambda + d * d));
}

double Cauchy::distribution(double x) const { return 0.5 + std::atan((x - p_.a) / p_.lambda) / pi; }

double Cauchy::quantile(double prob) const {
  if (!(prob > 0 && prob < 1)) throw DomainError("Cauchy::quantile: p must lie in (0,1)");
  return p_.a + p_.lambda * std::tan(pi * (prob - 0.5));
}

cplx Cauchy::characteristic(double t) const { return std::exp(cplx(-p_.lambda * std::abs(t), p_.a * t)); }

Cauchy Cauchy::convolve(const Cauchy& o) const { return Cauchy({p_.lambda + o.p_.lambda, p_.a + o.p_.a}); }

double Cauchy::inflexion_offset() const { return p_.lambda / std::sqrt(3.0); }

double line_fourier(int n, double p) {
  if (n < 0) throw DomainError("line_fourier: n must be >= 0");
  if (p < 0) return 0.0;
  if (std::exp(-p) == 0.0) return 0.0;
  const double s = n % 2 ? -1.0 : 1.0;
  return std::sqrt(2.0) * s * std::exp(-p) * orthopoly(PolyKind::laguerre, n, 0, 2 * p);
}

cplx fourier_line_quadrature(const std::function<cplx(double)>& f, double p) {
  if (p == 0) throw ConfigError("fourier_line_quadrature: p must be nonzero");
  // half-period panels give partial sums with alternating tails; repeated averaging removes the tail
  const double h = pi / std::abs(p);
  const int J = 96, levels = 24;
  auto side = [&](double sgn) {
    std::vector<cplx> partial;
    cplx s = 0.0;
    for (int j = 0; j < J; ++j) {
      s += gl_panel([&](double t) { const double x = sgn * t; return f(x) * std::exp(cplx(0, -p * x)); }, j * h, (j + 1) * h);
      partial.push_back(s);
    }
    std::vector<cplx> avg(partial.end() - levels - 1, partial.end());
    for (int l = 0; l < levels; ++l)
      for (std::size_t i = 0; i + 1 < avg.size() - l; ++i) avg[i] = 0.5 * (avg[i] + avg[i + 1]);
    return avg[0];
  };
  return (side(1.0) + side(-1.0)) / std::sqrt(2 * pi);
}

double hermite_function(int n, double x) {
  if (n < 0) throw DomainError("hermite_function: n must be >= 0");
  // normalized recurrence without the Gaussian, rescaled to stay in range
  double a = 1.0, b = std::sqrt(2.0) * x, ls = 0.0;
  if (n == 0) return std::exp(-0.5 * x * x) / std::pow(pi, 0.25);
  for (int j = 1; j < n; ++j) {
    const double c = std::sqrt(2.0 / (j + 1)) * x * b - std::sqrt(double(j) / (j + 1)) * a;
    a = b;
    b = c;
    if (std::abs(b) > 1e150) {
      a *= 1e-150;
      b *= 1e-150;
      ls += 150 * std::log(10.0);
    }
  }
  return b * std::exp(ls - 0.5 * x * x) / std::pow(pi, 0.25);
}

double hermite_function_derivative(int n, double x) {
  const double d = -x * hermite_function(n, x);
  return n > 0 ? d + std::sqrt(2.0 * n) * hermite_function(n - 1, x) : d;
}

cplx hermite_projection(int n, double xi) {
  if (n < 0 || n > 12) throw ConfigError("hermite_projection: closed form available for 0 <= n <= 12");
  if (std::abs(xi) > 30) throw DomainError("hermite_projection: |xi| must be <= 30");
  // n-th t-derivative at t = 0 of (1/(2 pi^{1/4})) exp(-(t^2/2 - sqrt2 t xi + xi^2/2)) erfc(i(t - xi/sqrt2))
  const double c = 0.5 / std::pow(pi, 0.25);
  const double y = xi / std::sqrt(2.0);
  cplx s = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= n; ++j) {
    const double hm = orthopoly(PolyKind::hermite, n - j, 0, xi) * std::pow(2.0, -0.5 * (n - j));
    cplx term;
    if (j == 0) {
      const cplx b0 = 1.0 + erf_family(cplx(0, y)).erf;
      term = c * std::exp(-0.5 * xi * xi) * hm * b0;
    } else {
      // the Gaussian factors of both derivatives cancel
      term = -c * hm * (2 / std::sqrt(pi)) * ipow(j) * hermite_c(j - 1, cplx(0, y));
    }
    s += binom * term;
    binom = binom * (n - j) / (j + 1);
  }
  return s / std::sqrt(std::tgamma(n + 1.0));
}

cplx hermite_projection_quadrature(int n, double xi) {
  if (n < 0) throw DomainError("hermite_projection_quadrature: n must be >= 0");
  const double P = std::sqrt(2.0 * n + 1) + 12;
  const cplx v = gl_range([&](double p) { return hermite_function(n, p) * std::exp(cplx(0, xi * p)); }, 0.0, P,
                          std::min(0.5, 2.0 / (1 + std::abs(xi))));
  return ipow(-n) * v / std::sqrt(2 * pi);
}

TransitionAmplitude transition_amplitude(int m, int n) {
  if (m < 0 || n < 0 || m > 8 || n > 8) throw ConfigError("transition_amplitude: 0 <= m, n <= 8");
  TransitionAmplitude r;
  // (v^_m, u^_n) over p >= 0, v^_m real
  const double P = std::sqrt(2.0 * n + 1) + 12;
  const double q = gl_range([&](double p) { return cplx(line_fourier(m, p) * hermite_function(n, p)); }, 0.0, P, 1.0).real();
  r.quadrature = ipow(-n) * q;

  // polynomial L_m(2p) H_n(p) integrated against exp(-p^2/2 - p) via its moments
  std::vector<long double> L(m + 1), H{1.0L}, Hp{1.0L};
  for (int j = 0; j <= m; ++j) {
    long double b = 1.0L;
    for (int i = 0; i < j; ++i) b = b * (m - i) / (i + 1);
    long double f = 1.0L;
    for (int i = 1; i <= j; ++i) f *= i;
    L[j] = (j % 2 ? -1.0L : 1.0L) * b * std::pow(2.0L, j) / f;
  }
  if (n >= 1) {
    std::vector<long double> h0{1.0L}, h1{0.0L, 2.0L};
    for (int j = 1; j < n; ++j) {
      std::vector<long double> h2(j + 2, 0.0L);
      for (std::size_t i = 0; i < h1.size(); ++i) h2[i + 1] += 2 * h1[i];
      for (std::size_t i = 0; i < h0.size(); ++i) h2[i] -= 2.0L * j * h0[i];
      h0 = h1;
      h1 = h2;
    }
    H = h1;
  }
  const auto poly = poly_mul(L, H);
  std::vector<long double> M(poly.size());
  M[0] = std::sqrt(std::numbers::pi_v<long double> / 2) * std::exp(0.5L) * std::erfc(1 / std::sqrt(2.0L));
  if (M.size() > 1) M[1] = 1 - M[0];
  for (std::size_t j = 2; j < M.size(); ++j) M[j] = (j - 1) * M[j - 2] - M[j - 1];
  long double acc = 0.0L;
  for (std::size_t j = 0; j < poly.size(); ++j) acc += poly[j] * M[j];
  long double pre = std::sqrt(2.0L) / std::pow(std::numbers::pi_v<long double>, 0.25L);
  for (int i = 1; i <= n; ++i) pre /= std::sqrt(2.0L * i);
  if (m % 2) pre = -pre;
  r.closed_form = ipow(-n) * double(pre * acc);
  return r;
}

double hermite_halfline_overlap(int m, int n) {
  if (m < 0 || n < 0) throw DomainError("hermite_halfline_overlap: m, n must be >= 0");
  double a = 1.0, b = 1.0;
  for (int i = 0; i < n; ++i) a *= m - n + 0.5 + i;
  for (int i = 0; i < m; ++i) b *= n - m + 1.5 + i;
  return std::ldexp(a * b, 2 * (m + n));
}

UnitaryMapReport unitary_map_check(int cutoff) {
  if (cutoff < 2) throw ConfigError("unitary_map_check: cutoff must be >= 2");
  UnitaryMapReport r;
  const auto g = line_generators(cutoff);
  Mat D = Mat::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) D(n, n) = 1 / std::sqrt(g.K0(n, n).real() + 0.5);
  r.Q_line = (g.Kplus * D + D * g.Kminus) / std::sqrt(2.0);
  r.P_line = I * (g.Kplus * D - D * g.Kminus) / std::sqrt(2.0);

  const double L = std::sqrt(2.0 * cutoff + 1) + 10, dx = 0.02;
  const int N = int(2 * L / dx) + 1;
  Eigen::MatrixXd U(N, cutoff), dU(N, cutoff);
  Eigen::VectorXd x(N);
  for (int j = 0; j < N; ++j) x[j] = -L + j * dx;
#pragma omp parallel for
  for (int n = 0; n < cutoff; ++n)
    for (int j = 0; j < N; ++j) {
      U(j, n) = hermite_function(n, x[j]);
      dU(j, n) = hermite_function_derivative(n, x[j]);
    }
  const Eigen::MatrixXd XU = x.asDiagonal() * U;
  r.Q_osc = (dx * (U.transpose() * XU)).cast<cplx>();
  r.P_osc = -I * (dx * (U.transpose() * dU)).cast<cplx>();
  r.max_deviation = std::max((r.Q_line - r.Q_osc).cwiseAbs().maxCoeff(), (r.P_line - r.P_osc).cwiseAbs().maxCoeff());
  return r;
}

}  // namespace so12
