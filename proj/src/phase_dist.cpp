#include "so12/phase_dist.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

#include "so12/kahan.hpp"
#include "so12/special_fn.hpp"

namespace so12 {

namespace {

const double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

struct Nodes {
  std::vector<double> x, w;  // on [-1, 1]
  Nodes() {
    using G = boost::math::quadrature::gauss<double, 64>;
    const auto& a = G::abscissa();
    const auto& b = G::weights();
    for (size_t i = 0; i < a.size(); ++i) {
      x.push_back(a[i]);
      w.push_back(b[i]);
      if (a[i] != 0) {
        x.push_back(-a[i]);
        w.push_back(b[i]);
      }
    }
  }
};

const Nodes& gl64() {
  static const Nodes n;
  return n;
}

double log_g(double k, double x) { return log_g_k(k, cplx(x, 0.0)).value.real(); }

double log_m_tilde(double k, double r) {
  const double nu = 2 * k - 1;
  return std::log(2.0 / pi) - std::lgamma(2 * k) + nu * std::log(r) + std::log(bessel_k(nu, 2 * r).value);
}

// sum over nodes of w_i g(r_i) on the panels of [0, cut] in t, r = cut t^2
std::pair<cplx, double> panel_sum(const std::function<cplx(double)>& g, double cut, int panels, Exec ex) {
  const Nodes& n = gl64();
  const int q = int(n.x.size());
  const long total = long(panels) * q;
  std::vector<cplx> vals(total);
  std::vector<double> wts(total);
  auto eval = [&](long i) {
    const int p = int(i / q), j = int(i % q);
    const double t = (p + 0.5 * (1 + n.x[j])) / panels;
    const double r = cut * t * t;
    wts[i] = n.w[j] / (2.0 * panels) * 2 * cut * t;
    vals[i] = r > 0 ? g(r) : 0.0;
  };
  if (ex == Exec::serial) {
    for (long i = 0; i < total; ++i) eval(i);
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < total; ++i) eval(i);
  }
  Kahan<cplx> s;
  Kahan<double> a;
  for (long i = 0; i < total; ++i) {
    s.add(wts[i] * vals[i]);
    a.add(wts[i] * std::abs(vals[i]));
  }
  return {s.sum, a.sum};
}

double auto_cut(const std::function<cplx(double)>& g) {
  double peak = 0, r_peak = 0;
  int quiet = 0;
  for (double r = 0.05; r < 1e4; r = 1.08 * r + 0.1) {
    const double v = std::abs(g(r)) * (1 + r);
    if (!std::isfinite(v)) throw QuadratureError("radial integrand not finite");
    if (v > peak) {
      peak = v;
      r_peak = r;
    }
    if (r > r_peak && v <= 1e-18 * peak) {
      if (++quiet >= 4) return r;
    } else {
      quiet = 0;
    }
  }
  throw QuadratureError("radial integrand does not decay");
}


Mat nilpotent_exp(const Mat& A) {
  const int D = int(A.rows());
  Mat E = Mat::Identity(D, D), term = E;
  for (int m = 1; m <= D; ++m) {
    term = term * A / double(m);
    E += term;
    if (term.norm() <= 1e-18 * E.norm()) break;
  }
  return E;
}

}  // namespace

DensityOperator DensityOperator::from_matrix(double k, const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ConfigError("density operator must be square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw DomainError("density operator not hermitian");
  if (std::abs(m.trace() - 1.0) > 1e-12) throw DomainError("density operator trace != 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12) throw DomainError("density operator not positive");
  return {k, int(m.rows()), m, 0.0};
}

DensityOperator DensityOperator::pure(const StateVector& v) {
  Vec u = v.coeffs / v.coeffs.norm();
  return {v.k, int(u.size()), u * u.adjoint(), v.tail_norm * v.tail_norm};
}

DensityOperator thermal_state(double k, double a, int cutoff) {
  if (!(a > 0 && a < 1)) throw DomainError("thermal_state: need 0 < a < 1");
  RepParams{k, cutoff}.validate();
  Mat m = Mat::Zero(cutoff, cutoff);
  const double tail = std::pow(a, cutoff);
  for (int n = 0; n < cutoff; ++n) m(n, n) = (1 - a) * std::pow(a, n) / (1 - tail);
  return {k, cutoff, m, tail};
}

DensityOperator maxent_state(double k, double gamma, int cutoff) {
  RepParams p{k, cutoff};
  p.validate();
  // Casimir on the interior is k(1-k); the truncation edge is overwritten with the same value
  Mat e = std::exp(-gamma * k * (1 - k)) * Mat::Identity(cutoff, cutoff);
  return {k, cutoff, e / e.trace(), 0.0};
}

QuadResult radial_integrate(const std::function<cplx(double)>& g, const RadialQuadrature& q, Exec ex) {
  const double cut = q.upper_cut > 0 ? q.upper_cut : auto_cut(g);
  int P = std::max(1, q.panels);
  auto prev = panel_sum(g, cut, P, ex);
  for (;;) {
    P *= 2;
    auto cur = panel_sum(g, cut, P, ex);
    const double err = std::abs(cur.first - prev.first);
    const double scale = std::max(cur.second, 1e-300);
    if (err <= std::max(q.tol * scale, q.abs_tol)) return {cur.first, err, P, cut};
    if (P >= q.max_panels) {
      if (err > std::max(1e-6 * scale, q.abs_tol)) throw QuadratureError("radial quadrature did not converge");
      return {cur.first, err, P, cut};
    }
    prev = cur;
  }
}

cplx angular_mean(const std::function<cplx(double)>& h) {
  Kahan<cplx> s;
  for (int j = 0; j < kAngularNodes; ++j) s.add(h(2 * pi * j / kAngularNodes));
  return s.sum / double(kAngularNodes);
}

MeasureWeight bg_measure_weight(double k, double r) {
  if (!(k > 0)) throw DomainError("bg_measure_weight: k must be positive");
  if (r < 0) throw DomainError("bg_measure_weight: |z| must be non-negative");
  if (r == 0) {
    if (!(k > 0.5)) throw DomainError("bg_measure_weight: weight diverges at z = 0 for k <= 1/2");
    const double m0 = 1.0 / ((2 * k - 1) * pi);
    return {m0, m0};
  }
  const double lmt = log_m_tilde(k, r);
  return {std::exp(lmt + log_g(k, r * r)), std::exp(lmt)};
}

double bg_measure_tilde_asymptotic(double k, double r) {
  const double nu = 2 * k - 1;
  return std::pow(r, 2 * k - 1.5) / (std::sqrt(pi) * std::tgamma(2 * k)) * std::exp(-2 * r) *
         (1 + (4 * nu * nu - 1) / (16 * r));
}

cplx bg_completeness(double k, int n2, int n1, const RadialQuadrature& q, Exec ex) {
  if (n1 < 0 || n2 < 0 || n1 >= 60 || n2 >= 60) throw ConfigError("bg_completeness: need 0 <= n < 60");
  auto log_a = [k](int n, double lr, double lg) {
    return n * lr - 0.5 * (std::lgamma(n + 1.0) + log_pochhammer(2 * k, n) + lg);
  };
  auto g = [&](double r) -> cplx {
    const double lr = std::log(r), lg = log_g(k, r * r);
    const double lm = log_m_tilde(k, r) + lg;
    const double mag = std::exp(lm + log_a(n2, lr, lg) + log_a(n1, lr, lg));
    if (mag == 0) return 0.0;
    const cplx ang = angular_mean([&](double phi) { return std::exp(I * double(n2 - n1) * phi); });
    return 2 * pi * r * mag * ang;
  };
  QuadResult res = radial_integrate(g, q, ex);
  if (res.error > 1e-6) throw QuadratureError("bg_completeness: error estimate too large");
  return res.value;
}

double bg_radial_moment(double k, int n, const RadialQuadrature& q) {
  auto g = [&](double r) -> cplx {
    return std::exp(2 * (n + k) * std::log(r) + std::log(bessel_k(2 * k - 1, 2 * r).value));
  };
  return radial_integrate(g, q, Exec::serial).value.real();
}

QuadResult disc_integrate(double k, const std::function<cplx(cplx)>& f, Exec ex) {
  if (!(k >= 0.5)) throw DomainError("disc measure needs k >= 1/2");
  // u = (1 - |lambda|^2)^{2k-1} turns (2k-1)(1-x)^{2k-2} dx into du
  const double expo = k == 0.5 ? HUGE_VAL : 1.0 / (2 * k - 1);
  auto g = [&](double u) -> cplx {
    const double x = expo == HUGE_VAL ? 1.0 : 1.0 - std::pow(u, expo);
    const double rad = std::sqrt(std::max(0.0, x));
    return angular_mean([&](double th) { return f(std::polar(rad, th)); });
  };
  RadialQuadrature q;
  q.upper_cut = 1.0;
  return radial_integrate(g, q, ex);
}

QuadResult plane_integrate(double k, const std::function<cplx(cplx)>& f, Exec ex) {
  auto g = [&](double r) -> cplx {
    const double mt = std::exp(log_m_tilde(k, r));
    if (mt == 0) return 0.0;
    return 2 * pi * r * mt * angular_mean([&](double phi) { return f(std::polar(r, phi)); });
  };
  return radial_integrate(g, {}, ex);
}

double perelomov_completeness(double k, int n2, int n1, Exec ex) {
  if (!(k >= 0.5)) throw DomainError("perelomov_completeness: k < 1/2");
  const double c2 = std::exp(0.5 * (log_pochhammer(2 * k, n2) - std::lgamma(n2 + 1.0)));
  const double c1 = std::exp(0.5 * (log_pochhammer(2 * k, n1) - std::lgamma(n1 + 1.0)));
  auto f = [&](cplx lam) { return c2 * c1 * std::pow(lam, n2) * std::pow(std::conj(lam), n1); };
  QuadResult r = disc_integrate(k, f, ex);
  if (r.error > 1e-6) throw QuadratureError("perelomov_completeness: error estimate too large");
  return r.value.real();
}

double sg_completeness(int n2, int n1, Exec ex) {
  if (n1 < 0 || n2 < 0 || n1 >= 60 || n2 >= 60) throw ConfigError("sg_completeness: need 0 <= n < 60");
  auto g = [&](double r) -> cplx {
    const double mag = std::exp(-r * r + (n1 + n2) * std::log(r) - 0.5 * (std::lgamma(n1 + 1.0) + std::lgamma(n2 + 1.0)));
    if (mag == 0) return 0.0;
    const cplx ang = angular_mean([&](double phi) { return std::exp(I * double(n2 - n1) * phi); });
    return 2.0 * r * mag * ang;  // (1/pi) d^2 alpha = (1/pi) r dr dphi
  };
  QuadResult r = radial_integrate(g, {}, ex);
  if (r.error > 1e-6) throw QuadratureError("sg_completeness: error estimate too large");
  return r.value.real();
}

cplx reproducing_kernel(KernelSpace space, double k, cplx x2, cplx x1, double eps) {
  switch (space) {
    case KernelSpace::bg_holo: return g_k(k, std::conj(x2) * x1).value;
    case KernelSpace::perelomov_disc:
      if (!(std::abs(x1) < 1 && std::abs(x2) < 1)) throw DomainError("disc kernel: |lambda| must be < 1");
      return std::pow(1.0 - std::conj(x2) * x1, -2 * k);
    default: {
      if (!(eps >= 0 && eps < 1)) throw DomainError("circle kernel: eps must be in [0, 1)");
      const double d = x1.real() - x2.real();
      const cplx base = 1.0 - (1.0 - eps) * std::exp(I * d);
      if (std::abs(base) == 0) throw DomainError("circle kernel singular at phi2 = phi1 without regularisation");
      return std::pow(base, -2 * k);
    }
  }
}

cplx kernel_moment(KernelSpace space, double k, int n, int nbar, cplx x1, Exec ex) {
  if (space == KernelSpace::circle_k) throw ConfigError("kernel_moment: circle kernel has no area measure");
  if (space == KernelSpace::perelomov_disc && !(std::abs(x1) < 1)) throw DomainError("disc kernel: |lambda| must be < 1");
  // x2 may sit on the boundary circle (k = 1/2), where the kernel is still finite
  auto f = [&](cplx x2) {
    const cplx K = space == KernelSpace::bg_holo ? reproducing_kernel(space, k, x2, x1)
                                                 : std::pow(1.0 - std::conj(x2) * x1, -2 * k);
    return K * std::pow(std::conj(x2), nbar) * std::pow(x2, n);
  };
  QuadResult r = space == KernelSpace::bg_holo ? plane_integrate(k, f, ex) : disc_integrate(k, f, ex);
  return r.value;
}

double gegenbauer_kernel(double k, double t, double x, int nmax) {
  Kahan<double> s;
  double xn = 1;
  for (int n = 0; n <= nmax; ++n, xn *= x) s.add(orthopoly(PolyKind::gegenbauer, n, 2 * k, t) * xn);
  return s.sum;
}

Vec coherent_row(HusimiKind kind, double k, cplx p, int dim) {
  Vec v(dim);
  const double r = std::abs(p), ph = std::arg(p);
  if (kind == HusimiKind::T && !(r < 1)) throw DomainError("T distribution needs |lambda| < 1");
  if (r == 0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  const double lr = std::log(r);
  double base = 0;
  if (kind == HusimiKind::S) base = -0.5 * log_g(k, r * r);
  if (kind == HusimiKind::T) base = k * std::log1p(-r * r);
  if (kind == HusimiKind::Q) base = -0.5 * r * r;
  for (int n = 0; n < dim; ++n) {
    double l = base + n * lr;
    if (kind == HusimiKind::S) l -= 0.5 * (std::lgamma(n + 1.0) + log_pochhammer(2 * k, n));
    if (kind == HusimiKind::T) l += 0.5 * (log_pochhammer(2 * k, n) - std::lgamma(n + 1.0));
    if (kind == HusimiKind::Q) l -= 0.5 * std::lgamma(n + 1.0);
    v(n) = std::polar(std::exp(l), n * ph);
  }
  return v;
}

double husimi(HusimiKind kind, const DensityOperator& rho, cplx point) {
  Vec v = coherent_row(kind, rho.k, point, rho.dim);
  return std::real(v.dot(rho.entries * v));
}

QuadResult husimi_normalization(HusimiKind kind, const DensityOperator& rho, Exec ex) {
  const double k = rho.k;
  if (kind == HusimiKind::T) {
    // T / (1-|lambda|^2)^{2k} is the polynomial rho(k; conj lambda, lambda)
    auto f = [&](cplx lam) -> cplx {
      Vec e(rho.dim);
      for (int n = 0; n < rho.dim; ++n)
        e(n) = std::exp(0.5 * (log_pochhammer(2 * k, n) - std::lgamma(n + 1.0))) * std::pow(lam, n);
      return e.dot(rho.entries * e);
    };
    return disc_integrate(k, f, ex);
  }
  auto g = [&](double r) -> cplx {
    const cplx ang = angular_mean([&](double phi) { return cplx(husimi(kind, rho, std::polar(r, phi))); });
    if (kind == HusimiKind::Q) return 2.0 * r * ang;
    const MeasureWeight w = bg_measure_weight(k, r);
    return 2 * pi * r * w.m * ang;
  };
  return radial_integrate(g, {}, ex);
}

std::vector<GridPoint> husimi_grid(HusimiKind kind, const DensityOperator& rho, double re0, double re1,
                                   double im0, double im1, int nre, int nim, Exec ex) {
  if (nre < 1 || nim < 1) throw ConfigError("husimi_grid: empty grid");
  std::vector<GridPoint> out(size_t(nre) * nim);
  auto at = [&](long i) {
    const int a = int(i / nim), b = int(i % nim);
    const double x = nre > 1 ? re0 + (re1 - re0) * a / (nre - 1) : re0;
    const double y = nim > 1 ? im0 + (im1 - im0) * b / (nim - 1) : im0;
    const cplx p(x, y);
    const bool outside = kind == HusimiKind::T && !(std::abs(p) < 1);
    out[i] = {x, y, outside ? std::nan("") : husimi(kind, rho, p)};
  };
  const long n = long(out.size());
  if (ex == Exec::serial) {
    for (long i = 0; i < n; ++i) at(i);
  } else {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) at(i);
  }
  return out;
}

cplx char_fn(CharKind kind, const DensityOperator& rho, cplx w) {
  const int d = rho.dim;
  if (!(std::abs(w) * d < 50)) throw CutoffExhausted("char_fn: |w| dim must stay below 50");
  auto eval = [&](int D) -> cplx {
    Generators g = build_generators({rho.k, D});
    Mat M;
    if (kind == CharKind::symmetric) {
      Mat X = w * g.Kplus.entries - std::conj(w) * g.Kminus.entries;
      M = X.exp();
    } else {
      Mat Ep = nilpotent_exp(w * g.Kplus.entries);
      Mat Em = nilpotent_exp(-std::conj(w) * g.Kminus.entries);
      M = kind == CharKind::normal ? Mat(Ep * Em) : Mat(Em * Ep);
    }
    return (rho.entries * M.topLeftCorner(d, d)).trace();
  };
  if (kind == CharKind::normal) return eval(d);  // K- first: never leaves the support of rho
  int D = d + 32;
  cplx prev = eval(D);
  while (2 * D <= 1024) {
    D *= 2;
    cplx cur = eval(D);
    if (std::abs(cur - prev) < 1e-12 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw CutoffExhausted("char_fn: working space did not converge");
}

cplx char_fn_quadrature(double k, const std::function<double(double)>& H, cplx w, Exec ex) {
  auto g = [&](double r) -> cplx {
    const double h = H(r);
    if (h == 0) return 0.0;
    const MeasureWeight mw = bg_measure_weight(k, r);
    const cplx ang = angular_mean([&](double phi) {
      const cplx z = std::polar(r, phi);
      return std::exp(w * std::conj(z) - std::conj(w) * z);
    });
    return 2 * pi * r * mw.m * h * ang;
  };
  return radial_integrate(g, {}, ex).value;
}

double thermal_diagonal_weight(double k, double a, double r) {
  if (!(a > 0 && a < 1)) throw DomainError("thermal_diagonal_weight: need 0 < a < 1");
  const double s = std::sqrt(a);
  const double lk = std::log(bessel_k(2 * k - 1, 2 * r / s).value) - std::log(bessel_k(2 * k - 1, 2 * r).value);
  return (1 - a) / a * std::exp(-(2 * k - 1) * std::log(s) + lk);
}

double bg_overlap_sq(double k, cplx z2, cplx z1) {
  const double l = 2 * log_g_k(k, std::conj(z2) * z1).value.real() - log_g(k, std::norm(z2)) - log_g(k, std::norm(z1));
  return std::exp(l);
}

DiagonalRepReport diagonal_rep_forward(double k, const std::function<double(cplx)>& F,
                                       const DensityOperator& rho, const std::vector<cplx>& grid,
                                       cplx center, double radius, Exec ex) {
  RadialQuadrature q;
  q.upper_cut = radius;
  // kernel(z1) multiplies F(z1) d^2 z1
  auto integral = [&](const std::function<double(cplx)>& kernel) {
    auto g = [&](double s) -> cplx {
      return 2 * pi * s * angular_mean([&](double phi) {
               const cplx z1 = center + std::polar(s, phi);
               const double f = F(z1);
               if (f == 0) return cplx(0.0);
               return cplx(f * kernel(z1));
             });
    };
    QuadResult r = radial_integrate(g, q, ex);
    if (r.error > 1e-6 * std::max(1.0, std::abs(r.value))) throw QuadratureError("diagonal_rep_forward: quadrature failed");
    return r.value.real();
  };
  DiagonalRepReport rep;
  rep.normalization = integral([&](cplx z1) { return bg_measure_weight(k, std::abs(z1)).m; });
  for (cplx z : grid) {
    // m_k(z1) |<z|z1>|^2 = m~_k(z1) |g_k(conj z z1)|^2 / g_k(|z|^2)
    const double lgz = log_g(k, std::norm(z));
    const double s = integral([&](cplx z1) {
      return std::exp(log_m_tilde(k, std::abs(z1)) + 2 * log_g_k(k, std::conj(z) * z1).value.real() - lgz);
    });
    const double t = husimi(HusimiKind::S, rho, z);
    rep.from_F.push_back(s);
    rep.target.push_back(t);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(s - t));
  }
  return rep;
}

std::function<double(cplx)> gaussian_surrogate(double k, cplx z0, double sigma) {
  if (!(sigma > 0)) throw DomainError("gaussian_surrogate: sigma must be positive");
  RadialQuadrature q;
  q.upper_cut = 8 * sigma;
  auto g = [&](double s) -> cplx {
    return 2 * pi * s * std::exp(-s * s / (sigma * sigma)) * angular_mean([&](double phi) {
             return cplx(bg_measure_weight(k, std::abs(z0 + std::polar(s, phi))).m);
           });
  };
  const double norm = radial_integrate(g, q, Exec::serial).value.real();
  return [=](cplx z) { return std::exp(-std::norm(z - z0) / (sigma * sigma)) / norm; };
}

}  // namespace so12
