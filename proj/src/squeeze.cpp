#include "so12/squeeze.hpp"

#include <omp.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace so12 {

namespace {

const cplx I(0.0, 1.0);

OperatorMatrix wrap(Mat m, bool herm) { return {int(m.rows()), std::move(m), herm}; }

const OperatorMatrix& pick(const Generators& g, OpId which) {
  switch (which) {
    case OpId::K0: return g.K0;
    case OpId::K1: return g.K1;
    case OpId::K2: return g.K2;
    case OpId::Kplus: return g.Kplus;
    default: return g.Kminus;
  }
}

// coefficients of the chosen operator on (K0, K1, K2)
Eigen::Vector3cd op_coords(OpId which) {
  switch (which) {
    case OpId::K0: return {1, 0, 0};
    case OpId::K1: return {0, 1, 0};
    case OpId::K2: return {0, 0, 1};
    case OpId::Kplus: return {0, 1, I};
    default: return {0, 1, -I};
  }
}

double mean_real(const Vec& v, const Mat& m) { return std::real(v.dot(m * v)); }

}  // namespace

void SU11Element::validate(double tol) const {
  double d = std::norm(alpha) - std::norm(beta) - 1.0;
  if (!(std::abs(d) <= tol)) throw DomainError("SU11Element: |alpha|^2 - |beta|^2 != 1");
}

Mat2c SU11Element::matrix() const {
  Mat2c m;
  m << alpha, beta, std::conj(beta), std::conj(alpha);
  return m;
}

SU11Element SU11Element::from_matrix(const Mat2c& m) { return {m(0, 0), m(0, 1)}; }

Mat3 lorentz_metric() { return Eigen::Vector3d(-1, 1, 1).asDiagonal(); }

Mat3 adjoint_matrix(const SqueezeParams& s) {
  Mat3 M = Mat3::Identity();
  if (s.kind == SqueezeParams::Kind::rotation) {
    double c = std::cos(s.tau), sn = std::sin(s.tau);
    M(1, 1) = c;
    M(1, 2) = sn;
    M(2, 1) = -sn;
    M(2, 2) = c;
    return M;
  }
  double r = std::abs(s.w);
  if (r == 0.0) return M;
  double th = std::arg(s.w);
  double ch = std::cosh(r), sh = std::sinh(r);
  double ct = std::cos(th), st = std::sin(th);
  M << ch, sh * ct, -sh * st,
       ct * sh, 1 + ct * ct * (ch - 1), -st * ct * (ch - 1),
      -st * sh, -st * ct * (ch - 1), 1 + st * st * (ch - 1);
  return M;
}

Mat unitary(const RepParams& p, const SqueezeParams& s) {
  p.validate();
  Generators g = build_generators(p);
  if (s.kind == SqueezeParams::Kind::rotation) {
    Vec d(p.cutoff);
    for (int n = 0; n < p.cutoff; ++n) d(n) = std::exp(I * s.tau * (p.k + n));
    return d.asDiagonal();
  }
  Mat X = (s.w / 2.0) * g.Kplus.entries - (std::conj(s.w) / 2.0) * g.Kminus.entries;
  return X.exp();
}

OperatorMatrix conjugate_operator(const RepParams& p, const SqueezeParams& s, OpId which) {
  p.validate();
  if (conjugation_block(p, s) < 1)
    throw CutoffExhausted("conjugate_operator: |w| too large for the cutoff");
  Generators g = build_generators(p);
  Mat U = unitary(p, s);
  const OperatorMatrix& op = pick(g, which);
  return wrap(U.adjoint() * op.entries * U, op.hermitian);
}

int conjugation_block(const RepParams& p, const SqueezeParams& s) {
  if (s.kind == SqueezeParams::Kind::rotation) return p.cutoff;
  // U(w) carries |n> out to levels ~ (n + 2k) e^{|w|}; past that the wall at N
  // reflects it back, so only rows well below (N + 2k) e^{-|w|} are trusted
  double m = (p.cutoff + 2 * p.k) * std::exp(-std::abs(s.w)) / 4 - 2 * p.k;
  return m < 1 ? 0 : int(std::min<double>(m, p.cutoff));
}

double conjugation_residual(const RepParams& p, const SqueezeParams& s, OpId which) {
  OperatorMatrix c = conjugate_operator(p, s, which);
  Generators g = build_generators(p);
  Mat3 M = adjoint_matrix(s);
  Eigen::Vector3cd a = op_coords(which);
  Eigen::Vector3cd coef = M.transpose().cast<cplx>() * a;
  Mat pred = coef(0) * g.K0.entries + coef(1) * g.K1.entries + coef(2) * g.K2.entries;
  int m = conjugation_block(p, s);
  return (c.entries - pred).topLeftCorner(m, m).cwiseAbs().maxCoeff();
}

std::vector<double> conjugation_sweep(const std::vector<RepParams>& reps,
                                      const std::vector<SqueezeParams>& params, OpId which,
                                      Exec ex) {
  if (reps.size() != params.size()) throw ConfigError("conjugation_sweep: size mismatch");
  std::vector<double> out(reps.size());
  long n = long(reps.size());
  if (ex == Exec::serial) {
    for (long i = 0; i < n; ++i) out[i] = conjugation_residual(reps[i], params[i], which);
    return out;
  }
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) out[i] = conjugation_residual(reps[i], params[i], which);
  return out;
}

Mat2c r0(double theta) {
  Mat2c m = Mat2c::Zero();
  m(0, 0) = std::exp(I * theta / 2.0);
  m(1, 1) = std::exp(-I * theta / 2.0);
  return m;
}

Mat2c a0(double t) {
  Mat2c m;
  double c = std::cosh(t / 2), s = std::sinh(t / 2);
  m << c, I * s, -I * s, c;
  return m;
}

Mat2c n0(double xi) {
  Mat2c m;
  m << 1.0 + I * xi / 2.0, xi / 2, xi / 2, 1.0 - I * xi / 2.0;
  return m;
}

std::array<double, 3> decompose(const SU11Element& g, Scheme scheme) {
  g.validate(1e-10);
  if (scheme == Scheme::iwasawa) {
    // r0 a0 n0 has alpha - i beta = e^{i theta/2} e^{t/2}
    cplx u = g.alpha - I * g.beta;
    double theta = 2.0 * std::arg(u);
    double t = 2.0 * std::log(std::abs(u));
    double xi = 2.0 * std::imag(g.alpha * std::exp(-I * theta / 2.0)) * std::exp(-t / 2.0);
    return {theta, t, xi};
  }
  // r0(th2) a0(t) r0(th1): alpha = cosh(t/2) e^{i(th1+th2)/2}, beta = i sinh(t/2) e^{i(th2-th1)/2}
  double t = 2.0 * std::acosh(std::max(1.0, std::abs(g.alpha)));
  double sum = 2.0 * std::arg(g.alpha);
  double diff = std::abs(g.beta) > 0 ? 2.0 * std::arg(-I * g.beta) : 0.0;
  return {(sum + diff) / 2.0, t, (sum - diff) / 2.0};
}

SU11Element recompose(const std::array<double, 3>& par, Scheme scheme) {
  Mat2c m = scheme == Scheme::iwasawa ? Mat2c(r0(par[0]) * a0(par[1]) * n0(par[2]))
                                      : Mat2c(r0(par[0]) * a0(par[1]) * r0(par[2]));
  return SU11Element::from_matrix(m);
}

SqueezePM squeeze_pm_expectations(double k, double w1) {
  double ep = std::exp(w1), em = std::exp(-w1);
  return {k * ep, -k * em, 0.5 * k * ep * ep, 0.5 * k * em * em, 0.25 * k * k, 0.5 * k, 0.0};
}

SqueezePM squeeze_pm_mirror(double k, double w2) {
  double ep = std::exp(w2), em = std::exp(-w2);
  return {k * em, -k * ep, 0.5 * k * em * em, 0.5 * k * ep * ep, 0.25 * k * k, 0.5 * k, 0.0};
}

SqueezePM squeeze_pm_numeric(double k, double w, int cutoff, bool mirror) {
  RepParams p{k, cutoff};
  Generators g = build_generators(p);
  SqueezeParams s = SqueezeParams::boost(mirror ? cplx(0.0, w) : cplx(w, 0.0));
  Mat U = unitary(p, s);
  Vec psi = U.col(0);
  const Mat& X = mirror ? g.K2.entries : g.K1.entries;
  Mat Ap = X + g.K0.entries, Am = X - g.K0.entries;
  SqueezePM r{};
  r.mean_plus = mean_real(psi, Ap);
  r.mean_minus = mean_real(psi, Am);
  r.var_plus = mean_real(psi, Ap * Ap) - r.mean_plus * r.mean_plus;
  r.var_minus = mean_real(psi, Am * Am) - r.mean_minus * r.mean_minus;
  r.product = r.var_plus * r.var_minus;
  Mat anti = 0.5 * (Ap * Am + Am * Ap);
  r.s_corr_abs = std::abs(mean_real(psi, anti) - r.mean_plus * r.mean_minus);
  r.comm_imag = std::imag(psi.dot(commutator(Ap, Am) * psi));
  return r;
}

UncertaintyReport rs_uncertainty(const OperatorMatrix& A, const OperatorMatrix& B,
                                 const StateVector& psi) {
  int n = psi.cutoff();
  if (A.dim != B.dim || A.dim < n) throw ConfigError("rs_uncertainty: dimension mismatch");
  Vec v = Vec::Zero(A.dim);
  v.head(n) = psi.coeffs;
  Vec Av = A.entries * v, Bv = B.entries * v;
  double mA = std::real(v.dot(Av)), mB = std::real(v.dot(Bv));
  cplx AB = Av.dot(Bv);  // <psi|A B|psi> for hermitian A
  UncertaintyReport r;
  r.var_A = std::max(0.0, Av.squaredNorm() - mA * mA);
  r.var_B = std::max(0.0, Bv.squaredNorm() - mB * mB);
  r.comm_term = std::abs(std::imag(AB));  // <[A,B]> = 2i Im<AB>
  r.s_corr = std::real(AB) - mA * mB;
  r.rs_bound = std::hypot(r.comm_term, r.s_corr);
  r.heisenberg_bound = r.comm_term;
  r.squeezed_A = r.var_A < r.rs_bound;
  r.squeezed_B = r.var_B < r.rs_bound;
  r.heisenberg_squeezed_A = r.var_A < r.heisenberg_bound;
  r.heisenberg_squeezed_B = r.var_B < r.heisenberg_bound;
  return r;
}

AbsoluteBounds absolute_bounds(const OperatorMatrix& A, const OperatorMatrix& B,
                               const std::vector<StateVector>& states) {
  AbsoluteBounds b;
  for (size_t i = 0; i < states.size(); ++i) {
    UncertaintyReport r = rs_uncertainty(A, B, states[i]);
    if (b.argmin_rs < 0 || r.rs_bound < b.min_rs) {
      b.min_rs = r.rs_bound;
      b.argmin_rs = int(i);
    }
    if (b.argmin_heisenberg < 0 || r.heisenberg_bound < b.min_heisenberg) {
      b.min_heisenberg = r.heisenberg_bound;
      b.argmin_heisenberg = int(i);
    }
  }
  return b;
}

std::vector<StateVector> number_basis(double k, int dim, int count) {
  std::vector<StateVector> out;
  for (int n = 0; n < count && n < dim; ++n) {
    StateVector s{k, Vec::Zero(dim), 0.0};
    s.coeffs(n) = 1.0;
    out.push_back(std::move(s));
  }
  return out;
}

SchwarzResult schwarz_gamma(const OperatorMatrix& A, const OperatorMatrix& B, const StateVector& psi) {
  int n = psi.cutoff();
  if (A.dim != B.dim || A.dim < n) throw ConfigError("schwarz_gamma: dimension mismatch");
  Vec v = Vec::Zero(A.dim);
  v.head(n) = psi.coeffs;
  Vec Av = A.entries * v, Bv = B.entries * v;
  cplx mA = v.dot(Av), mB = v.dot(Bv);
  Vec At = Av - mA * v, Bt = Bv - mB * v;
  double varA = At.squaredNorm();
  if (!(varA > 0.0)) throw DomainError("schwarz_gamma: var_A = 0");
  // <A~ psi | B~ psi> = <S> + <[A,B]>/2
  cplx gamma = At.dot(Bt) / varA;
  return {gamma, (Bt - gamma * At).norm()};
}

double ctilde_coeff(double k, int n) {
  if (n <= 0) return 0.0;
  return std::sqrt(n * (2 * k + n - 1)) / (2 * k + n - 1);
}

double chat_coeff(double k, int n) {
  if (n <= 0) return 0.0;
  return std::sqrt(n * (2 * k + n - 1)) * (1.0 / (2 * k + n - 1) + 1.0 / (2 * k + n));
}

double ccheck_coeff(double k, int n) {
  if (n <= 0) return 0.0;
  return std::sqrt(n * (2 * k + n - 1)) * (1.0 / (k + n - 1) + 1.0 / (k + n));
}

CosSinVariants cos_sin_variants(double k, int cutoff) {
  RepParams{k, cutoff}.validate();
  int N = cutoff;
  Mat Em = Mat::Zero(N, N), Ch = Mat::Zero(N, N), Cc = Mat::Zero(N, N);
  for (int n = 1; n < N; ++n) {
    Em(n - 1, n) = ctilde_coeff(k, n);
    Ch(n - 1, n) = 0.25 * chat_coeff(k, n);
    Cc(n - 1, n) = 0.25 * ccheck_coeff(k, n);
  }
  Mat Ep = Em.adjoint();
  // lowering part L and its adjoint give C = L + L^+, S = -i (L - L^+)
  auto cos_of = [](const Mat& L) -> Mat { return L + L.adjoint(); };
  auto sin_of = [](const Mat& L) -> Mat { return -I * (L - L.adjoint()); };
  CosSinVariants v;
  v.E_minus = wrap(Em, false);
  v.E_plus = wrap(Ep, false);
  v.Ctilde = wrap(0.5 * (Ep + Em), true);
  v.Stilde = wrap((Em - Ep) / (2.0 * I), true);
  v.Chat = wrap(cos_of(Ch), true);
  v.Shat = wrap(sin_of(Ch), true);
  v.Ccheck = wrap(cos_of(Cc), true);
  v.Scheck = wrap(sin_of(Cc), true);
  return v;
}

OneMode one_mode_realization(int cutoff) {
  if (cutoff < 2 || cutoff % 2) throw ConfigError("one_mode_realization: cutoff must be even");
  Mat a = boson_annihilator(cutoff);
  Mat ad = a.adjoint();
  OneMode om;
  om.dim = cutoff;
  Mat Kp = 0.5 * ad * ad, Km = 0.5 * a * a;
  Mat K0 = Mat::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) K0(n, n) = 0.5 * (n + 0.5);
  om.Kplus = wrap(Kp, false);
  om.Kminus = wrap(Km, false);
  om.K0 = wrap(K0, true);
  om.K1 = wrap(0.5 * (Kp + Km), true);
  om.K2 = wrap((Kp - Km) / (2.0 * I), true);
  om.Q = wrap((ad + a) / std::sqrt(2.0), true);
  om.P = wrap(I * (ad - a) / std::sqrt(2.0), true);
  for (int n = 0; n < cutoff; ++n) (n % 2 ? om.odd : om.even).push_back(n);
  return om;
}

Mat sector_block(const Mat& m, const std::vector<int>& idx) {
  int s = int(idx.size());
  Mat b(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) b(i, j) = m(idx[i], idx[j]);
  return b;
}

Mat rotate_by_K0(const OneMode& om, const Mat& X, double tau) {
  Vec d = (I * tau * om.K0.entries.diagonal()).array().exp();
  return d.conjugate().asDiagonal() * X * d.asDiagonal();
}

TwoMode two_mode_realization(int cutoff_per_mode) {
  if (cutoff_per_mode < 4) throw ConfigError("two_mode_realization: cutoff per mode must be >= 4");
  int N = cutoff_per_mode;
  Mat a = boson_annihilator(N);
  Mat id = Mat::Identity(N, N);
  auto kron = [](const Mat& x, const Mat& y) {
    Mat r(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        r.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return r;
  };
  Mat a1 = kron(a, id), a2 = kron(id, a);
  Mat a1d = a1.adjoint(), a2d = a2.adjoint();
  TwoMode tm;
  tm.n_per_mode = N;
  tm.dim = N * N;
  Mat Kp = a1d * a2d, Km = a1 * a2;
  Mat K0 = Mat::Zero(tm.dim, tm.dim);
  for (int n1 = 0; n1 < N; ++n1)
    for (int n2 = 0; n2 < N; ++n2) K0(tm.index(n1, n2), tm.index(n1, n2)) = 0.5 * (n1 + n2 + 1);
  tm.Kplus = wrap(Kp, false);
  tm.Kminus = wrap(Km, false);
  tm.K0 = wrap(K0, true);
  tm.K1 = wrap(0.5 * (Kp + Km), true);
  tm.K2 = wrap((Kp - Km) / (2.0 * I), true);
  double r2 = std::sqrt(2.0);
  tm.Q1 = wrap((a1d + a1) / r2, true);
  tm.P1 = wrap(I * (a1d - a1) / r2, true);
  tm.Q2 = wrap((a2d + a2) / r2, true);
  tm.P2 = wrap(I * (a2d - a2) / r2, true);
  for (int n1 = 0; n1 < N; ++n1)
    for (int n2 = 0; n2 < N; ++n2) tm.sectors[n1 - n2];
  for (auto& [d, idx] : tm.sectors) {
    for (int m = 0; m < N; ++m) {
      int n1 = d >= 0 ? m + d : m, n2 = d >= 0 ? m : m - d;
      if (n1 < N && n2 < N) idx.push_back(tm.index(n1, n2));
    }
  }
  return tm;
}

double two_mode_sector_k(int d) { return 0.5 + std::abs(d) / 2.0; }

Vec product_coherent(const TwoMode& tm, cplx alpha1, cplx alpha2) {
  int N = tm.n_per_mode;
  auto coh = [N](cplx al) {
    Vec c(N);
    double lf = 0.0;
    for (int n = 0; n < N; ++n) {
      if (n) lf += std::log(double(n));
      c(n) = std::exp(-0.5 * std::norm(al) - 0.5 * lf) * std::pow(al, n);
    }
    return c;
  };
  Vec c1 = coh(alpha1), c2 = coh(alpha2);
  Vec v(tm.dim);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) v(tm.index(i, j)) = c1(i) * c2(j);
  return v / v.norm();
}

TwoModeSqueeze two_mode_squeeze(const TwoMode& tm, cplx alpha1, cplx alpha2, double w1) {
  Vec psi = product_coherent(tm, alpha1, alpha2);
  Mat X = I * w1 * tm.K2.entries;
  psi = X.exp() * psi;
  auto var = [&psi](const Mat& m) {
    double mu = mean_real(psi, m);
    return mean_real(psi, m * m) - mu * mu;
  };
  Mat Qp = tm.Q1.entries + tm.Q2.entries, Qm = tm.Q1.entries - tm.Q2.entries;
  Mat Pp = tm.P1.entries + tm.P2.entries, Pm = tm.P1.entries - tm.P2.entries;
  return {var(Qm), var(Pp), var(Qp), var(Pm)};
}

}  // namespace so12
