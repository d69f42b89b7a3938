#include "so12/interference.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace so12 {

namespace {

const cplx I(0.0, 1.0);
const double kSqrt2 = std::sqrt(2.0);

// symmetric Hessians S of g_j = x^T S x / 2, x = (q1, q2, p1, p2), entries in units of 1/2
using Hess = std::array<std::array<int, 4>, 4>;
enum { Q1 = 0, Q2 = 1, P1 = 2, P2 = 3 };

Hess hessian_halves(int id) {
  Hess s{};
  auto sym = [&](int a, int b, int v) {
    s[a][b] += v;
    if (a != b) s[b][a] += v;
  };
  switch (id) {
    case 0: sym(Q1, Q1, 1), sym(Q2, Q2, 1), sym(P1, P1, 1), sym(P2, P2, 1); break;
    case 1: sym(Q1, Q2, 1), sym(P1, P2, 1); break;
    case 2: sym(Q1, P2, 1), sym(Q2, P1, -1); break;
    case 3: sym(Q1, Q1, 1), sym(Q2, Q2, -1), sym(P1, P1, 1), sym(P2, P2, -1); break;
    case 4: sym(Q1, Q2, 1), sym(P1, P2, -1); break;
    case 5: sym(Q1, P2, 1), sym(Q2, P1, 1); break;
    case 6: sym(Q1, P1, -1), sym(Q2, P2, -1); break;
    case 7: sym(Q1, P1, 1), sym(Q2, P2, -1); break;
    case 8: sym(Q1, Q1, 1), sym(Q2, Q2, -1), sym(P1, P1, -1), sym(P2, P2, 1); break;
    case 9: sym(Q1, Q1, 1), sym(Q2, Q2, 1), sym(P1, P1, -1), sym(P2, P2, -1); break;
    default: throw DomainError("g_observable: id must be 0..9");
  }
  return s;
}

RatMat4 hessian(int id) {
  Hess h = hessian_halves(id);
  RatMat4 s;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) s(r, c) = Rational(h[r][c], 2);
  return s;
}

RatMat4 omega() {
  RatMat4 o;
  o(0, 2) = o(1, 3) = 1;
  o(2, 0) = o(3, 1) = -1;
  return o;
}

RatMat4 from_rows(std::initializer_list<std::initializer_list<int>> rows, Rational scale) {
  RatMat4 m;
  int r = 0;
  for (auto& row : rows) {
    int c = 0;
    for (int v : row) m(r, c++) = scale * Rational(v);
    ++r;
  }
  return m;
}

// exact solve of X = sum_l x_l B_l; nullopt when X is outside the span
std::optional<std::array<Rational, 10>> solve_in_basis(const std::array<RatMat4, 10>& B, const RatMat4& X) {
  std::array<std::array<Rational, 11>, 16> A;
  for (int r = 0; r < 16; ++r) {
    for (int l = 0; l < 10; ++l) A[r][l] = B[l](r / 4, r % 4);
    A[r][10] = X(r / 4, r % 4);
  }
  std::array<int, 10> pivot_row;
  pivot_row.fill(-1);
  int row = 0;
  for (int col = 0; col < 10 && row < 16; ++col) {
    int p = row;
    while (p < 16 && A[p][col] == Rational(0)) ++p;
    if (p == 16) continue;
    std::swap(A[p], A[row]);
    Rational inv = Rational(1) / A[row][col];
    for (auto& v : A[row]) v *= inv;
    for (int r = 0; r < 16; ++r)
      if (r != row && A[r][col] != Rational(0)) {
        Rational f = A[r][col];
        for (int c = 0; c < 11; ++c) A[r][c] -= f * A[row][c];
      }
    pivot_row[col] = row++;
  }
  for (int r = row; r < 16; ++r)
    if (A[r][10] != Rational(0)) return std::nullopt;
  std::array<Rational, 10> x{};
  for (int col = 0; col < 10; ++col) {
    if (pivot_row[col] < 0) throw DomainError("solve_in_basis: basis is degenerate");
    x[col] = A[pivot_row[col]][10];
  }
  return x;
}

Mat kron(const Mat& x, const Mat& y) {
  Mat r(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      r.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return r;
}

struct Ladders {
  Mat a1, a2, a1d, a2d, N1, N2, id;
};

Ladders ladders(int N) {
  Mat a = Mat::Zero(N, N);
  for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(double(n));
  Mat e = Mat::Identity(N, N);
  Ladders L;
  L.a1 = kron(a, e);
  L.a2 = kron(e, a);
  L.a1d = L.a1.adjoint();
  L.a2d = L.a2.adjoint();
  L.N1 = Mat::Zero(N * N, N * N);
  L.N2 = Mat::Zero(N * N, N * N);
  for (int n1 = 0; n1 < N; ++n1)
    for (int n2 = 0; n2 < N; ++n2) {
      L.N1(n1 * N + n2, n1 * N + n2) = n1;
      L.N2(n1 * N + n2, n1 * N + n2) = n2;
    }
  L.id = Mat::Identity(N * N, N * N);
  return L;
}

// pad a state to a larger per-mode cutoff
Vec embed(const TwoModeState& s, int N) {
  Vec v = Vec::Zero(N * N);
  for (int n1 = 0; n1 < s.n_per_mode; ++n1)
    for (int n2 = 0; n2 < s.n_per_mode; ++n2) v(n1 * N + n2) = s(n1, n2);
  return v;
}

const std::array<std::array<int, 3>, 6> kEps = {{{1, 2, 3}, {2, 3, 1}, {3, 1, 2}, {2, 1, 3}, {3, 2, 1}, {1, 3, 2}}};

}  // namespace

TwoModePoint TwoModePoint::from_amplitudes(cplx A1, cplx A2) {
  return {kSqrt2 * A1.real(), kSqrt2 * A1.imag(), kSqrt2 * A2.real(), kSqrt2 * A2.imag()};
}
cplx TwoModePoint::A1() const { return cplx(q1, p1) / kSqrt2; }
cplx TwoModePoint::A2() const { return cplx(q2, p2) / kSqrt2; }

PolarPoint to_polar(const TwoModePoint& x) {
  if ((x.q1 == 0 && x.p1 == 0) || (x.q2 == 0 && x.p2 == 0))
    throw DomainError("to_polar: (q_j, p_j) = (0, 0) has no phase");
  cplx A1 = x.A1(), A2 = x.A2();
  return {std::norm(A1), -std::arg(A1), std::norm(A2), -std::arg(A2)};
}

TwoModePoint from_polar(const PolarPoint& x) {
  if (x.I1 < 0 || x.I2 < 0) throw DomainError("from_polar: negative intensity");
  return TwoModePoint::from_amplitudes(std::polar(std::sqrt(x.I1), -x.phi1), std::polar(std::sqrt(x.I2), -x.phi2));
}

Observable g_observable(int id) {
  Hess h = hessian_halves(id);
  auto grad = [h](const TwoModePoint& p) {
    const double x[4] = {p.q1, p.q2, p.p1, p.p2};
    double s[4];
    for (int r = 0; r < 4; ++r) {
      s[r] = 0;
      for (int c = 0; c < 4; ++c) s[r] += 0.5 * h[r][c] * x[c];
    }
    return Gradient{s[Q1], s[P1], s[Q2], s[P2]};
  };
  auto val = [grad](const TwoModePoint& p) {
    Gradient g = grad(p);
    return 0.5 * (g[0] * p.q1 + g[1] * p.p1 + g[2] * p.q2 + g[3] * p.p2);
  };
  return {"g" + std::to_string(id), val, grad};
}

double g_polar(int id, const PolarPoint& x) {
  double r = std::sqrt(x.I1 * x.I2), d = x.phi1 - x.phi2, s = x.phi1 + x.phi2;
  switch (id) {
    case 0: return 0.5 * (x.I1 + x.I2);
    case 1: return r * std::cos(d);
    case 2: return r * std::sin(d);
    case 3: return 0.5 * (x.I1 - x.I2);
    case 4: return r * std::cos(s);
    case 5: return -r * std::sin(s);
    case 6: return 0.5 * (x.I1 * std::sin(2 * x.phi1) + x.I2 * std::sin(2 * x.phi2));
    case 7: return 0.5 * (-x.I1 * std::sin(2 * x.phi1) + x.I2 * std::sin(2 * x.phi2));
    case 8: return 0.5 * (x.I1 * std::cos(2 * x.phi1) - x.I2 * std::cos(2 * x.phi2));
    case 9: return 0.5 * (x.I1 * std::cos(2 * x.phi1) + x.I2 * std::cos(2 * x.phi2));
    default: throw DomainError("g_polar: id must be 0..9");
  }
}

Observable stokes_parameter(int j) {
  if (j < 0 || j > 3) throw DomainError("stokes_parameter: j must be 0..3");
  Observable g = g_observable(j);
  return {"s" + std::to_string(j), [g](const TwoModePoint& x) { return 2 * g.value(x); },
          [g](const TwoModePoint& x) {
            Gradient d = g.gradient(x);
            for (auto& v : d) v *= 2;
            return d;
          }};
}

Gradient fd_gradient(const Observable& f, const TwoModePoint& x, double h) {
  Gradient d{};
  for (int i = 0; i < 4; ++i) {
    TwoModePoint a = x, b = x;
    double* pa[4] = {&a.q1, &a.p1, &a.q2, &a.p2};
    double* pb[4] = {&b.q1, &b.p1, &b.q2, &b.p2};
    *pa[i] += h;
    *pb[i] -= h;
    d[i] = (f.value(a) - f.value(b)) / (2 * h);
  }
  return d;
}

Intensities intensities(cplx A1, cplx A2) {
  Intensities r;
  r.w3 = std::norm(A1 + A2);
  r.w4 = std::norm(A1 - A2);
  r.w5 = std::norm(A1 + I * A2);
  r.w6 = std::norm(A1 - I * A2);
  r.h1 = (r.w3 - r.w4) / 4;
  r.h2 = (r.w5 - r.w6) / 4;
  r.h0 = std::hypot(r.w4 - r.w3, r.w6 - r.w5) / 4;
  return r;
}

Intensities intensities(const TwoModePoint& x) { return intensities(x.A1(), x.A2()); }

Intensities tilde_intensities(cplx A1, cplx A2) {
  // w5~ = |A1 - i conj(A2)|^2 and w6~ = |A1 + i conj(A2)|^2, so that w5~ - w6~ = -4 g5
  Intensities r = intensities(A1, std::conj(A2));
  std::swap(r.w5, r.w6);
  r.h2 = -r.h2;
  return r;
}

PlaneValue h_function(int j, double phi, double I) {
  switch (j) {
    case 0: return {I, 0.0, 1.0};
    case 1: return {I * std::cos(phi), -I * std::sin(phi), std::cos(phi)};
    case 2: return {-I * std::sin(phi), -I * std::cos(phi), -std::sin(phi)};
    default: throw DomainError("h_function: j must be 0..2");
  }
}

namespace {
double bracket(const Gradient& f, const Gradient& g) { return f[0] * g[1] - f[1] * g[0] + f[2] * g[3] - f[3] * g[2]; }
}  // namespace

double poisson_bracket(const Observable& f, const Observable& g, const TwoModePoint& x) {
  return bracket(f.gradient(x), g.gradient(x));
}

double poisson_bracket_fd(const Observable& f, const Observable& g, const TwoModePoint& x, double h) {
  return bracket(fd_gradient(f, x, h), fd_gradient(g, x, h));
}

double dirac_bracket(const Observable& f, const Observable& g, const Observable& phi, const Observable& chi,
                     const TwoModePoint& x, double degenerate_tol) {
  double delta = poisson_bracket(phi, chi, x);
  if (!(std::abs(delta) > degenerate_tol)) throw DomainError("dirac_bracket: {phi, chi} vanishes, constraints degenerate");
  return poisson_bracket(f, g, x) + poisson_bracket(f, phi, x) * poisson_bracket(chi, g, x) / delta -
         poisson_bracket(f, chi, x) * poisson_bracket(phi, g, x) / delta;
}

Observable constraint_phi3(double eps_tilde) {
  Observable g3 = g_observable(3);
  return {"phi3", [g3, eps_tilde](const TwoModePoint& x) { return g3.value(x) - eps_tilde; }, g3.gradient};
}

Observable constraint_phi0(double eps) {
  Observable g0 = g_observable(0);
  return {"phi0", [g0, eps](const TwoModePoint& x) { return g0.value(x) - eps; }, g0.gradient};
}

Observable constraint_chi2() {
  return {"chi2", [](const TwoModePoint& x) { return std::atan2(x.p2, x.q2); },
          [](const TwoModePoint& x) {
            double r2 = x.q2 * x.q2 + x.p2 * x.p2;
            if (r2 == 0) throw DomainError("chi2: undefined at (q2, p2) = (0, 0)");
            return Gradient{0, 0, -x.p2 / r2, x.q2 / r2};
          }};
}

HopfImage hopf_projection(cplx a1, cplx a2, double norm_tol) {
  double n = std::norm(a1) + std::norm(a2);
  if (!(std::abs(n - 1) <= norm_tol)) throw DomainError("hopf_projection: |a1|^2 + |a2|^2 != 1");
  if (a1 == 0.0) throw DomainError("hopf_projection: a1 = 0 lies outside the z chart");
  return {2.0 * std::conj(a1) * a2, std::norm(a2) - std::norm(a1), std::conj(a1) * a2 / std::norm(a1)};
}

// ---- exact 4x4 matrices ----

RatMat4 RatMat4::unit(int row, int col) {
  RatMat4 m;
  m(row - 1, col - 1) = 1;
  return m;
}

RatMat4 RatMat4::transpose() const {
  RatMat4 t;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) t(r, c) = e[c][r];
  return t;
}

bool RatMat4::is_zero() const {
  for (auto& row : e)
    for (auto& v : row)
      if (v != Rational(0)) return false;
  return true;
}

Eigen::Matrix4d RatMat4::to_double() const {
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = boost::rational_cast<double>(e[r][c]);
  return m;
}

RatMat4 operator+(const RatMat4& a, const RatMat4& b) {
  RatMat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}
RatMat4 operator-(const RatMat4& a) { return Rational(-1) * a; }
RatMat4 operator-(const RatMat4& a, const RatMat4& b) { return a + (-b); }
RatMat4 operator*(Rational s, const RatMat4& a) {
  RatMat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = s * a(i, j);
  return r;
}
RatMat4 operator*(const RatMat4& a, const RatMat4& b) {
  RatMat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) r(i, j) += a(i, k) * b(k, j);
  return r;
}
bool operator==(const RatMat4& a, const RatMat4& b) { return a.e == b.e; }

RatMat4 g_hamiltonian_matrix(int id) { return omega() * hessian(id); }

RatMat4 Sp4Algebra::m(int j, int k) const {
  if (j < 1 || j > 5 || k < 1 || k > 5) throw DomainError("Sp4Algebra::m: indices must be 1..5");
  if (j == k) return RatMat4{};
  if (j > k) return -m(k, j);
  // (j, k) with j < k; table entries m_12 = g3, m_23 = g1, m_31 = g2, m_41 = g7, m_42 = g9,
  // m_43 = -g5, m_51 = g8, m_52 = g6, m_53 = -g4, m_54 = g0
  switch (10 * j + k) {
    case 12: return g[3];
    case 23: return g[1];
    case 13: return -g[2];
    case 14: return -g[7];
    case 24: return -g[9];
    case 34: return g[5];
    case 15: return -g[8];
    case 25: return -g[6];
    case 35: return g[4];
    default: return -g[0];  // 45
  }
}

std::vector<Sp4Generator> Sp4Algebra::generators() const {
  std::vector<Sp4Generator> out;
  for (int j = 0; j < 4; ++j) out.push_back({"u" + std::to_string(j), u[j]});
  for (int j = 0; j < 2; ++j) out.push_back({"a" + std::to_string(j + 1), a[j]});
  for (int j = 0; j < 4; ++j) out.push_back({"n" + std::to_string(j + 1), n[j]});
  for (int j = 0; j < 10; ++j) out.push_back({"g" + std::to_string(j), g[j]});
  return out;
}

Sp4Algebra sp4_algebra() {
  Sp4Algebra A;
  A.Omega = omega();
  Rational h(1, 2);
  A.u[0] = from_rows({{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}}, h);
  A.u[1] = from_rows({{0, 0, 0, 1}, {0, 0, 1, 0}, {0, -1, 0, 0}, {-1, 0, 0, 0}}, h);
  A.u[2] = from_rows({{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}}, h);
  A.u[3] = from_rows({{0, 0, 1, 0}, {0, 0, 0, -1}, {-1, 0, 0, 0}, {0, 1, 0, 0}}, h);
  A.a[0] = from_rows({{1, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 0}}, h);
  A.a[1] = from_rows({{0, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, -1}}, h);
  auto E = RatMat4::unit;
  A.n[0] = E(1, 3);
  A.n[1] = E(2, 4);
  A.n[2] = E(1, 4) + E(2, 3);
  A.n[3] = E(1, 2) - E(4, 3);
  for (int j = 0; j < 10; ++j) A.g[j] = g_hamiltonian_matrix(j);
  A.roots = {{2, 0, E(1, 3)},          {0, 2, E(2, 4)},           {1, 1, E(1, 4) + E(2, 3)},
             {1, -1, E(1, 2) - E(4, 3)}, {-2, 0, E(3, 1)},         {0, -2, E(4, 2)},
             {-1, -1, E(3, 2) + E(4, 1)}, {-1, 1, E(2, 1) - E(3, 4)}};
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      auto x = solve_in_basis(A.g, commutator(A.g[i], A.g[j]));
      if (!x) throw DomainError("sp4_algebra: commutator leaves the algebra");
      A.c[i][j] = *x;
    }
  return A;
}

std::array<Rational, 10> sp4_decompose(const Sp4Algebra& alg, const RatMat4& X) {
  std::array<RatMat4, 10> B = {alg.u[0], alg.u[1], alg.u[2], alg.u[3], alg.a[0],
                               alg.a[1], alg.n[0], alg.n[1], alg.n[2], alg.n[3]};
  auto x = solve_in_basis(B, X);
  if (!x) throw DomainError("sp4_decompose: matrix is not in sp(4,R)");
  return *x;
}

Sp4Report sp4_verify(const Sp4Algebra& A) {
  Sp4Report r;
  const RatMat4& O = A.Omega;
  auto symp = [&](const RatMat4& X) { return (X.transpose() * O + O * X).is_zero(); };
  r.symplectic = true;
  for (auto& gen : A.generators()) r.symplectic = r.symplectic && symp(gen.matrix);

  r.su2 = true;
  for (auto [j, k, l] : kEps) {
    bool even = (j == 1 && k == 2) || (j == 2 && k == 3) || (j == 3 && k == 1);
    RatMat4 rhs = even ? A.u[l] : -A.u[l];
    r.su2 = r.su2 && commutator(A.u[j], A.u[k]) == rhs;
  }

  const auto& n = A.n;
  r.nilpotent = commutator(n[0], n[1]).is_zero() && commutator(n[0], n[2]).is_zero() &&
                commutator(n[0], n[3]).is_zero() && commutator(n[1], n[2]).is_zero() &&
                commutator(n[1], n[3]) == -n[2] && commutator(n[2], n[3]) == Rational(-2) * n[0];

  std::vector<std::pair<int, int>> expected = {{2, 0}, {0, 2}, {1, 1}, {1, -1}, {-2, 0}, {0, -2}, {-1, -1}, {-1, 1}};
  std::vector<std::pair<int, int>> found;
  r.roots = A.roots.size() == 8;
  for (auto& rt : A.roots) {
    bool eig = !rt.vector.is_zero() && commutator(A.a[0], rt.vector) == Rational(rt.c1, 2) * rt.vector &&
               commutator(A.a[1], rt.vector) == Rational(rt.c2, 2) * rt.vector && symp(rt.vector);
    r.roots = r.roots && eig;
    found.emplace_back(rt.c1, rt.c2);
  }
  std::sort(found.begin(), found.end());
  std::sort(expected.begin(), expected.end());
  r.roots = r.roots && found == expected;

  const int eta[6] = {0, -1, -1, -1, 1, 1};
  auto et = [&](int a, int b) { return Rational(a == b ? eta[a] : 0); };
  r.so23 = true;
  for (int j = 1; j <= 5; ++j)
    for (int k = 1; k <= 5; ++k)
      for (int l = 1; l <= 5; ++l)
        for (int m = 1; m <= 5; ++m) {
          RatMat4 rhs = et(k, l) * A.m(j, m) + et(j, m) * A.m(k, l) - et(j, l) * A.m(k, m) - et(k, m) * A.m(j, l);
          r.so23 = r.so23 && commutator(A.m(j, k), A.m(l, m)) == rhs;
        }

  // {x^T S_i x / 2, x^T S_j x / 2} = x^T (S_i Omega S_j) x, symmetric part S_i Omega S_j - S_j Omega S_i
  r.poisson_homomorphism = true;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      RatMat4 lhs = hessian(i) * O * hessian(j) - hessian(j) * O * hessian(i);
      RatMat4 rhs;
      for (int l = 0; l < 10; ++l) rhs = rhs + A.c[i][j][l] * hessian(l);
      r.poisson_homomorphism = r.poisson_homomorphism && lhs == rhs;
    }

  const auto& u = A.u;
  const auto& a = A.a;
  std::array<RatMat4, 10> printed = {u[0],        u[1],        u[2],        u[3],               n[2] - u[1],
                                     n[3] - u[2], a[0] + a[1], n[0] + n[1] - u[0], n[0] - n[1] - u[3], a[1] - a[0]};
  for (int j = 0; j < 10; ++j) {
    r.ghat_printed[j] = printed[j] == A.g[j];
    r.ghat_derived[j] = sp4_decompose(A, A.g[j]);
  }
  return r;
}

double bracket_closure_residual(const Sp4Algebra& A, const std::vector<TwoModePoint>& pts, bool fd, Exec exec) {
  std::array<Observable, 10> g;
  std::array<std::array<std::array<double, 10>, 10>, 10> c;
  for (int i = 0; i < 10; ++i) g[i] = g_observable(i);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int l = 0; l < 10; ++l) c[i][j][l] = boost::rational_cast<double>(A.c[i][j][l]);
  const long np = long(pts.size());
  double worst = 0.0;
  auto point_residual = [&](const TwoModePoint& x) {
    std::array<Gradient, 10> grad;
    std::array<double, 10> val;
    for (int i = 0; i < 10; ++i) {
      grad[i] = fd ? fd_gradient(g[i], x) : g[i].gradient(x);
      val[i] = g[i].value(x);
    }
    double w = 0.0;
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) {
        double rhs = 0.0;
        for (int l = 0; l < 10; ++l) rhs += c[i][j][l] * val[l];
        w = std::max(w, std::abs(bracket(grad[i], grad[j]) - rhs));
      }
    return w;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for reduction(max : worst)
    for (long p = 0; p < np; ++p) worst = std::max(worst, point_residual(pts[p]));
  } else {
    for (long p = 0; p < np; ++p) worst = std::max(worst, point_residual(pts[p]));
  }
  return worst;
}

// ---- two-mode quantum realization ----

TwoModeOps two_mode_quantum(int N) {
  if (N < 4) throw ConfigError("two_mode_quantum: cutoff per mode must be >= 4");
  Ladders L = ladders(N);
  TwoModeOps t;
  t.n_per_mode = N;
  t.dim = N * N;
  t.Kplus = L.a1d * L.a2d;
  t.Kminus = L.a1 * L.a2;
  t.K0 = 0.5 * (L.N1 + L.N2 + L.id);
  t.K1 = 0.5 * (t.Kplus + t.Kminus);
  t.K2 = (t.Kplus - t.Kminus) / (2.0 * I);
  t.J1 = 0.5 * (L.a1 * L.a2d + L.a2 * L.a1d);
  t.J2 = 0.5 * I * (L.a1 * L.a2d - L.a2 * L.a1d);
  t.J3 = 0.5 * (L.N1 - L.N2);
  t.N1 = L.N1;
  t.N2 = L.N2;
  // K+ K- = N1 N2 is exact on the truncated space
  t.casimir = t.Kplus * t.Kminus + t.K0 * (L.id - t.K0);
  for (int d = -(N - 1); d <= N - 1; ++d) {
    double k = 0.5 + 0.5 * std::abs(d);
    t.sector_table.push_back({d, k, k * (1 - k), N - std::abs(d)});
  }
  return t;
}

void TwoModeState::validate(double tol) const {
  if (n_per_mode < 1 || coeffs.size() != n_per_mode * n_per_mode)
    throw ConfigError("TwoModeState: coefficient tensor does not match n_per_mode");
  if (std::abs(coeffs.squaredNorm() - 1) > tol) throw DomainError("TwoModeState: state is not normalized");
}

TwoModeState TwoModeState::basis(int N, int n1, int n2) {
  if (n1 < 0 || n2 < 0 || n1 >= N || n2 >= N) throw ConfigError("TwoModeState::basis: level outside truncation");
  TwoModeState s{N, Vec::Zero(N * N)};
  s.coeffs(n1 * N + n2) = 1;
  return s;
}

TwoModeState TwoModeState::from_sector(int d, const StateVector& amp, int N) {
  double k = 0.5 + 0.5 * std::abs(d);
  if (std::abs(amp.k - k) > 1e-12) throw ConfigError("TwoModeState::from_sector: amplitudes carry the wrong k");
  int m = amp.cutoff();
  if (N <= 0) N = m + std::abs(d) + 2;
  if (m + std::abs(d) > N) throw ConfigError("TwoModeState::from_sector: truncation too small");
  TwoModeState s{N, Vec::Zero(N * N)};
  for (int n = 0; n < m; ++n) {
    int n1 = d >= 0 ? n + d : n, n2 = d >= 0 ? n : n - d;
    s.coeffs(n1 * N + n2) = amp.coeffs(n);
  }
  s.coeffs.normalize();
  return s;
}

ChannelOps homodyne_channels(int N) {
  if (N < 2) throw ConfigError("homodyne_channels: cutoff per mode must be >= 2");
  Ladders L = ladders(N);
  Mat Kp = L.a1d * L.a2d, Km = L.a1 * L.a2, S = L.N1 + L.N2;
  ChannelOps c;
  // normal ordering drops the common vacuum term 1 of all four phase-conjugate channels
  c.N3 = S + Kp + Km;
  c.N4 = S - Kp - Km;
  c.N5 = S - I * Kp + I * Km;
  c.N6 = S + I * Kp - I * Km;
  auto number = [](const Mat& b) { Mat bb = b.adjoint() * b; return bb; };
  c.M3 = number(L.a1 + L.a2);
  c.M4 = number(L.a1 - L.a2);
  c.M5 = number(L.a1 + I * L.a2);
  c.M6 = number(L.a1 - I * L.a2);
  return c;
}

namespace {

struct MomentSet {
  double K1, K2, K1sq, K2sq, K0sq, J1, J2;
};

// ladder actions on a coefficient tensor with N levels per mode (zero beyond the truncation)
Vec apply_pair(const Vec& v, int N, int s1, int s2) {
  Vec r = Vec::Zero(N * N);
  for (int n1 = 0; n1 < N; ++n1)
    for (int n2 = 0; n2 < N; ++n2) {
      int m1 = n1 - s1, m2 = n2 - s2;  // source levels
      if (m1 < 0 || m2 < 0 || m1 >= N || m2 >= N) continue;
      double f1 = s1 > 0 ? std::sqrt(double(n1)) : s1 < 0 ? std::sqrt(double(m1)) : 1.0;
      double f2 = s2 > 0 ? std::sqrt(double(n2)) : s2 < 0 ? std::sqrt(double(m2)) : 1.0;
      r(n1 * N + n2) = f1 * f2 * v(m1 * N + m2);
    }
  return r;
}

// N3 - N4 = 2 (K+ + K-), N5 - N6 = -2i (K+ - K-), M3 - M4 = 4 J1, M6 - M5 = 4 J2
MomentSet moments(const Vec& v, int N) {
  MomentSet m;
  Vec kp = apply_pair(v, N, 1, 1), km = apply_pair(v, N, -1, -1);
  Vec x = 2.0 * (kp + km), y = -2.0 * I * (kp - km);
  m.K1 = std::real(v.dot(x)) / 4;
  m.K2 = std::real(v.dot(y)) / 4;
  m.K1sq = x.squaredNorm() / 16;
  m.K2sq = y.squaredNorm() / 16;
  m.K0sq = 0.0;
  for (int n1 = 0; n1 < N; ++n1)
    for (int n2 = 0; n2 < N; ++n2) {
      double k0 = 0.5 * (n1 + n2 + 1);
      m.K0sq += std::norm(v(n1 * N + n2)) * k0 * k0;
    }
  Vec up2 = apply_pair(v, N, -1, 1), up1 = apply_pair(v, N, 1, -1);  // a1 a2^+ v, a2 a1^+ v
  m.J1 = std::real(v.dot(2.0 * (up2 + up1))) / 4;
  m.J2 = std::real(v.dot(2.0 * I * (up2 - up1))) / 4;
  return m;
}

}  // namespace

HomodyneEstimates homodyne_estimators(const TwoModeState& state) {
  state.validate(1e-8);
  // two extra levels make the quadratic estimators exact for every state of the truncation
  int N = state.n_per_mode + 2;
  Vec v = embed(state, N);
  MomentSet m = moments(v, N);
  HomodyneEstimates h;
  h.K1_est = m.K1;
  h.K2_est = m.K2;
  h.K1sq_est = m.K1sq;
  h.K2sq_est = m.K2sq;
  h.K0sq = m.K0sq;
  h.pythagoras_deficit = m.K0sq - m.K1sq - m.K2sq;
  h.J1_est = m.J1;
  h.J2_est = m.J2;
  for (int d = -(state.n_per_mode - 1); d <= state.n_per_mode - 1; ++d) {
    Vec s = Vec::Zero(N * N);
    for (int n1 = 0; n1 < state.n_per_mode; ++n1) {
      int n2 = n1 - d;
      if (n2 >= 0 && n2 < state.n_per_mode) s(n1 * N + n2) = v(n1 * N + n2);
    }
    double w = s.squaredNorm();
    if (w < 1e-24) continue;
    s /= std::sqrt(w);
    MomentSet ms = moments(s, N);
    h.sectors.push_back({d, 0.5 + 0.5 * std::abs(d), w, ms.K0sq - ms.K1sq - ms.K2sq});
  }
  return h;
}

ProjectionReport constraint_projection(ConstraintKind kind, double parameter, const TwoModeState& state) {
  state.validate(1e-8);
  const int N = state.n_per_mode;
  ProjectionReport r;
  r.state = TwoModeState{N, Vec::Zero(N * N)};
  for (int n1 = 0; n1 < N; ++n1)
    for (int n2 = 0; n2 < N; ++n2) {
      double ev = kind == ConstraintKind::phi0 ? 0.5 * (n1 + n2 + 1) : 0.5 * (n1 - n2);
      if (std::abs(ev - parameter) > 1e-12) continue;
      ++r.eigenspace_dim;
      r.state.coeffs(n1 * N + n2) = state(n1, n2);
    }
  r.weight = r.state.coeffs.squaredNorm();
  r.zero = r.weight < 1e-28;
  if (!r.zero) r.state.coeffs /= std::sqrt(r.weight);
  if (r.eigenspace_dim > 0) {
    if (kind == ConstraintKind::phi0)
      r.su2_j = parameter - 0.5;  // (n1 + n2)/2
    else
      r.su11_k = std::abs(parameter) + 0.5;
  }
  return r;
}

RepClass rep_classification(double e0, double j0) {
  RepClass r;
  if (!(e0 > 0) || !std::isfinite(e0)) {
    r.reason = "epsilon0 must be positive";
    return r;
  }
  if (!(j0 >= 0) || std::abs(2 * j0 - std::round(2 * j0)) > 1e-12) {
    r.reason = "j0 must be a non-negative half-integer";
    return r;
  }
  r.l2 = -(e0 * (e0 - 3) + j0 * (j0 + 1));
  r.l4 = -j0 * (j0 + 1) * (e0 - 1) * (e0 - 2);
  if (!(j0 < e0)) {
    r.reason = "j0 >= epsilon0 violates positivity of K0 in both Sp(2,R) factors";
    return r;
  }
  r.valid = true;
  int twoj = int(std::lround(2 * j0));
  for (int i = 0; i <= twoj; ++i) {
    double m0 = j0 - i;
    r.sp2_indices.emplace_back(0.5 * (e0 + m0), 0.5 * (e0 - m0));
  }
  return r;
}

Sp4Quantum sp4_two_mode(int N) {
  if (N < 4) throw ConfigError("sp4_two_mode: cutoff per mode must be >= 4");
  Ladders L = ladders(N);
  Sp4Quantum s;
  s.n_per_mode = N;
  auto& G = s.G;
  // Weyl ordering: q p -> (q p + p q)/2 = (i/2)(a^+2 - a^2), q^2 - p^2 -> a^2 + a^+2
  auto qp = [](const Mat& a, const Mat& ad) -> Mat { return 0.5 * I * (ad * ad - a * a); };
  auto q2p2 = [](const Mat& a, const Mat& ad) -> Mat { return a * a + ad * ad; };
  G[0] = 0.5 * (L.N1 + L.N2 + L.id);
  G[1] = 0.5 * (L.a1 * L.a2d + L.a2 * L.a1d);
  G[2] = 0.5 * I * (L.a1 * L.a2d - L.a2 * L.a1d);
  G[3] = 0.5 * (L.N1 - L.N2);
  G[4] = 0.5 * (L.a1d * L.a2d + L.a1 * L.a2);
  G[5] = 0.5 * I * (L.a1d * L.a2d - L.a1 * L.a2);
  G[6] = -0.5 * (qp(L.a1, L.a1d) + qp(L.a2, L.a2d));
  G[7] = 0.5 * (qp(L.a1, L.a1d) - qp(L.a2, L.a2d));
  G[8] = 0.25 * (q2p2(L.a1, L.a1d) - q2p2(L.a2, L.a2d));
  G[9] = 0.25 * (q2p2(L.a1, L.a1d) + q2p2(L.a2, L.a2d));

  // m^{ab} with the table m_12 = g3, ..., m_54 = g0 and raised indices
  const int eta[6] = {0, -1, -1, -1, 1, 1};
  Sp4Algebra alg = sp4_algebra();
  std::array<std::array<Mat, 6>, 6> low, up;
  const int D = N * N;
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b) {
      low[a][b] = Mat::Zero(D, D);
      RatMat4 target = alg.m(a, b);
      for (int j = 0; j < 10; ++j) {
        if (target.is_zero()) break;
        if (target == alg.g[j]) low[a][b] = G[j];
        else if (target == -alg.g[j]) low[a][b] = -G[j];
      }
      up[a][b] = double(eta[a] * eta[b]) * low[a][b];
    }
  s.C2 = Mat::Zero(D, D);
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b) s.C2 -= 0.5 * low[a][b] * up[a][b];

  // W_a = (1/8) eps_{a b c d e} m^{bc} m^{de}
  s.C4 = Mat::Zero(D, D);
  for (int a = 1; a <= 5; ++a) {
    std::array<int, 4> rest;
    int r = 0;
    for (int b = 1; b <= 5; ++b)
      if (b != a) rest[r++] = b;
    Mat W = Mat::Zero(D, D);
    std::sort(rest.begin(), rest.end());
    do {
      int perm[5] = {a, rest[0], rest[1], rest[2], rest[3]};
      int sign = 1;
      for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
          if (perm[i] > perm[j]) sign = -sign;
      W += double(sign) * up[rest[0]][rest[1]] * up[rest[2]][rest[3]];
    } while (std::next_permutation(rest.begin(), rest.end()));
    W /= 8.0;
    s.C4 += double(eta[a]) * W * W;
  }
  return s;
}

}  // namespace so12
