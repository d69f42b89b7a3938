#pragma once
#include <array>
#include <boost/rational.hpp>
#include <functional>
#include <string>
#include <vector>

#include "so12/coherent.hpp"
#include "so12/exec.hpp"

namespace so12 {

// phase space point; A_j = (q_j + i p_j)/sqrt 2 = |A_j| e^{-i phi_j}, I_j = |A_j|^2
struct TwoModePoint {
  double q1 = 0, p1 = 0, q2 = 0, p2 = 0;
  static TwoModePoint from_amplitudes(cplx A1, cplx A2);
  cplx A1() const;
  cplx A2() const;
};

struct PolarPoint {
  double I1, phi1, I2, phi2;
};
// DomainError if (q_j, p_j) = (0, 0) for either mode
PolarPoint to_polar(const TwoModePoint& x);
TwoModePoint from_polar(const PolarPoint& x);

// partial derivatives in the order d/dq1, d/dp1, d/dq2, d/dp2
using Gradient = std::array<double, 4>;

struct Observable {
  std::string name;
  std::function<double(const TwoModePoint&)> value;
  std::function<Gradient(const TwoModePoint&)> gradient;
};

// g_0 ... g_9 with analytic gradients
Observable g_observable(int id);
// the same functions in the variables (I_j, phi_j)
double g_polar(int id, const PolarPoint& x);
// Stokes parameters s_j = 2 g_j, j = 0..3
Observable stokes_parameter(int j);
Gradient fd_gradient(const Observable& f, const TwoModePoint& x, double h = 1e-5);

struct Intensities {
  double w3, w4, w5, w6;
  double h0, h1, h2;
};
// w3 = |A1 + A2|^2, w4 = |A1 - A2|^2, w5 = |A1 + i A2|^2, w6 = |A1 - i A2|^2;
// h0 = sqrt(I1 I2), h1 = h0 cos(phi1 - phi2), h2 = -h0 sin(phi1 - phi2), all recovered from the w's
Intensities intensities(cplx A1, cplx A2);
Intensities intensities(const TwoModePoint& x);
// w3 = |A1 + conj A2|^2, w4 = |A1 - conj A2|^2, w5 = |A1 - i conj A2|^2, w6 = |A1 + i conj A2|^2;
// h1 = g4, h2 = -g5 refer to phi1 + phi2
Intensities tilde_intensities(cplx A1, cplx A2);

// h0 = I, h1 = I cos phi, h2 = -I sin phi on the reduced plane (phi, I), I = sqrt(I1 I2);
// value and gradient (d/dphi, d/dI)
struct PlaneValue {
  double value, d_phi, d_I;
};
PlaneValue h_function(int j, double phi, double I);
// {f, g} = d_phi f d_I g - d_I f d_phi g
inline double plane_bracket(const PlaneValue& f, const PlaneValue& g) { return f.d_phi * g.d_I - f.d_I * g.d_phi; }

double poisson_bracket(const Observable& f, const Observable& g, const TwoModePoint& x);
double poisson_bracket_fd(const Observable& f, const Observable& g, const TwoModePoint& x,
                          double h = 1e-5);
// {f,g}* for the second class pair (phi, chi); DomainError if |{phi,chi}| <= degenerate_tol
double dirac_bracket(const Observable& f, const Observable& g, const Observable& phi,
                     const Observable& chi, const TwoModePoint& x, double degenerate_tol = 1e-12);
// phi3 = g3 - eps_tilde and chi2 = arctan(p2/q2), {phi3, chi2} = -1/2
Observable constraint_phi3(double eps_tilde);
Observable constraint_chi2();
// phi0 = g0 - eps
Observable constraint_phi0(double eps);

struct HopfImage {
  cplx w;
  double t;
  cplx z;  // stereographic coordinate conj(a1) a2 / |a1|^2
};
// DomainError unless |a1|^2 + |a2|^2 = 1 to norm_tol, and at a1 = 0 (z chart)
HopfImage hopf_projection(cplx a1, cplx a2, double norm_tol = 1e-12);

using Rational = boost::rational<long long>;

struct RatMat4 {
  std::array<std::array<Rational, 4>, 4> e{};
  static RatMat4 unit(int row, int col);  // E_{row col}, 1-based
  Rational& operator()(int r, int c) { return e[r][c]; }
  const Rational& operator()(int r, int c) const { return e[r][c]; }
  RatMat4 transpose() const;
  bool is_zero() const;
  Eigen::Matrix4d to_double() const;
};
RatMat4 operator+(const RatMat4& a, const RatMat4& b);
RatMat4 operator-(const RatMat4& a, const RatMat4& b);
RatMat4 operator-(const RatMat4& a);
RatMat4 operator*(const RatMat4& a, const RatMat4& b);
RatMat4 operator*(Rational s, const RatMat4& a);
bool operator==(const RatMat4& a, const RatMat4& b);
inline RatMat4 commutator(const RatMat4& a, const RatMat4& b) { return a * b - b * a; }

struct Sp4Generator {
  std::string name;
  RatMat4 matrix;
};

struct Sp4Root {
  int c1, c2;  // eigenvalue c1 w1 + c2 w2 under 2 w1 a1 + 2 w2 a2
  RatMat4 vector;
};

struct Sp4Algebra {
  RatMat4 Omega;
  std::array<RatMat4, 4> u;  // compact U(2)
  std::array<RatMat4, 2> a;  // abelian, non-compact
  std::array<RatMat4, 4> n;  // nilpotent
  // Hamiltonian matrices Omega * Hess(g_j) of the ten g functions (x = (q1, q2, p1, p2))
  std::array<RatMat4, 10> g;
  std::vector<Sp4Root> roots;
  // [g_i, g_j] = sum_l c[i][j][l] g_l; equals the Poisson structure constants of the g functions
  std::array<std::array<std::array<Rational, 10>, 10>, 10> c;
  // so(2,3) generators m_jk, 1 <= j, k <= 5, from the g_j
  RatMat4 m(int j, int k) const;
  std::vector<Sp4Generator> generators() const;
};

// Hamiltonian matrix Omega * Hess(g_id) in exact arithmetic
RatMat4 g_hamiltonian_matrix(int id);
Sp4Algebra sp4_algebra();

// coefficients of X in the basis (u0..u3, a1, a2, n1..n4); throws DomainError if X is not in sp(4)
std::array<Rational, 10> sp4_decompose(const Sp4Algebra& alg, const RatMat4& X);

struct Sp4Report {
  bool symplectic = false;       // X^T Omega + Omega X = 0 for all basis elements and all g
  bool su2 = false;              // [u_j, u_k] = eps_jkl u_l
  bool nilpotent = false;        // n commutator table
  bool roots = false;            // eight eigenvectors with eigenvalues +-2w1, +-2w2, +-(w1 +- w2)
  bool so23 = false;             // m_jk commutators with metric diag(-1,-1,-1,1,1)
  bool poisson_homomorphism = false;  // matrix structure constants reproduce {g_i, g_j} polynomially
  // printed decompositions g_j = (u, a, n combination) checked one by one
  std::array<bool, 10> ghat_printed{};
  // decomposition of each g_j in (u0..u3, a1, a2, n1..n4)
  std::array<std::array<Rational, 10>, 10> ghat_derived{};
};
Sp4Report sp4_verify(const Sp4Algebra& alg);

// max over points and pairs of |{g_i, g_j} - sum_l c_ijl g_l|
double bracket_closure_residual(const Sp4Algebra& alg, const std::vector<TwoModePoint>& pts,
                                bool finite_difference = false, Exec exec = Exec::parallel);

struct SectorRow {
  int d;          // n1 - n2
  double k;       // 1/2 + |d|/2
  double l;       // k (1 - k)
  int dimension;  // states of the sector inside the truncation
};

struct TwoModeOps {
  int n_per_mode = 0;
  int dim = 0;
  Mat K0, Kplus, Kminus, K1, K2;
  // [J1, J2] = i J3: J1 = (a1 a2^+ + a2 a1^+)/2, J2 = (i/2)(a1 a2^+ - a2 a1^+), J3 = (N1 - N2)/2
  Mat J1, J2, J3, N1, N2;
  Mat casimir;  // L = K+ K- + K0 (1 - K0) = (1 - (N1 - N2)^2)/4
  std::vector<SectorRow> sector_table;
  int index(int n1, int n2) const { return n1 * n_per_mode + n2; }
};
TwoModeOps two_mode_quantum(int cutoff_per_mode);

// tensor coefficients c(n1, n2) at n1 * n_per_mode + n2
struct TwoModeState {
  int n_per_mode = 0;
  Vec coeffs;
  void validate(double tol = 1e-10) const;
  cplx operator()(int n1, int n2) const { return coeffs(n1 * n_per_mode + n2); }
  static TwoModeState basis(int n_per_mode, int n1, int n2);
  // sum_n c_n |n + d, n> (d >= 0) or |n, n - d> (d < 0) from single-mode amplitudes c_n of index k = 1/2 + |d|/2
  static TwoModeState from_sector(int d, const StateVector& amplitudes, int n_per_mode = 0);
};

struct ChannelOps {
  // phase-conjugate channels a1 + a2^+, a1 - a2^+, a1 - i a2^+, a1 + i a2^+ (normal ordered)
  Mat N3, N4, N5, N6;
  // beam-splitter channels (a1 + a2), (a1 - a2), (a1 + i a2), (a1 - i a2) as in w3..w6
  Mat M3, M4, M5, M6;
};
ChannelOps homodyne_channels(int cutoff_per_mode);

struct SectorDeficit {
  int d;
  double k, weight, deficit;
};

struct HomodyneEstimates {
  double K1_est, K2_est, K1sq_est, K2sq_est, K0sq;
  double pythagoras_deficit;  // <K0^2> - <K1^2> - <K2^2> from the estimators
  double J1_est, J2_est;      // from the beam-splitter channels, (M3 - M4)/4 and (M6 - M5)/4
  std::vector<SectorDeficit> sectors;
};
HomodyneEstimates homodyne_estimators(const TwoModeState& state);

enum class ConstraintKind { phi0, phi3 };

struct ProjectionReport {
  TwoModeState state;  // normalized projection, zero vector if nothing survives
  double weight = 0.0;
  bool zero = true;
  int eigenspace_dim = 0;  // inside the truncation
  double su2_j = -1.0;     // phi0: multiplet index j with J^2 = j (j + 1)
  double su11_k = -1.0;    // phi3: sector index k = |eps_tilde| + 1/2
};
// phi0: K0 = parameter; phi3: J3 = parameter
ProjectionReport constraint_projection(ConstraintKind kind, double parameter, const TwoModeState& state);

struct RepClass {
  bool valid = false;
  std::string reason;
  double l2 = 0, l4 = 0;
  std::vector<std::pair<double, double>> sp2_indices;  // (k1, k2) for m0 = j0, ..., -j0
};
RepClass rep_classification(double epsilon0, double j0);

// quantized g_j (Weyl ordered) on the two-mode Fock space with Casimirs
// C2 = -(1/2) m_ab m^ab and C4 = W_a W^a, W_a = (1/8) eps_abcde m^bc m^de
struct Sp4Quantum {
  int n_per_mode = 0;
  std::array<Mat, 10> G;
  Mat C2, C4;
};
Sp4Quantum sp4_two_mode(int cutoff_per_mode);

}  // namespace so12
