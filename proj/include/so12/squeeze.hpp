#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <vector>

#include "so12/coherent.hpp"
#include "so12/exec.hpp"
#include "so12/su11_rep.hpp"

namespace so12 {

using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;

struct SU11Element {
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};
  void validate(double tol = 1e-12) const;  // |alpha|^2 - |beta|^2 = 1
  Mat2c matrix() const;                     // [[alpha, beta], [conj beta, conj alpha]]
  static SU11Element from_matrix(const Mat2c& m);
};

// either U(w) = exp((w/2)K+ - (conj w/2)K-) or the rotation exp(i tau K0)
struct SqueezeParams {
  enum class Kind { boost, rotation };
  Kind kind = Kind::boost;
  cplx w{0.0, 0.0};
  double tau = 0.0;
  static SqueezeParams boost(cplx w) { return {Kind::boost, w, 0.0}; }
  static SqueezeParams rotation(double tau) { return {Kind::rotation, {0.0, 0.0}, tau}; }
  double theta() const { return std::arg(w); }
};

enum class OpId { K0, K1, K2, Kplus, Kminus };

// U(-w) K_i U(w) = sum_j M(i,j) K_j, basis order (K0, K1, K2)
Mat3 adjoint_matrix(const SqueezeParams& s);
Mat3 lorentz_metric();

// U(w) as a dense unitary on the truncated space (Pade scaling and squaring)
Mat unitary(const RepParams& p, const SqueezeParams& s);

// U(-w) Op U(w); throws CutoffExhausted when |w| > 3N/128
OperatorMatrix conjugate_operator(const RepParams& p, const SqueezeParams& s, OpId which);

// rows/cols kept when comparing a conjugated truncation against the 3x3 prediction
int conjugation_block(const RepParams& p, const SqueezeParams& s);

// max deviation between conjugate_operator and the adjoint prediction on the leading block
double conjugation_residual(const RepParams& p, const SqueezeParams& s, OpId which);

std::vector<double> conjugation_sweep(const std::vector<RepParams>& reps,
                                      const std::vector<SqueezeParams>& params, OpId which,
                                      Exec ex = Exec::parallel);

enum class Scheme { iwasawa, polar };

// iwasawa: (theta, t, xi) with g = r0(theta) a0(t) n0(xi)
// polar:   (theta2, t, theta1) with g = r0(theta2) a0(t) r0(theta1), t >= 0
std::array<double, 3> decompose(const SU11Element& g, Scheme scheme);
SU11Element recompose(const std::array<double, 3>& par, Scheme scheme);
Mat2c r0(double theta);
Mat2c a0(double t);
Mat2c n0(double xi);

struct SqueezePM {
  double mean_plus, mean_minus;
  double var_plus, var_minus;
  double product;      // var_plus * var_minus
  double s_corr_abs;   // |<S(A+, A-)>|
  double comm_imag;    // Im <[A+, A-]> = 2 <K2> (or -2 <K1> for the mirror)
};

// K_{1+-} = K1 +- K0 in U(w1)|k,0>
SqueezePM squeeze_pm_expectations(double k, double w1);
// K_{2+-} = K2 +- K0 in U(i w2)|k,0>
SqueezePM squeeze_pm_mirror(double k, double w2);
// same records from truncated matrices
SqueezePM squeeze_pm_numeric(double k, double w, int cutoff, bool mirror = false);

struct UncertaintyReport {
  double var_A = 0, var_B = 0;
  double comm_term = 0;          // |<[A,B]>| / 2
  double s_corr = 0;             // <{A,B}>/2 - <A><B>
  double rs_bound = 0;           // sqrt(comm_term^2 + s_corr^2)
  double heisenberg_bound = 0;   // comm_term
  bool squeezed_A = false, squeezed_B = false;                 // var < rs_bound
  bool heisenberg_squeezed_A = false, heisenberg_squeezed_B = false;
};

UncertaintyReport rs_uncertainty(const OperatorMatrix& A, const OperatorMatrix& B,
                                 const StateVector& psi);

struct AbsoluteBounds {
  double min_rs = 0, min_heisenberg = 0;
  int argmin_rs = -1, argmin_heisenberg = -1;
};

// minima over a supplied state family; the number basis is the default family
AbsoluteBounds absolute_bounds(const OperatorMatrix& A, const OperatorMatrix& B,
                               const std::vector<StateVector>& states);
std::vector<StateVector> number_basis(double k, int dim, int count);

struct SchwarzResult {
  cplx gamma;
  double residual;
};

SchwarzResult schwarz_gamma(const OperatorMatrix& A, const OperatorMatrix& B, const StateVector& psi);

struct CosSinVariants {
  OperatorMatrix E_minus, E_plus, Ctilde, Stilde, Chat, Shat, Ccheck, Scheck;
};

CosSinVariants cos_sin_variants(double k, int cutoff);
double ctilde_coeff(double k, int n);
double chat_coeff(double k, int n);
double ccheck_coeff(double k, int n);

struct OneMode {
  int dim = 0;
  OperatorMatrix Kplus, Kminus, K0, K1, K2, Q, P;
  std::vector<int> even, odd;   // oscillator levels in each sector
};

OneMode one_mode_realization(int cutoff);
Mat sector_block(const Mat& m, const std::vector<int>& idx);
// e^{-i tau K0} X e^{i tau K0}, exact since K0 is diagonal
Mat rotate_by_K0(const OneMode& om, const Mat& X, double tau);

struct TwoMode {
  int n_per_mode = 0;
  int dim = 0;
  OperatorMatrix Kplus, Kminus, K0, K1, K2;
  OperatorMatrix Q1, P1, Q2, P2;
  std::map<int, std::vector<int>> sectors;  // d = n1 - n2 -> indices ordered by min(n1,n2)
  int index(int n1, int n2) const { return n1 * n_per_mode + n2; }
};

TwoMode two_mode_realization(int cutoff_per_mode);
double two_mode_sector_k(int d);
// product coherent state |alpha1> (x) |alpha2>
Vec product_coherent(const TwoMode& tm, cplx alpha1, cplx alpha2);

struct TwoModeSqueeze {
  double var_Qminus, var_Pplus, var_Qplus, var_Pminus;
};

// variances in exp(i w1 K2)|alpha1, alpha2>
TwoModeSqueeze two_mode_squeeze(const TwoMode& tm, cplx alpha1, cplx alpha2, double w1);

}  // namespace so12
