#pragma once
#include <functional>
#include <vector>

#include "so12/coherent.hpp"
#include "so12/exec.hpp"
#include "so12/su11_rep.hpp"

namespace so12 {

struct DensityOperator {
  double k = 0.5;
  int dim = 0;
  Mat entries;
  double tail = 0.0;  // weight dropped by truncation before renormalising

  static DensityOperator from_matrix(double k, const Mat& m);  // validates
  static DensityOperator pure(const StateVector& v);
};

DensityOperator thermal_state(double k, double a, int cutoff);
// exp(-gamma (K1^2 + K2^2 - K0^2)) / tr on the truncated space; within one irrep the
// exponent is the constant k(1-k), so this is the maximally mixed truncated state
DensityOperator maxent_state(double k, double gamma, int cutoff);

struct RadialQuadrature {
  enum class Scheme { gauss_legendre_mapped };
  Scheme scheme = Scheme::gauss_legendre_mapped;
  int panels = 2;           // starting panel count, doubled until stable
  double upper_cut = 0.0;   // 0: chosen from the integrand tail
  int max_panels = 512;
  double tol = 1e-13;
  double abs_tol = 1e-14;  // for integrals that cancel to zero
};

struct QuadResult {
  cplx value;
  double error;
  int panels;
  double upper_cut;
};

// int_0^cut g(r) dr, nodes r = cut t^2 with 64-point Gauss-Legendre panels in t
QuadResult radial_integrate(const std::function<cplx(double)>& g, const RadialQuadrature& q = {},
                            Exec ex = Exec::parallel);
// (1/2pi) sum over 512 equispaced angles
cplx angular_mean(const std::function<cplx(double)>& h);
constexpr int kAngularNodes = 512;

struct MeasureWeight {
  double m, m_tilde;
};

MeasureWeight bg_measure_weight(double k, double r);
double bg_measure_tilde_asymptotic(double k, double r);

cplx bg_completeness(double k, int n2, int n1, const RadialQuadrature& q = {}, Exec ex = Exec::parallel);
double bg_radial_moment(double k, int n, const RadialQuadrature& q = {});
double perelomov_completeness(double k, int n2, int n1, Exec ex = Exec::parallel);
double sg_completeness(int n2, int n1, Exec ex = Exec::parallel);

// int dmu~_k(lambda) f(lambda) over the disc; k = 1/2 is the boundary-circle limit
QuadResult disc_integrate(double k, const std::function<cplx(cplx)>& f, Exec ex = Exec::parallel);
// int dmu~_k(z) f(z) over the plane, weight m~_k
QuadResult plane_integrate(double k, const std::function<cplx(cplx)>& f, Exec ex = Exec::parallel);

enum class KernelSpace { bg_holo, perelomov_disc, circle_k };

// circle_k reads the arguments as angles phi2 = Re x2, phi1 = Re x1 and needs eps in [0,1)
cplx reproducing_kernel(KernelSpace space, double k, cplx x2, cplx x1, double eps = 0.0);
// int dmu~ Delta(conj x2, x1) conj(x2)^nbar x2^n
cplx kernel_moment(KernelSpace space, double k, int n, int nbar, cplx x1, Exec ex = Exec::parallel);
// (1 - 2 t x + x^2)^{-2k} as a Gegenbauer series
double gegenbauer_kernel(double k, double t, double x, int nmax);

enum class HusimiKind { S, T, Q };

// <n|state> for n < dim
Vec coherent_row(HusimiKind kind, double k, cplx point, int dim);
double husimi(HusimiKind kind, const DensityOperator& rho, cplx point);
// integral of the Husimi function against its own measure (should be tr rho = 1)
QuadResult husimi_normalization(HusimiKind kind, const DensityOperator& rho, Exec ex = Exec::parallel);

struct GridPoint {
  double re, im, value;
};
std::vector<GridPoint> husimi_grid(HusimiKind kind, const DensityOperator& rho, double re0, double re1,
                                   double im0, double im1, int nre, int nim, Exec ex = Exec::parallel);

enum class CharKind { normal, anti, symmetric };

// tr(rho e^{wK+} e^{-conj(w) K-}), tr(rho e^{-conj(w) K-} e^{wK+}), tr(rho e^{wK+ - conj(w) K-});
// requires |w| dim < 50, working space enlarged until stable
cplx char_fn(CharKind kind, const DensityOperator& rho, cplx w);
// int dmu_k(z) H(z) e^{w conj z - conj w z} for a radial H
cplx char_fn_quadrature(double k, const std::function<double(double)>& H_radial, cplx w,
                        Exec ex = Exec::parallel);

// smooth diagonal weight of the thermal state: (1-a) m~_k(|z|/sqrt a) / (a m~_k(|z|))
double thermal_diagonal_weight(double k, double a, double r);

struct DiagonalRepReport {
  double max_deviation = 0;
  double normalization = 0;  // int dmu_k F
  std::vector<double> from_F, target;
};

// S(z) = int dmu_k(z1) F(z1) |<k,z|k,z1>|^2 on the grid versus <k,z|rho|k,z>; the
// F integral is taken in polar coordinates about `center` up to `radius` (0: automatic)
DiagonalRepReport diagonal_rep_forward(double k, const std::function<double(cplx)>& F,
                                       const DensityOperator& rho, const std::vector<cplx>& grid,
                                       cplx center = 0.0, double radius = 0.0,
                                       Exec ex = Exec::parallel);
// Gaussian exp(-|z-z0|^2/sigma^2) normalised against dmu_k
std::function<double(cplx)> gaussian_surrogate(double k, cplx z0, double sigma);

// |<k,z2|k,z1>|^2
double bg_overlap_sq(double k, cplx z2, cplx z1);

}  // namespace so12
