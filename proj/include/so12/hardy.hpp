#pragma once
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "so12/coherent.hpp"
#include "so12/squeeze.hpp"

namespace so12 {

// f(phi) = sum_n a_n e^{i n phi} with (f, g)_k = sum n!/(2k)_n conj(a_n) b_n
struct CircleFunction {
  double k = 0.5;
  std::vector<cplx> coeffs;
  // a_n = sqrt((2k)_n / n!) c_n for amplitudes c_n in the number basis
  static CircleFunction from_basis(const StateVector& s);
  cplx operator()(double phi) const;
  cplx inner(const CircleFunction& g) const;
  double norm_sq() const { return inner(*this).real(); }
};

struct CircleGenerators {
  Mat K0, Kplus, Kminus, K1, K2;
};

// differential operators of the circle realization, expressed in the orthonormal chi_{k,n} basis
CircleGenerators circle_generators(double k, int cutoff);

enum class CoherentFamily { bg, perelomov, sg };
cplx coherent_circle_fn(CoherentFamily family, double k, cplx param, double phi);

enum class Axis { K1, K2 };
// generalized eigenfunctions on the circle, C = 1/sqrt 2; singular at sin phi = 0 (K2) or cos phi = 0 (K1)
cplx k1k2_eigenfunction_circle(Axis which, double k, double h, double phi);
// same function in the coordinate u = ln|tan(psi/2)|, psi = phi (K2) or phi + pi/2 (K1);
// half = 0 selects psi in (0, pi), half = 1 selects psi in (pi, 2 pi). Stable for large |u|.
cplx k1k2_eigenfunction_log(Axis which, double k, double h, double u, int half);
// (f_h, psi) with psi = int G(h') f_{h'} dh', G a normalized Gaussian of width sigma around h0,
// in the plain circle product (the H^2 product at k = 1/2). Equals G(h) for delta-normalized f.
cplx smeared_eigen_overlap(Axis which, double k, double h0, double sigma, double h);
// Fourier coefficients a_n / a_0 of a formal eigen-series; no convergence is claimed
std::vector<cplx> k1k2_eigen_recursion(Axis which, double k, double h, int count);

// orthonormal basis of the Hardy space of the upper half-plane
cplx line_basis(int n, double xi);
cplx line_basis_derivative(int n, double xi);
// differential operator op of the line realization applied to f, given f(xi) and f'(xi)
cplx line_operator(OpId op, double xi, cplx f, cplx df);
CircleGenerators line_generators(int cutoff);

struct CauchyParams {
  double lambda = 1.0;
  double a = 0.0;
  void validate() const;
};

class Cauchy {
 public:
  explicit Cauchy(CauchyParams p);
  const CauchyParams& params() const { return p_; }
  double density(double x) const;
  double distribution(double x) const;
  double quantile(double prob) const;
  cplx characteristic(double t) const;
  Cauchy convolve(const Cauchy& other) const;
  double inflexion_offset() const;

 private:
  CauchyParams p_;
};

// Fourier transform of v_n, zero for p < 0
double line_fourier(int n, double p);
// (2 pi)^{-1/2} int f(xi) e^{-i p xi} dxi over the real line for slowly decaying f, p != 0
cplx fourier_line_quadrature(const std::function<cplx(double)>& f, double p);

// normalized Hermite function and derivative
double hermite_function(int n, double x);
double hermite_function_derivative(int n, double x);
// projection of u_n onto the Hardy space, closed form for n <= 12
cplx hermite_projection(int n, double xi);
// same by quadrature over the half line in momentum space
cplx hermite_projection_quadrature(int n, double xi);

struct TransitionAmplitude {
  cplx quadrature;
  std::optional<cplx> closed_form;
};
// c_{m,n} = (v_m, u_n^{(+)}), m, n <= 8
TransitionAmplitude transition_amplitude(int m, int n);
// int_0^inf e^{-p^2} H_{2m}(p) H_{2n+1}(p) dp in closed form
double hermite_halfline_overlap(int m, int n);

struct UnitaryMapReport {
  Mat Q_line, P_line, Q_osc, P_osc;
  double max_deviation = 0.0;
};
UnitaryMapReport unitary_map_check(int cutoff);

}  // namespace so12
