#pragma once
#include <complex>
#include <cstddef>

#include "so12/errors.hpp"

namespace so12 {

using cplx = std::complex<double>;

template <class T>
struct EvalResult {
  T value{};
  double abs_error_estimate = 0.0;
  std::size_t terms_used = 1;
};

inline constexpr double kBesselSwitch = 30.0;

double pochhammer(double a, unsigned n);
double log_pochhammer(double a, unsigned n);

EvalResult<double> bessel_i(double nu, double x);
EvalResult<double> bessel_k(double nu, double x);
EvalResult<double> bessel_i_series(double nu, double x);
EvalResult<double> bessel_i_asymptotic(double nu, double x);
EvalResult<double> bessel_k_asymptotic(double nu, double x);

// 0F1(;2k;w) = sum w^n / ((2k)_n n!)
EvalResult<cplx> g_k(double k, cplx w);
EvalResult<double> g_k(double k, double w);
// principal log of g_k, safe for large |w|
EvalResult<cplx> log_g_k(double k, cplx w);

// I_{2k}(2x)/I_{2k-1}(2x)
double rho_k(double k, double x);
double rho_k_asymptotic(double k, double x, int order = 2);

EvalResult<cplx> confluent_1f1(cplx a, double c, cplx z);

EvalResult<cplx> lerch_phi(cplx z, double s, double a);
EvalResult<cplx> polylog(double s, cplx z);

struct ErfPair {
  cplx erf;
  cplx erfc;
};
ErfPair erf_family(cplx w);

enum class PolyKind { hermite, laguerre, laguerre_assoc, gegenbauer };
double orthopoly(PolyKind kind, unsigned n, double parameter, double x);

double stirling_psi(int n, double y);
double barnes_coefficient(double a, double s, int n);
// sum_n x^n / (n! (n+a)^s), asymptotic branch, x >= 10
EvalResult<double> barnes_expansion(double a, double s, double x, int order);
EvalResult<double> barnes_series(double a, double s, double x, std::size_t max_terms = 10000);

}  // namespace so12
