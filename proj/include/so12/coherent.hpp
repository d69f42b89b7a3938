#pragma once
#include <optional>

#include "so12/special_fn.hpp"
#include "so12/su11_rep.hpp"

namespace so12 {

inline constexpr double kTailTol = 1e-8;
inline constexpr int kMaxCutoff = 2048;

struct BGState {
  double k;
  cplx z;
};

// lambda = tanh(|w|/2) e^{i theta}, w = |w| e^{i theta}
struct PerelomovState {
  double k;
  cplx lambda;
  cplx w;
  static PerelomovState from_lambda(double k, cplx lambda);
  static PerelomovState from_w(double k, cplx w);
};

struct SGState {
  double k;
  cplx alpha;
};

struct StateVector {
  double k = 0.5;
  Vec coeffs;
  double tail_norm = 0.0;
  int cutoff() const { return int(coeffs.size()); }
};

// cutoff <= 0 selects the size automatically; an explicit cutoff is grown if the tail is too large
StateVector bg_amplitudes(const BGState& s, int cutoff = 0);
StateVector perelomov_amplitudes(const PerelomovState& s, int cutoff = 0);
StateVector sg_amplitudes(const SGState& s, int cutoff = 0);

struct BGExpectations {
  double K0, K0_sq, var_K0, Nbar, var_N;
  std::optional<double> R, Q;
  double K1, K2, K1_sq, K2_sq, var_K1, var_K2;
  double anticomm;  // <K1 K2 + K2 K1>
  double S_corr;    // <S(K1,K2)>
  double E_inv;     // <(K0+k)^{-1}>
  double E_inv_sqrt;
  cplx a_expect;
};

struct PerelomovExpectations {
  double K0, K0_sq, var_K0, Nbar, var_N, R;
  std::optional<double> Q;
  double K1, K2, K1_sq, K2_sq, var_K1, var_K2, S_corr;
  double sum_sq_identity;  // <K1>^2 + <K2>^2 - <K0>^2 + k^2
  double fluct_identity;   // var_K1 + var_K2 - var_K0 - k
};

struct SGExpectations {
  double K1, K2, K0, K0_sq, var_K0, K1_sq, K2_sq, var_K1, var_K2, S_corr, h1, h2, h;
};

struct SGAsymptotics {
  double h1, h1_sq, h2, diff, h;
};

struct CrossOverlaps {
  cplx C_k, D_k, overlap_az, overlap_al, overlap_lz;
};

BGExpectations bg_expectations(double k, cplx z);
double bg_inv_sqrt_series(double k, double r);
double bg_inv_sqrt_integral(double k, double r);
cplx bg_overlap(double k, cplx z2, cplx z1);
double bg_number_prob(double k, cplx z, int n);

PerelomovExpectations perelomov_expectations(double k, cplx lambda);
double perelomov_number_prob(double k, cplx lambda, int n);
double bose_statistics(double lambda_modulus, int n);

SGExpectations sg_expectations(double k, cplx alpha);
double sg_h1(double k, double r);
double sg_h2(double k, double r);
SGAsymptotics sg_asymptotics(double k, double r, int order = 2);

CrossOverlaps cross_overlaps(double k, cplx alpha, cplx z, cplx lambda);

template <class S>
struct Evolved {
  S state;
  cplx global_phase;
};
Evolved<BGState> time_evolve(const BGState& s, double t);
Evolved<PerelomovState> time_evolve(const PerelomovState& s, double t);
Evolved<SGState> time_evolve(const SGState& s, double t);

// <v|op|v> on the leading block of op
cplx expect(const StateVector& v, const Mat& op);

}  // namespace so12
