#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "so12/errors.hpp"

namespace so12 {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct RepParams {
  double k = 0.5;
  int cutoff = 64;
  void validate() const;
  // smallest cover on which k is single valued: 1 = SO(1,2), 2 = SU(1,1), 0 = universal cover
  int cover() const;
};

struct OperatorMatrix {
  int dim = 0;
  Mat entries;
  bool hermitian = false;
  // rows/cols 0..interior()-1 are free of truncation artefacts for products of two ladder ops
  int interior() const { return dim > 2 ? dim - 2 : 0; }
};

struct Generators {
  OperatorMatrix K0, Kplus, Kminus, K1, K2;
};

struct CompositeLadder {
  OperatorMatrix a, a_dag, Nop;
};

struct CompositeQP {
  OperatorMatrix Qtilde, Ptilde;
};

struct NumberStateStats {
  double mean_K1, mean_K2, var_K1, var_K2, var_product, K0_bound, cross_corr;
};

struct ContractionRow {
  double k;
  double K3_diag;       // <n1|K0/k|n1>
  double Kplus_elem;    // <n1+1|(2k)^{-1/2} K+|n1>
  double Kminus_elem;   // <n2-1|(2k)^{-1/2} K-|n2>
  double K3_limit, Kplus_limit, Kminus_limit;
};

struct ContractionTable {
  std::vector<ContractionRow> rows;
  bool monotone = false;
};

struct HolsteinPrimakoff {
  OperatorMatrix Kplus, Kminus, K0;
};

Generators build_generators(const RepParams& p);
OperatorMatrix casimir(const RepParams& p);
CompositeLadder composite_ladder(const RepParams& p);
CompositeQP composite_qp(const RepParams& p);
NumberStateStats number_state_stats(double k, int n);
ContractionTable contraction_limit(const std::vector<double>& k_sequence, int n1, int n2);
HolsteinPrimakoff holstein_primakoff(const RepParams& p);

// oscillator ladder matrices on an N-dimensional Fock space
Mat boson_annihilator(int N);

double interior_max(const Mat& m, int trim = 2);
Mat commutator(const Mat& a, const Mat& b);

}  // namespace so12
