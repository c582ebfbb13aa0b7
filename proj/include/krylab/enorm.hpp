#pragma once

#include "krylab/krylov.hpp"
#include "krylab/operator.hpp"

namespace krylab {

struct ENormValue {
  double value = 0.0;
  // ||A|| times the total weight 2^{-(k+l)} lying outside the N x N window;
  // bounds what an infinite-dimensional extension could add.
  double truncation_bound = 0.0;
};

/// Weight 2^{-(k+l)} for 1-based indices, exact in binary floating point.
double enorm_weight(int k, int l);

/// Total weight outside the leading N x N block: 1 - (1 - 2^{-N})^2.
double enorm_tail_weight(Eigen::Index n);

/// sum_{k,l} 2^{-(k+l)} |A(k,l)|, accumulated by increasing k+l then
/// increasing k so the result is bit-stable.
ENormValue enorm(const Operator& a);

/// enorm value without the truncation bound (skips the SVD).
double enorm_value(const Operator& a);

struct CompressionDefect {
  double value = 0.0;        // brute-force ||E_k H E_k - H E_k||_e
  double closed_form = 0.0;  // 2^{-(2k+1)} |h_{k+1,k}|
  bool degenerate = false;   // k == N, where E_N = I
};

/// Brute-force ||E_k H E_k - H E_k||_e, checked against the Hessenberg
/// closed form 2^{-(2k+1)} |h_{k+1,k}| (NumericFailure if they differ by more
/// than 1e-13). k == N yields an exact zero flagged degenerate.
CompressionDefect compression_defect(const KrylovForm& form, int k);

}  // namespace krylab
