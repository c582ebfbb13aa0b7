#pragma once

#include <optional>
#include <vector>

#include "krylab/operator.hpp"

namespace krylab {

inline constexpr double kDefaultBreakdownTol = 1e-12;

/// Orthonormal Krylov basis e_1 = v, e_2, ... of an operator T together with
/// the matrix of T in that basis.
///
/// Q holds the basis vectors as columns (input coordinates) and is unitary.
/// H = Q* T Q is upper Hessenberg with real nonnegative subdiagonal. When the
/// Krylov sequence breaks down at step b (the first b vectors span a
/// T-invariant subspace) the basis is continued from a fresh vector
/// orthogonal to everything so far and subdiag(b) is set to exactly zero;
/// breakdown_index records the first such b.
struct KrylovForm {
  Operator q;
  Operator h;
  std::optional<int> breakdown_index;
  std::vector<double> subdiag;  // subdiag[k-1] = h_{k+1,k}, k = 1 .. N-1

  Eigen::Index dim() const { return h.dim(); }
  /// h_{k+1,k} for 1-based k.
  double subdiagonal(int k) const { return subdiag.at(static_cast<std::size_t>(k - 1)); }
};

/// Modified Gram-Schmidt (one reorthogonalization pass) on v, Tv, T^2 v, ...
/// Breakdown is declared at step n when the new residual has norm at most
/// breakdown_tol * ||T||. Throws DomainError if ||v|| differs from 1 by more
/// than 1e-12 and DimensionError on size mismatch.
KrylovForm orthonormalize(const Operator& t, const Vector& v,
                          double breakdown_tol = kDefaultBreakdownTol);

bool is_cyclic(const Operator& t, const Vector& v, double breakdown_tol = kDefaultBreakdownTol);

/// E_k in basis e: diag(1, ..., 1, 0, ..., 0) with k ones. Requires 1 <= k <= n.
Operator projection(int k, Eigen::Index n);

}  // namespace krylab
