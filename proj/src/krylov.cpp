#include "krylab/krylov.hpp"

#include <cmath>
#include <sstream>

#include "krylab/error.hpp"

namespace krylab {

namespace {

// Two passes of modified Gram-Schmidt of w against the first `count` columns
// of basis. Accumulated coefficients are written to coeffs(0 .. count-1).
void orthogonalize(const Matrix& basis, Eigen::Index count, Vector& w, Vector& coeffs) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < count; ++j) {
      const Complex c = basis.col(j).dot(w);  // conjugates the basis vector
      w -= c * basis.col(j);
      coeffs(j) += c;
    }
  }
}

// A unit vector orthogonal to the first `count` columns, taken from the
// standard basis vector with the largest orthogonal residual.
Vector fresh_direction(const Matrix& basis, Eigen::Index count) {
  const Eigen::Index n = basis.rows();
  Vector best;
  double best_norm = -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector w = Vector::Unit(n, i);
    Vector scratch = Vector::Zero(n);
    orthogonalize(basis, count, w, scratch);
    const double nw = w.norm();
    if (nw > best_norm) {
      best_norm = nw;
      best = std::move(w);
    }
  }
  return best / best_norm;
}

}  // namespace

KrylovForm orthonormalize(const Operator& t, const Vector& v, double breakdown_tol) {
  const Eigen::Index n = t.dim();
  if (v.size() != n) throw DimensionError("orthonormalize: start vector length differs from operator dim");
  if (std::abs(v.norm() - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "orthonormalize: start vector must be a unit vector (norm " << v.norm() << ")";
    throw DomainError(msg.str());
  }
  if (!(breakdown_tol > 0.0)) throw DomainError("orthonormalize: breakdown_tol must be positive");

  const double threshold = breakdown_tol * operator_norm(t);
  Matrix q = Matrix::Zero(n, n);
  Matrix h = Matrix::Zero(n, n);
  std::vector<double> subdiag(static_cast<std::size_t>(n - 1), 0.0);
  std::optional<int> breakdown;

  q.col(0) = v;
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector w = t.matrix() * q.col(j);
    Vector coeffs = Vector::Zero(n);
    orthogonalize(q, j + 1, w, coeffs);
    h.col(j).head(j + 1) = coeffs.head(j + 1);
    if (j + 1 == n) break;

    const double residual = w.norm();
    if (residual <= threshold) {
      if (!breakdown) breakdown = static_cast<int>(j + 1);
      q.col(j + 1) = fresh_direction(q, j + 1);
      // subdiag stays exactly zero
    } else {
      q.col(j + 1) = w / residual;
      h(j + 1, j) = residual;
      subdiag[static_cast<std::size_t>(j)] = residual;
    }
  }
  return KrylovForm{Operator(std::move(q)), Operator(std::move(h)), breakdown, std::move(subdiag)};
}

bool is_cyclic(const Operator& t, const Vector& v, double breakdown_tol) {
  return !orthonormalize(t, v, breakdown_tol).breakdown_index.has_value();
}

Operator projection(int k, Eigen::Index n) {
  if (k < 1 || k > n) {
    std::ostringstream msg;
    msg << "projection index " << k << " outside 1.." << n;
    throw DomainError(msg.str());
  }
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < k; ++i) m(i, i) = 1.0;
  return Operator(std::move(m));
}

}  // namespace krylab
