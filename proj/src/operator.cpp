#include "krylab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "krylab/error.hpp"

namespace krylab {

namespace {

bool is_upper_triangular(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

bool is_lower_triangular(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (m(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

}  // namespace

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    std::ostringstream msg;
    msg << "operator must be square with dim >= 1, got " << entries_.rows() << "x"
        << entries_.cols();
    throw DimensionError(msg.str());
  }
  if (!entries_.allFinite()) throw DomainError("operator entries must be finite");
}

Operator Operator::identity(Eigen::Index n) { return Operator(Matrix::Identity(n, n)); }

Operator Operator::zero(Eigen::Index n) { return Operator(Matrix::Zero(n, n)); }

Operator Operator::shift(Eigen::Index n) {
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i + 1, i) = 1.0;
  return Operator(std::move(m));
}

Operator Operator::diagonal(std::span<const double> entries) {
  const auto n = static_cast<Eigen::Index>(entries.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return Operator(std::move(m));
}

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator product: dimension mismatch");
  return Operator(a.matrix() * b.matrix());
}

Operator operator+(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator sum: dimension mismatch");
  return Operator(a.matrix() + b.matrix());
}

Operator operator-(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator difference: dimension mismatch");
  return Operator(a.matrix() - b.matrix());
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.matrix()); }

Operator adjoint(const Operator& a) { return Operator(a.matrix().adjoint()); }

double operator_norm(const Operator& a) {
  Eigen::JacobiSVD<Matrix> svd(a.matrix());
  return svd.singularValues()(0);
}

double hermitian_min_eigenvalue(const Operator& a) {
  const Matrix herm = 0.5 * (a.matrix() + a.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericFailure("Hermitian eigen-solver did not converge");
  return eig.eigenvalues().minCoeff();
}

bool is_positive(const Operator& a, double tol) {
  const double skew = operator_norm(Operator(a.matrix() - a.matrix().adjoint()));
  if (skew > tol * std::max(1.0, operator_norm(a))) return false;
  return hermitian_min_eigenvalue(a) >= -tol;
}

Spectrum spectrum(const Operator& a) {
  const Matrix& m = a.matrix();
  Spectrum out;
  out.values.reserve(static_cast<std::size_t>(a.dim()));
  if (is_upper_triangular(m) || is_lower_triangular(m)) {
    for (Eigen::Index i = 0; i < a.dim(); ++i) out.values.push_back(m(i, i));
    return out;
  }
  Eigen::ComplexEigenSolver<Matrix> eig(m, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigenvalue iteration did not converge for input\n" << m;
    throw NumericFailure(msg.str());
  }
  for (Eigen::Index i = 0; i < a.dim(); ++i) out.values.push_back(eig.eigenvalues()(i));
  return out;
}

GraphNorm graph_norm(const Vector& x, const Operator& t, int max_terms, double growth_tol) {
  if (x.size() != t.dim()) throw DimensionError("graph_norm: vector length differs from operator dim");
  if (max_terms < 1) throw DomainError("graph_norm: max_terms must be positive");
  if (!(growth_tol > 0.0)) throw DomainError("graph_norm: growth_tol must be positive");

  constexpr int kWindow = 5;
  std::vector<double> relative_increments;
  GraphNorm out;
  double partial = 0.0;
  Vector power = x;
  for (int n = 0; n <= max_terms; ++n) {
    const double term = power.squaredNorm();
    partial += term;
    out.terms = n + 1;
    if (!std::isfinite(partial)) {
      out.value = std::sqrt(partial);
      out.diverged = true;
      return out;
    }
    relative_increments.push_back(partial > 0.0 ? term / partial : 0.0);
    if (term == 0.0 && n > 0) break;  // the orbit died; every later term is zero
    power = t.matrix() * power;
  }
  out.value = std::sqrt(partial);
  if (relative_increments.back() == 0.0) return out;
  const auto window = std::min<std::size_t>(kWindow, relative_increments.size());
  out.diverged = !std::all_of(relative_increments.end() - static_cast<std::ptrdiff_t>(window),
                              relative_increments.end(),
                              [&](double r) { return r < growth_tol; });
  return out;
}

}  // namespace krylab
