#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace krylab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// A dense complex N x N matrix. Entry (i, j) (0-based here, 1-based in the
/// math) holds <e_i, A e_j> with the inner product conjugate-linear in the
/// first slot. Construction rejects non-square, empty and non-finite input;
/// the value is immutable afterwards.
class Operator {
 public:
  explicit Operator(Matrix entries);

  static Operator identity(Eigen::Index n);
  static Operator zero(Eigen::Index n);
  /// Truncated unilateral shift: e_n -> e_{n+1}, ones on the subdiagonal.
  static Operator shift(Eigen::Index n);
  static Operator diagonal(std::span<const double> entries);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

  friend bool operator==(const Operator& a, const Operator& b) {
    return a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
};

Operator operator*(const Operator& a, const Operator& b);
Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(Complex s, const Operator& a);

Operator adjoint(const Operator& a);

/// Largest singular value.
double operator_norm(const Operator& a);

/// Smallest eigenvalue of the Hermitian part (A + A*)/2.
double hermitian_min_eigenvalue(const Operator& a);

/// True iff ||A - A*|| <= tol * max(1, ||A||) and the Hermitian part has no
/// eigenvalue below -tol.
bool is_positive(const Operator& a, double tol);

struct Spectrum {
  std::vector<Complex> values;  // with algebraic multiplicity
};

/// Eigenvalues with multiplicity. Triangular input (diagonal included)
/// returns its diagonal verbatim. Throws NumericFailure if the general
/// eigen-routine does not converge.
Spectrum spectrum(const Operator& a);

struct GraphNorm {
  double value = 0.0;     // sqrt of the partial sum (last partial sum when diverged)
  bool diverged = false;
  int terms = 0;          // number of powers T^n x summed, n = 0 .. terms-1
};

/// Truncated (sum_n ||T^n x||^2)^{1/2} for n = 0 .. max_terms. Converged when
/// each of the last five increments is below growth_tol relative to its
/// partial sum; otherwise flagged as diverged.
GraphNorm graph_norm(const Vector& x, const Operator& t, int max_terms, double growth_tol);

}  // namespace krylab
