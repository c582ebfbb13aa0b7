#pragma once

#include <random>

#include "krylab/operator.hpp"

namespace krylab::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = scale * Complex(g(rng), g(rng));
  return m;
}

inline Matrix random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline Vector unit(Eigen::Index n, Eigen::Index i) { return Vector::Unit(n, i); }

}  // namespace krylab::testing
