#include "krylab/enorm.hpp"

#include <cmath>
#include <sstream>

#include "krylab/error.hpp"

namespace krylab {

double enorm_weight(int k, int l) { return std::ldexp(1.0, -(k + l)); }

double enorm_tail_weight(Eigen::Index n) {
  const double inside = 1.0 - std::ldexp(1.0, -static_cast<int>(n));
  return 1.0 - inside * inside;
}

double enorm_value(const Operator& a) {
  const int n = static_cast<int>(a.dim());
  double sum = 0.0;
  for (int diag = 2; diag <= 2 * n; ++diag) {
    const int k_lo = std::max(1, diag - n);
    const int k_hi = std::min(n, diag - 1);
    for (int k = k_lo; k <= k_hi; ++k) {
      const int l = diag - k;
      sum += enorm_weight(k, l) * std::abs(a(k - 1, l - 1));
    }
  }
  return sum;
}

ENormValue enorm(const Operator& a) {
  return {enorm_value(a), operator_norm(a) * enorm_tail_weight(a.dim())};
}

CompressionDefect compression_defect(const KrylovForm& form, int k) {
  const Eigen::Index n = form.dim();
  if (k < 1 || k > n) {
    std::ostringstream msg;
    msg << "compression_defect: k = " << k << " outside 1.." << n;
    throw DomainError(msg.str());
  }
  if (k == n) return {0.0, 0.0, true};

  const Operator ek = projection(k, n);
  const Operator hek = form.h * ek;
  const double brute = enorm_value(ek * hek - hek);
  const double closed = enorm_weight(k, k + 1) * form.subdiagonal(k);
  if (std::abs(brute - closed) > 1e-13) {
    std::ostringstream msg;
    msg << "compression_defect: brute force " << brute << " disagrees with closed form " << closed
        << " at k = " << k;
    throw NumericFailure(msg.str());
  }
  return {brute, closed, false};
}

}  // namespace krylab
