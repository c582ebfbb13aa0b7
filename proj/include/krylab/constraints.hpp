#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "krylab/krylov.hpp"
#include "krylab/operator.hpp"

namespace krylab {

inline constexpr double kDefaultMembershipTol = 1e-10;

/// Index pair (k, l), 1 <= k <= l, naming one constraint set of each family.
struct Window {
  int k = 1;
  int l = 1;

  friend auto operator<=>(const Window&, const Window&) = default;
};

std::string to_string(Window w);

/// Throws DomainError unless 1 <= k <= l and l + 1 <= n. With
/// allow_degenerate, l = n is accepted as well (E_{n+1} is read as I).
void validate_window(Window w, Eigen::Index n, bool allow_degenerate = false);

/// Every (k, l) with 1 <= k <= l <= n - 1 (or <= n with include_degenerate),
/// ordered by k then l.
std::vector<Window> all_windows(Eigen::Index n, bool include_degenerate = false);

/// The windows (k, k).
std::vector<Window> diagonal_windows(Eigen::Index n, bool include_degenerate = false);

/// Element of the positive part of the unit ball of the diagonal algebra:
/// a real vector with entries in [0, 1] (1e-12 slack).
class DiagonalElement {
 public:
  explicit DiagonalElement(std::vector<double> a);
  static DiagonalElement zero(Eigen::Index n);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(a_.size()); }
  /// 1-based access, matching the math.
  double at(int n) const { return a_.at(static_cast<std::size_t>(n - 1)); }
  std::span<const double> values() const { return a_; }

  friend bool operator==(const DiagonalElement&, const DiagonalElement&) = default;

 private:
  std::vector<double> a_;
};

struct MembershipVerdict {
  bool member = false;
  double margin = 0.0;           // smallest slack; negative means violated
  std::string worst_constraint;  // which inequality attains the margin
};

Operator embed(const DiagonalElement& d);

/// A_{k,l} = (1/2)(E_{l+1} - E_k): a_n = 1/2 for k+1 <= n <= l+1.
DiagonalElement witness(Window w, Eigen::Index n);

/// Condition AE_1 = 0 and A(E_{s+1} - E_s) >= (1/2)(E_{s+1} - E_s), k <= s <= l.
MembershipVerdict in_A(const DiagonalElement& d, Window w, double tol = kDefaultMembershipTol);

/// Condition AE_1 = 0 and 1/2 in sigma(A E_n) for every k <= n <= l.
MembershipVerdict in_B(const DiagonalElement& d, Window w, double tol = kDefaultMembershipTol);

/// Left side L = ||A E_k H E_k A - H E_k A||_e for A = embed(d). Depends on
/// a_1 .. a_k only.
double f_side_value(const DiagonalElement& d, int k, const KrylovForm& form);

/// Compression defects D_1 .. D_N (D_N = 0), indexed by s - 1.
std::vector<double> defect_profile(const KrylovForm& form);

/// Verdict for L <= D_s for all k <= s <= l, given the defect profile.
MembershipVerdict f_verdict(double lhs, Window w, std::span<const double> defects,
                            double tol = kDefaultMembershipTol);

/// Condition ||A E_k H E_k A - H E_k A||_e <= ||E_s H E_s - H E_s||_e, k <= s <= l.
MembershipVerdict in_F(const DiagonalElement& d, Window w, const KrylovForm& form,
                       double tol = kDefaultMembershipTol);

namespace detail {
// f_side_value with the weighted moduli 2^{-(i+j)} |H(i,j)| computed once per
// form, for loops that evaluate many elements against the same form.
class FSideEvaluator {
 public:
  explicit FSideEvaluator(const KrylovForm& form);
  double operator()(const DiagonalElement& d, int k) const;

 private:
  int n_;
  Eigen::MatrixXd weighted_;
};

// Margins only, without building the verdict label (solver hot path).
double a_margin(const DiagonalElement& d, Window w);
double b_margin(const DiagonalElement& d, Window w);
double f_margin(double lhs, Window w, std::span<const double> defects);
}  // namespace detail

/// E_k B.
Operator phi_k(const Operator& b, int k);
/// B E_k H E_k B - H E_k B.
Operator psi_k(const Operator& b, int k, const KrylovForm& form);

enum class SetFamily { A, F };

struct InclusionReport {
  enum class Status { holds_on_samples, counterexample, vacuous };
  Status status = Status::vacuous;
  int members_tested = 0;
  std::optional<DiagonalElement> counterexample;
  MembershipVerdict second_verdict;  // verdict of the counterexample (or worst member) in the second set
};

/// Samples members of family(first) and tests membership in family(second).
/// The witness of `first` is tested before `samples` random members drawn
/// uniformly from the first set's box (rejection on the F inequalities).
InclusionReport check_inclusion(SetFamily family, Window first, Window second,
                                const KrylovForm& form, int samples, std::uint64_t seed,
                                double tol = kDefaultMembershipTol);

}  // namespace krylab
