#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "krylab/constraints.hpp"
#include "krylab/krylov.hpp"

namespace krylab {

/// Which side condition accompanies the F inequalities in each window.
enum class ConstraintFamily { AF, BF };

std::string to_string(ConstraintFamily f);
/// Accepts "A∩F", "AF", "A" and the B counterparts.
ConstraintFamily parse_family(const std::string& s);

struct SolverBudget {
  int restarts = 24;
  int iterations = 300;
  double grid_resolution = 0.05;  // used for grid seeding and the infeasibility certificate
  int anneal_steps = 4000;
};

/// Search for a diagonal element lying in every set family(w) ∩ F(w), w in windows.
struct FeasibilityProblem {
  KrylovForm form;
  std::vector<Window> windows;
  ConstraintFamily family = ConstraintFamily::AF;
  double tol = kDefaultMembershipTol;
  SolverBudget budget;
  bool allow_degenerate = false;  // accept windows with l = N
};

/// Problem over all_windows(N) (or only the diagonal ones).
FeasibilityProblem make_problem(KrylovForm form, ConstraintFamily family, bool diagonal_only = false,
                                bool include_degenerate = false);

struct WindowMargin {
  Window window;
  double side_margin = 0.0;  // A or B condition
  double f_margin = 0.0;
  double margin() const { return side_margin < f_margin ? side_margin : f_margin; }
};

/// Orthogonal projection onto the closed range of a diagonal M and its
/// invariance defect ||(I - P) H P||.
struct SubspaceCandidate {
  Operator projection = Operator::zero(1);
  int rank = 0;
  int kernel_dim = 0;
  double invariance_defect = 0.0;
  bool trivial = true;  // rank 0 or rank N
};

struct CandidateEvaluation {
  double residual = 0.0;  // ||M H M - H M||_e
  SubspaceCandidate subspace;
};

enum class Verdict { feasible, infeasible_on_grid, budget_exhausted };
std::string to_string(Verdict v);

struct FeasibilityReport {
  Verdict verdict = Verdict::budget_exhausted;
  DiagonalElement point = DiagonalElement::zero(1);  // feasible point, or the best point found
  double best_penalty = 0.0;
  std::vector<WindowMargin> per_window_margins;  // in problem window order
  double residual = 0.0;                         // commutation residual at `point`
  std::optional<SubspaceCandidate> subspace;     // present when feasible
  bool vacuous = false;                          // empty window list
  int restarts_run = 0;
  bool annealing_used = false;
};

/// Sum over windows of squared hinge violations of the side and F margins.
/// Zero iff every margin is nonnegative.
double penalty(const DiagonalElement& d, const FeasibilityProblem& problem);

/// Margins of d in every window of the problem.
std::vector<WindowMargin> window_margins(const DiagonalElement& d, const FeasibilityProblem& problem);

/// Multi-start projected descent (central differences) on the penalty, with
/// a simulated-annealing run after half the restarts if nothing feasible was
/// found. Restart seeds start with the lowest-penalty grid points and are
/// filled up with uniform box samples. Feasible iff the best penalty is at
/// most tol^2; otherwise the grid oracle at budget.grid_resolution decides
/// between infeasible_on_grid and budget_exhausted. Deterministic in seed.
FeasibilityReport search(const FeasibilityProblem& problem, std::uint64_t seed);

inline constexpr long long kGridNodeLimit = 10'000'000;

struct GridResult {
  bool feasible = false;
  std::optional<DiagonalElement> point;  // first feasible grid point in lexicographic order
  long long nodes_visited = 0;
};

/// Exhaustive depth-first enumeration of a_1 = 0, a_n in {0} ∪ {1/2, 1/2 + r, ..., 1},
/// pruning partial assignments whose decided constraints already fail.
/// Requires N <= 8; throws DomainError past kGridNodeLimit visited nodes.
GridResult grid_oracle(const FeasibilityProblem& problem, double resolution);

/// Grid levels {0, 1/2, 1/2 + r, ..., 1} in ascending order.
std::vector<double> grid_levels(double resolution);

struct FipWindowResult {
  Window window;
  MembershipVerdict a_side;
  MembershipVerdict f_side;
};

struct FipAuditRow {
  enum class FailingSide { none, a_side, f_side, both };
  std::vector<Window> windows;
  Window envelope;  // (min k_i, max l_i)
  bool passes = false;
  FailingSide failing = FailingSide::none;
  std::vector<FipWindowResult> per_window;
};

std::string to_string(FipAuditRow::FailingSide s);

/// Tests the witness of the envelope window against every A(k_i,l_i) ∩ F(k_i,l_i).
/// Accepts 1 to 10 windows.
FipAuditRow fip_audit(std::span<const Window> windows, const KrylovForm& form,
                      double tol = kDefaultMembershipTol);
/// Same, reusing a precomputed defect_profile(form).
FipAuditRow fip_audit(std::span<const Window> windows, const KrylovForm& form, std::span<const double> defects,
                      double tol = kDefaultMembershipTol);

inline constexpr double kDefaultRankTol = 1e-12;

CandidateEvaluation evaluate_candidate(const DiagonalElement& d, const KrylovForm& form,
                                       double rank_tol = kDefaultRankTol);

}  // namespace krylab
