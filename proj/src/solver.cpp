#include "krylab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "krylab/enorm.hpp"
#include "krylab/error.hpp"
#include "krylab/seeding.hpp"

namespace krylab {

std::string to_string(ConstraintFamily f) { return f == ConstraintFamily::AF ? "A∩F" : "B∩F"; }

ConstraintFamily parse_family(const std::string& s) {
  if (s == "A∩F" || s == "AF" || s == "A") return ConstraintFamily::AF;
  if (s == "B∩F" || s == "BF" || s == "B") return ConstraintFamily::BF;
  throw ConfigError("unknown constraint family '" + s + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::feasible: return "feasible";
    case Verdict::infeasible_on_grid: return "infeasible_on_grid";
    case Verdict::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

std::string to_string(FipAuditRow::FailingSide s) {
  switch (s) {
    case FipAuditRow::FailingSide::none: return "none";
    case FipAuditRow::FailingSide::a_side: return "A";
    case FipAuditRow::FailingSide::f_side: return "F";
    case FipAuditRow::FailingSide::both: return "A+F";
  }
  return "unknown";
}

FeasibilityProblem make_problem(KrylovForm form, ConstraintFamily family, bool diagonal_only,
                                bool include_degenerate) {
  const Eigen::Index n = form.dim();
  FeasibilityProblem p{std::move(form), {}, family, kDefaultMembershipTol, {}, include_degenerate};
  p.windows = diagonal_only ? diagonal_windows(n, include_degenerate) : all_windows(n, include_degenerate);
  return p;
}

namespace {

using Point = std::vector<double>;

// Evaluates margins and penalty for one problem; the defect profile and the
// set of distinct k values are computed once.
class PenaltyModel {
 public:
  explicit PenaltyModel(const FeasibilityProblem& p)
      : problem_(p), defects_(defect_profile(p.form)), lhs_(p.form), n_(p.form.dim()) {
    for (const Window& w : p.windows) validate_window(w, n_, p.allow_degenerate);
    for (const Window& w : p.windows) ks_.push_back(w.k);
    std::sort(ks_.begin(), ks_.end());
    ks_.erase(std::unique(ks_.begin(), ks_.end()), ks_.end());
  }

  std::vector<WindowMargin> margins(const DiagonalElement& d) const {
    std::vector<double> lhs(static_cast<std::size_t>(n_) + 1, 0.0);
    for (int k : ks_) lhs[static_cast<std::size_t>(k)] = lhs_(d, k);
    std::vector<WindowMargin> out;
    out.reserve(problem_.windows.size());
    for (const Window& w : problem_.windows) {
      const double side = problem_.family == ConstraintFamily::AF ? detail::a_margin(d, w)
                                                                  : detail::b_margin(d, w);
      out.push_back({w, side, detail::f_margin(lhs[static_cast<std::size_t>(w.k)], w, defects_)});
    }
    return out;
  }

  double operator()(const DiagonalElement& d) const {
    double total = 0.0;
    for (const WindowMargin& m : margins(d)) {
      const double a = std::max(0.0, -m.side_margin);
      const double f = std::max(0.0, -m.f_margin);
      total += a * a + f * f;
    }
    return total;
  }

  double operator()(const Point& x) const { return (*this)(DiagonalElement(x)); }

  std::span<const double> defects() const { return defects_; }

 private:
  const FeasibilityProblem& problem_;
  std::vector<double> defects_;
  detail::FSideEvaluator lhs_;
  Eigen::Index n_;
  std::vector<int> ks_;
};

struct Box {
  Point lower, upper;

  Point clamp(Point x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    return x;
  }
};

// a_1 = 0 always; the A family additionally lifts every a_{s+1} with s inside
// some window to [1/2, 1].
Box feasible_box(const FeasibilityProblem& p) {
  const auto n = static_cast<std::size_t>(p.form.dim());
  Box box{Point(n, 0.0), Point(n, 1.0)};
  box.upper[0] = 0.0;
  if (p.family == ConstraintFamily::AF) {
    for (const Window& w : p.windows)
      for (int s = w.k; s <= w.l && static_cast<std::size_t>(s) < n; ++s)
        box.lower[static_cast<std::size_t>(s)] = 0.5;
  }
  return box;
}

std::vector<std::vector<double>> coordinate_levels(const Box& box, double resolution) {
  const std::vector<double> levels = grid_levels(resolution);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < box.lower.size(); ++i) {
    std::vector<double> li;
    for (double v : levels)
      if (v >= box.lower[i] && v <= box.upper[i]) li.push_back(v);
    out.push_back(std::move(li));
  }
  return out;
}

double grid_count(const std::vector<std::vector<double>>& levels) {
  double count = 1.0;
  for (const auto& l : levels) count *= static_cast<double>(l.size());
  return count;
}

constexpr double kSeedGridCap = 50'000;

// Lowest-penalty points of the finest grid (among resolution, 0.1, 0.25,
// 0.5) that fits under kSeedGridCap; ties keep enumeration order.
std::vector<Point> grid_seeds(const PenaltyModel& model, const Box& box, double resolution,
                              std::size_t wanted) {
  if (wanted == 0) return {};
  std::vector<std::vector<double>> levels;
  bool found = false;
  for (double r : {resolution, 0.1, 0.25, 0.5}) {
    if (r < resolution) continue;
    levels = coordinate_levels(box, r);
    if (grid_count(levels) <= kSeedGridCap) {
      found = true;
      break;
    }
  }
  if (!found) return {};
  for (const auto& l : levels)
    if (l.empty()) return {};

  std::vector<std::pair<double, Point>> scored;
  std::vector<std::size_t> idx(levels.size(), 0);
  while (true) {
    Point x(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) x[i] = levels[i][idx[i]];
    scored.emplace_back(model(x), std::move(x));
    bool carry = true;
    for (std::size_t pos = levels.size(); carry && pos > 0;) {
      --pos;
      if (++idx[pos] < levels[pos].size()) carry = false;
      else idx[pos] = 0;
    }
    if (carry) break;
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Point> out;
  for (std::size_t i = 0; i < std::min(wanted, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

struct LocalResult {
  Point x;
  double value = 0.0;
};

constexpr double kFdStep = 1e-6;

// Projected descent along the normalized central-difference gradient with a
// halving line search, followed by snapping near-bound coordinates.
LocalResult descend(const PenaltyModel& model, const Box& box, Point x, int iterations, double target) {
  x = box.clamp(std::move(x));
  double fx = model(x);
  double step = 0.25;
  const std::size_t n = x.size();
  for (int it = 0; it < iterations && fx > target; ++it) {
    Point g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (box.lower[i] == box.upper[i]) continue;
      Point xp = x, xm = x;
      xp[i] = std::min(box.upper[i], x[i] + kFdStep);
      xm[i] = std::max(box.lower[i], x[i] - kFdStep);
      g[i] = (model(xp) - model(xm)) / (xp[i] - xm[i]);
    }
    const double gnorm = std::sqrt(std::inner_product(g.begin(), g.end(), g.begin(), 0.0));
    if (!(gnorm > 0.0)) break;

    bool moved = false;
    for (double t = std::min(1.0, 2.0 * step); t > 1e-14; t *= 0.5) {
      Point trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - t * g[i] / gnorm;
      trial = box.clamp(std::move(trial));
      const double ft = model(trial);
      if (ft < fx) {
        x = std::move(trial);
        fx = ft;
        step = t;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (double bound : {box.lower[i], box.upper[i]}) {
      if (x[i] != bound && std::abs(x[i] - bound) < 1e-6) {
        Point trial = x;
        trial[i] = bound;
        const double ft = model(trial);
        if (ft <= fx) {
          x = std::move(trial);
          fx = ft;
        }
      }
    }
  }
  return {std::move(x), fx};
}

LocalResult anneal(const PenaltyModel& model, const Box& box, LocalResult start, int steps,
                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < box.lower.size(); ++i)
    if (box.lower[i] < box.upper[i]) free.push_back(i);
  if (free.empty() || steps <= 0) return start;

  LocalResult current = start, best = start;
  const double t0 = std::max(start.value, 1e-12);
  for (int s = 0; s < steps; ++s) {
    const double frac = static_cast<double>(s) / steps;
    const double temperature = t0 * (1.0 - frac) + 1e-30;
    const double sigma = 0.25 * (1.0 - frac) + 1e-3;
    const std::size_t i = free[static_cast<std::size_t>(unit(rng) * static_cast<double>(free.size())) % free.size()];
    Point trial = current.x;
    trial[i] += sigma * gauss(rng);
    trial = box.clamp(std::move(trial));
    const double ft = model(trial);
    if (ft <= current.value || unit(rng) < std::exp(-(ft - current.value) / temperature)) {
      current = {std::move(trial), ft};
      if (current.value < best.value) best = current;
    }
  }
  return best;
}

double commutation_residual(const Point& x, const KrylovForm& form) {
  const Operator m = embed(DiagonalElement(x));
  const Operator hm = form.h * m;
  return enorm_value(m * hm - hm);
}

// Lowers the commutation residual of a feasible point without leaving the
// feasible set: descent on the residual, then pushing coordinates to their
// bounds. Only steps that keep the penalty at most `target` are accepted.
LocalResult polish(const PenaltyModel& model, const Box& box, const KrylovForm& form, LocalResult start,
                   int iterations, double target) {
  Point x = std::move(start.x);
  double penalty_x = start.value;
  double rx = commutation_residual(x, form);
  const std::size_t n = x.size();
  const auto accept = [&](Point trial) {
    const double rt = commutation_residual(trial, form);
    if (rt >= rx) return false;
    const double pt = model(trial);
    if (pt > target) return false;
    x = std::move(trial);
    rx = rt;
    penalty_x = pt;
    return true;
  };

  for (int it = 0; it < iterations && rx > 0.0; ++it) {
    Point g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (box.lower[i] == box.upper[i]) continue;
      Point xp = x, xm = x;
      xp[i] = std::min(box.upper[i], x[i] + kFdStep);
      xm[i] = std::max(box.lower[i], x[i] - kFdStep);
      if (xp[i] > xm[i]) g[i] = (commutation_residual(xp, form) - commutation_residual(xm, form)) / (xp[i] - xm[i]);
    }
    const double gnorm = std::sqrt(std::inner_product(g.begin(), g.end(), g.begin(), 0.0));
    if (!(gnorm > 0.0)) break;
    bool moved = false;
    for (double t = 1.0; t > 1e-12 && !moved; t *= 0.5) {
      Point trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - t * g[i] / gnorm;
      moved = accept(box.clamp(std::move(trial)));
    }
    if (!moved) break;
  }

  for (std::size_t i = 0; i < n && rx > 0.0; ++i) {
    for (double bound : {box.upper[i], box.lower[i]}) {
      if (x[i] == bound) continue;
      Point trial = x;
      trial[i] = bound;
      if (accept(std::move(trial))) break;
    }
  }
  return {std::move(x), penalty_x};
}

void validate_budget(const SolverBudget& b) {
  if (b.restarts < 1) throw ConfigError("solver budget: restarts must be >= 1");
  if (b.iterations < 1) throw ConfigError("solver budget: iterations must be >= 1");
  if (!(b.grid_resolution > 0.0 && b.grid_resolution <= 0.5))
    throw ConfigError("solver budget: grid_resolution must lie in (0, 0.5]");
  if (b.anneal_steps < 0) throw ConfigError("solver budget: anneal_steps must be >= 0");
}

}  // namespace

double penalty(const DiagonalElement& d, const FeasibilityProblem& problem) {
  if (d.dim() != problem.form.dim()) throw DimensionError("penalty: dimension mismatch");
  return PenaltyModel(problem)(d);
}

std::vector<WindowMargin> window_margins(const DiagonalElement& d, const FeasibilityProblem& problem) {
  if (d.dim() != problem.form.dim()) throw DimensionError("window_margins: dimension mismatch");
  return PenaltyModel(problem).margins(d);
}

std::vector<double> grid_levels(double resolution) {
  if (!(resolution > 0.0 && resolution <= 0.5)) throw DomainError("grid resolution must lie in (0, 0.5]");
  std::vector<double> levels{0.0};
  for (int i = 0;; ++i) {
    double v = 0.5 + i * resolution;
    if (v > 1.0 + 1e-9) break;
    if (std::abs(v - 1.0) < 1e-9) v = 1.0;
    levels.push_back(v);
  }
  if (levels.back() != 1.0) levels.push_back(1.0);
  return levels;
}

FeasibilityReport search(const FeasibilityProblem& problem, std::uint64_t seed) {
  validate_budget(problem.budget);
  const Eigen::Index n = problem.form.dim();
  const PenaltyModel model(problem);
  const double target = problem.tol * problem.tol;

  FeasibilityReport report;
  if (problem.windows.empty()) {
    report.verdict = Verdict::feasible;
    report.vacuous = true;
    report.point = n >= 2 ? witness({1, 1}, n) : DiagonalElement::zero(n);
    report.best_penalty = 0.0;
    const CandidateEvaluation eval = evaluate_candidate(report.point, problem.form);
    report.residual = eval.residual;
    report.subspace = eval.subspace;
    return report;
  }

  const Box box = feasible_box(problem);
  const int restarts = problem.budget.restarts;
  const int half = (restarts + 1) / 2;
  const std::vector<Point> seeds =
      grid_seeds(model, box, problem.budget.grid_resolution, static_cast<std::size_t>(half));

  // Reduction in execution order: restarts [0, half), annealing, restarts [half, R).
  // Strict improvement only, so ties keep the earliest slot.
  std::optional<LocalResult> best;
  const auto offer = [&](LocalResult r) {
    if (!best || r.value < best->value) best = std::move(r);
    return best->value == 0.0;
  };

  const auto run_restart = [&](int i) {
    Point start;
    if (static_cast<std::size_t>(i) < seeds.size()) {
      start = seeds[static_cast<std::size_t>(i)];
    } else {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      start.resize(static_cast<std::size_t>(n));
      for (std::size_t j = 0; j < start.size(); ++j)
        start[j] = box.lower[j] + (box.upper[j] - box.lower[j]) * unit(rng);
    }
    ++report.restarts_run;
    return descend(model, box, std::move(start), problem.budget.iterations, target);
  };

  bool done = false;
  for (int i = 0; i < half && !done; ++i) done = offer(run_restart(i));
  if (!done && best->value > target && problem.budget.anneal_steps > 0) {
    report.annealing_used = true;
    LocalResult annealed =
        anneal(model, box, *best, problem.budget.anneal_steps, derive_seed(seed, 1'000'003));
    done = offer(descend(model, box, std::move(annealed.x), problem.budget.iterations, target));
  }
  for (int i = half; i < restarts && !done; ++i) done = offer(run_restart(i));
  if (best->value <= target)
    best = polish(model, box, problem.form, std::move(*best), problem.budget.iterations, target);

  report.point = DiagonalElement(best->x);
  report.best_penalty = best->value;
  report.per_window_margins = model.margins(report.point);
  const CandidateEvaluation eval = evaluate_candidate(report.point, problem.form);
  report.residual = eval.residual;

  if (best->value <= target) {
    report.verdict = Verdict::feasible;
    report.subspace = eval.subspace;
    return report;
  }
  report.verdict = Verdict::budget_exhausted;
  if (n <= 8) {
    try {
      if (!grid_oracle(problem, problem.budget.grid_resolution).feasible)
        report.verdict = Verdict::infeasible_on_grid;
    } catch (const DomainError&) {
      // grid too large to certify; stays budget_exhausted
    }
  }
  return report;
}

namespace {

class GridWalker {
 public:
  GridWalker(const FeasibilityProblem& p, double resolution)
      : p_(p), n_(static_cast<int>(p.form.dim())), defects_(defect_profile(p.form)), lhs_(p.form),
        levels_(grid_levels(resolution)), a_(static_cast<std::size_t>(n_), 0.0) {
    for (const Window& w : p.windows) validate_window(w, n_, p.allow_degenerate);
  }

  GridResult run() {
    GridResult out;
    if (p_.windows.empty()) {
      out.feasible = true;
      out.point = DiagonalElement(a_);
      return out;
    }
    out.feasible = visit(2);
    if (out.feasible) out.point = DiagonalElement(a_);
    out.nodes_visited = nodes_;
    return out;
  }

 private:
  // Assigns a_m, ..., a_N. a_1 is fixed at 0.
  bool visit(int m) {
    if (m > n_) return leaf_ok();
    for (double v : levels_) {
      if (++nodes_ > kGridNodeLimit) throw DomainError("grid oracle: node limit exceeded");
      a_[static_cast<std::size_t>(m - 1)] = v;
      if (prefix_ok(m) && visit(m + 1)) return true;
    }
    a_[static_cast<std::size_t>(m - 1)] = 0.0;
    return false;
  }

  // Checks every condition that a_1 .. a_m already decide.
  bool prefix_ok(int m) const {
    const DiagonalElement d(a_);
    for (const Window& w : p_.windows) {
      if (p_.family == ConstraintFamily::AF) {
        if (w.k <= m - 1 && m - 1 <= w.l && a_[static_cast<std::size_t>(m - 1)] < 0.5 - p_.tol) return false;
      } else {
        for (int nn = w.k; nn <= std::min(w.l, m); ++nn) {
          bool hit = false;
          for (int i = 1; i <= nn && !hit; ++i) hit = std::abs(a_[static_cast<std::size_t>(i - 1)] - 0.5) <= p_.tol;
          if (!hit) return false;
        }
      }
      if (w.k == m && !f_verdict(lhs_(d, w.k), w, defects_, p_.tol).member) return false;
    }
    return true;
  }

  bool leaf_ok() const {
    const DiagonalElement d(a_);
    for (const Window& w : p_.windows) {
      const MembershipVerdict side = p_.family == ConstraintFamily::AF ? in_A(d, w, p_.tol) : in_B(d, w, p_.tol);
      if (!side.member) return false;
      if (!f_verdict(lhs_(d, w.k), w, defects_, p_.tol).member) return false;
    }
    return true;
  }

  const FeasibilityProblem& p_;
  int n_;
  std::vector<double> defects_;
  detail::FSideEvaluator lhs_;
  std::vector<double> levels_;
  std::vector<double> a_;
  long long nodes_ = 0;
};

}  // namespace

GridResult grid_oracle(const FeasibilityProblem& problem, double resolution) {
  if (problem.form.dim() > 8) throw DomainError("grid oracle: N must be <= 8");
  return GridWalker(problem, resolution).run();
}

FipAuditRow fip_audit(std::span<const Window> windows, const KrylovForm& form, double tol) {
  return fip_audit(windows, form, defect_profile(form), tol);
}

FipAuditRow fip_audit(std::span<const Window> windows, const KrylovForm& form, std::span<const double> defects,
                      double tol) {
  if (static_cast<Eigen::Index>(defects.size()) != form.dim())
    throw DimensionError("fip_audit: defect profile must have N entries");
  if (windows.empty() || windows.size() > 10) throw DomainError("fip_audit: need 1 to 10 windows");
  const Eigen::Index n = form.dim();
  for (const Window& w : windows) validate_window(w, n, true);

  FipAuditRow row;
  row.windows.assign(windows.begin(), windows.end());
  row.envelope = {windows.front().k, windows.front().l};
  for (const Window& w : windows) {
    row.envelope.k = std::min(row.envelope.k, w.k);
    row.envelope.l = std::max(row.envelope.l, w.l);
  }
  const DiagonalElement wit = witness(row.envelope, n);
  bool a_fail = false, f_fail = false;
  for (const Window& w : windows) {
    FipWindowResult r{w, in_A(wit, w, tol), f_verdict(f_side_value(wit, w.k, form), w, defects, tol)};
    a_fail |= !r.a_side.member;
    f_fail |= !r.f_side.member;
    row.per_window.push_back(std::move(r));
  }
  row.passes = !a_fail && !f_fail;
  row.failing = a_fail && f_fail ? FipAuditRow::FailingSide::both
                : a_fail         ? FipAuditRow::FailingSide::a_side
                : f_fail         ? FipAuditRow::FailingSide::f_side
                                 : FipAuditRow::FailingSide::none;
  return row;
}

CandidateEvaluation evaluate_candidate(const DiagonalElement& d, const KrylovForm& form, double rank_tol) {
  const Eigen::Index n = form.dim();
  if (d.dim() != n) throw DimensionError("evaluate_candidate: dimension mismatch");
  const Operator m = embed(d);
  const Operator hm = form.h * m;

  CandidateEvaluation out;
  out.residual = enorm_value(m * hm - hm);

  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  int rank = 0;
  for (int i = 1; i <= n; ++i) {
    if (d.at(i) > rank_tol) {
      p[static_cast<std::size_t>(i - 1)] = 1.0;
      ++rank;
    }
  }
  const Operator proj = Operator::diagonal(p);
  const Operator complement = Operator::identity(n) - proj;
  out.subspace = SubspaceCandidate{proj, rank, static_cast<int>(n) - rank,
                                   operator_norm(complement * form.h * proj), rank == 0 || rank == n};
  return out;
}

}  // namespace krylab
