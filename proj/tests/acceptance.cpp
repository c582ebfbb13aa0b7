// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "krylab/constraints.hpp"
#include "krylab/enorm.hpp"
#include "krylab/error.hpp"
#include "krylab/harness.hpp"
#include "krylab/solver.hpp"
#include "krylab/zoo.hpp"

using namespace krylab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<ZooInstance> zoo(int n) {
  std::vector<ZooInstance> out;
  for (const ZooSpec& s : standard_zoo(n)) out.push_back(build(s));
  return out;
}

KrylovForm shift_form(int n) { return orthonormalize(Operator::shift(n), Vector::Unit(n, 0)); }

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

DiagonalElement random_box(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(n));
  for (double& x : a) x = u(rng);
  return DiagonalElement(a);
}

Outcome hessenberg_structure() {
  const auto t0 = Clock::now();
  double worst_h = 0.0, worst_q = 0.0;
  for (const ZooInstance& z : zoo(64)) {
    const KrylovForm f = orthonormalize(z.t, z.v);
    const Matrix& h = f.h.matrix();
    for (Eigen::Index j = 0; j < 64; ++j)
      for (Eigen::Index i = j + 2; i < 64; ++i) worst_h = std::max(worst_h, std::abs(h(i, j)));
    const Matrix& q = f.q.matrix();
    worst_q = std::max(worst_q, operator_norm(Operator(q.adjoint() * q - Matrix::Identity(64, 64))));
  }
  const double secs = seconds_since(t0);
  return {worst_h <= 1e-10 && worst_q <= 1e-10 && secs < 5.0,
          "max below-subdiagonal " + fmt("%.3g", worst_h) + ", ||Q*Q-I|| " + fmt("%.3g", worst_q) + ", " +
              fmt("%.2f", secs) + " s"};
}

Outcome defect_closed_form() {
  double worst = 0.0;
  int failures = 0;
  for (const ZooInstance& z : zoo(32)) {
    const KrylovForm f = orthonormalize(z.t, z.v);
    for (int k = 1; k < 32; ++k) {
      try {
        const CompressionDefect d = compression_defect(f, k);
        worst = std::max(worst, std::abs(d.value - std::ldexp(f.subdiagonal(k), -(2 * k + 1))));
      } catch (const NumericFailure&) {
        ++failures;
      }
    }
  }
  const KrylovForm s = shift_form(32);
  double shift_worst = 0.0;
  for (int k = 1; k <= 10; ++k)
    shift_worst = std::max(shift_worst, std::abs(compression_defect(s, k).value - std::ldexp(1.0, -(2 * k + 1))));
  return {failures == 0 && worst <= 1e-13 && shift_worst <= 1e-15,
          "zoo max deviation " + fmt("%.3g", worst) + ", shift max deviation " + fmt("%.3g", shift_worst)};
}

Outcome enorm_domination() {
  std::mt19937_64 rng(20240301);
  int violations = 0;
  double min_slack = 1e300;
  for (int i = 0; i < 200; ++i) {
    const Operator a(random_matrix(rng, 32));
    const double slack = operator_norm(a) - enorm(a).value;
    min_slack = std::min(min_slack, slack);
    violations += slack < 0.0;
  }
  return {violations == 0, std::to_string(violations) + " violations, min slack " + fmt("%.4g", min_slack)};
}

Outcome witness_chain() {
  int failures = 0, checked = 0;
  double worst_lhs = 0.0;
  for (const ZooInstance& z : zoo(16)) {
    const KrylovForm f = orthonormalize(z.t, z.v);
    for (const Window& w : all_windows(16)) {
      const DiagonalElement wit = witness(w, 16);
      const double lhs = f_side_value(wit, w.k, f);
      worst_lhs = std::max(worst_lhs, lhs);
      failures += !in_A(wit, w).member || !in_F(wit, w, f).member || lhs > 1e-14;
      ++checked;
    }
  }
  return {failures == 0, std::to_string(checked) + " witnesses, " + std::to_string(failures) +
                             " failures, max F-side value " + fmt("%.3g", worst_lhs)};
}

Outcome inclusion_audit() {
  const KrylovForm f16 = shift_form(16);
  const std::vector<Window> windows = all_windows(16);
  int pairs = 0, broken = 0;
  std::uint64_t seed = 0;
  for (const Window& outer : windows)
    for (const Window& inner : windows) {
      if (!(outer.k <= inner.k && inner.l <= outer.l)) continue;
      const InclusionReport r = check_inclusion(SetFamily::A, outer, inner, f16, 500, ++seed);
      broken += r.status != InclusionReport::Status::holds_on_samples || r.members_tested != 501;
      ++pairs;
    }
  const InclusionReport c = check_inclusion(SetFamily::F, {1, 3}, {2, 3}, shift_form(8), 500, 1);
  const bool counter = c.status == InclusionReport::Status::counterexample && c.counterexample &&
                       *c.counterexample == witness({1, 3}, 8) &&
                       std::abs(c.second_verdict.margin + 1.0 / 128.0) <= 1e-15;
  return {broken == 0 && counter, "A-family: " + std::to_string(pairs) + " nested pairs, " + std::to_string(broken) +
                                      " broken; F-family (1,3)->(2,3) counterexample margin " +
                                      fmt("%.17g", c.second_verdict.margin)};
}

Outcome finite_intersection_audit() {
  int single_fail = 0, singles = 0;
  for (const ZooInstance& z : zoo(8)) {
    const KrylovForm f = orthonormalize(z.t, z.v);
    for (const Window& w : all_windows(8)) {
      const std::vector<Window> one{w};
      single_fail += !fip_audit(one, f).passes;
      ++singles;
    }
  }
  const std::vector<Window> pair{{1, 3}, {2, 3}};
  const FipAuditRow r = fip_audit(pair, shift_form(8));
  const bool pair_ok = !r.passes && r.failing == FipAuditRow::FailingSide::f_side && r.per_window.size() == 2 &&
                       r.per_window[0].a_side.member && r.per_window[1].a_side.member &&
                       !r.per_window[1].f_side.member &&
                       std::abs(r.per_window[1].f_side.margin + 1.0 / 128.0) <= 1e-15;
  return {single_fail == 0 && pair_ok, std::to_string(singles) + " single windows, " + std::to_string(single_fail) +
                                           " failing; shift pair fails on side " + to_string(r.failing) +
                                           " with margin " + fmt("%.17g", r.per_window[1].f_side.margin)};
}

Outcome solver_vs_oracle() {
  const auto t0 = Clock::now();
  std::vector<KrylovForm> forms;
  for (const ZooSpec& s : {ZooSpec{.kind = ZooKind::shift, .n = 5}, ZooSpec{.kind = ZooKind::jordan, .n = 5},
                           ZooSpec{.kind = ZooKind::random_hessenberg, .n = 5, .seed = 17}}) {
    const ZooInstance z = build(s);
    forms.push_back(orthonormalize(z.t, z.v));
  }
  const std::vector<Window> windows = all_windows(5);
  std::vector<std::vector<Window>> sets{windows, diagonal_windows(5)};
  for (std::size_t i = 0; i < windows.size(); ++i) {
    sets.push_back({windows[i]});
    for (std::size_t j = i + 1; j < windows.size(); ++j) sets.push_back({windows[i], windows[j]});
  }
  int problems = 0, disagreements = 0, feasible = 0;
  for (const KrylovForm& f : forms)
    for (ConstraintFamily fam : {ConstraintFamily::AF, ConstraintFamily::BF})
      for (const auto& ws : sets) {
        FeasibilityProblem p = make_problem(f, fam);
        p.windows = ws;
        p.budget.grid_resolution = 0.1;
        const bool s = search(p, static_cast<std::uint64_t>(problems)).verdict == Verdict::feasible;
        const bool g = grid_oracle(p, 0.1).feasible;
        disagreements += s != g;
        feasible += g;
        ++problems;
      }
  const double secs = seconds_since(t0);
  return {disagreements == 0 && secs < 60.0,
          std::to_string(problems) + " problems (" + std::to_string(feasible) + " feasible), " +
              std::to_string(disagreements) + " disagreements, " + fmt("%.2f", secs) + " s"};
}

Outcome positive_control() {
  const FeasibilityProblem p = make_problem(shift_form(8), ConstraintFamily::AF, true);
  const FeasibilityReport r = search(p, 2024);
  bool shape = r.point.at(1) == 0.0;
  for (int i = 3; i <= 8; ++i) shape = shape && r.point.at(i) == 1.0;
  const bool ok = r.verdict == Verdict::feasible && shape && r.residual <= 1e-12 && r.subspace &&
                  r.subspace->rank == 7 && r.subspace->kernel_dim == 1 && r.subspace->invariance_defect <= 1e-12;
  std::ostringstream d;
  d << "verdict " << to_string(r.verdict) << ", a_2 " << r.point.at(2) << ", residual " << r.residual;
  if (r.subspace)
    d << ", rank " << r.subspace->rank << ", kernel_dim " << r.subspace->kernel_dim << ", invariance defect "
      << r.subspace->invariance_defect;
  return {ok, d.str()};
}

Outcome negative_control() {
  const FeasibilityProblem p = make_problem(shift_form(8), ConstraintFamily::AF);
  const FeasibilityReport r = search(p, 2024);
  // Analytic bound for the shift: any A-member has L_k >= 2^{-(2k+2)} > 2^{-(2k+3)} = D_{k+1}.
  bool bound = true;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(8);
    for (double& x : a) x = u(rng);
    a[0] = 0.0;
    const DiagonalElement d(a);
    for (int k = 2; k <= 6; ++k)
      bound = bound && f_side_value(d, k, p.form) >= std::ldexp(1.0, -(2 * k + 2)) &&
              std::ldexp(1.0, -(2 * k + 2)) > compression_defect(p.form, k + 1).value;
  }
  return {r.verdict == Verdict::infeasible_on_grid && bound,
          "verdict " + to_string(r.verdict) + ", best penalty " + fmt("%.4g", r.best_penalty) +
              (bound ? ", analytic bound confirmed" : ", analytic bound violated")};
}

Outcome psi_continuity() {
  std::mt19937_64 rng(77);
  int violations = 0, pairs = 0;
  for (const ZooInstance& z : zoo(16)) {
    const KrylovForm f = orthonormalize(z.t, z.v);
    const double hn = operator_norm(f.h);
    for (int i = 0; i < 100; ++i) {
      const Operator b = embed(random_box(rng, 16));
      const Operator b2 = embed(random_box(rng, 16));
      const int k = 1 + i % 16;
      violations += enorm_value(psi_k(b, k, f) - psi_k(b2, k, f)) > 3.0 * hn * operator_norm(b - b2);
      ++pairs;
    }
  }
  return {violations == 0, std::to_string(pairs) + " pairs, " + std::to_string(violations) + " violations"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "krylab-acceptance-determinism";
  fs::remove_all(base);
  RunConfig cfg = golden_config();
  cfg.output_dir = base / "a";
  run_audit(cfg);
  cfg.output_dir = base / "b";
  run_audit(cfg);
  const std::string csv_a = slurp(base / "a" / "audit.csv"), csv_b = slurp(base / "b" / "audit.csv");
  const std::string sum_a = slurp(base / "a" / "summary.json"), sum_b = slurp(base / "b" / "summary.json");
  const bool ok = !csv_a.empty() && csv_a == csv_b && !sum_a.empty() && sum_a == sum_b;
  return {ok, std::to_string(csv_a.size()) + " bytes of audit.csv, " + std::to_string(sum_a.size()) +
                  " bytes of summary.json, " + (ok ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Hessenberg structure at N=64", hessenberg_structure},
      {"compression defect closed form", defect_closed_form},
      {"e-norm dominated by operator norm", enorm_domination},
      {"witness chain at N=16", witness_chain},
      {"inclusion audit", inclusion_audit},
      {"finite-intersection audit", finite_intersection_audit},
      {"search agrees with grid oracle at N=5", solver_vs_oracle},
      {"positive control: shift with diagonal windows", positive_control},
      {"negative control: shift with all windows", negative_control},
      {"psi continuity bound", psi_continuity},
      {"determinism of the golden run", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
