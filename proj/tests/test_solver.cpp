#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "krylab/enorm.hpp"
#include "krylab/error.hpp"
#include "krylab/io.hpp"
#include "krylab/solver.hpp"
#include "krylab/zoo.hpp"
#include "test_helpers.hpp"

using namespace krylab;

namespace {

KrylovForm shift_form(int n) { return orthonormalize(Operator::shift(n), Vector::Unit(n, 0)); }

FeasibilityProblem with_windows(KrylovForm form, std::vector<Window> windows,
                                ConstraintFamily family = ConstraintFamily::AF) {
  FeasibilityProblem p = make_problem(std::move(form), family);
  p.windows = std::move(windows);
  return p;
}

DiagonalElement ones_after_first(int n) {
  std::vector<double> a(static_cast<std::size_t>(n), 1.0);
  a[0] = 0.0;
  return DiagonalElement(a);
}

KrylovForm hessenberg_form(int n, std::uint64_t seed) {
  ZooSpec spec;
  spec.kind = ZooKind::random_hessenberg;
  spec.n = n;
  spec.seed = seed;
  const ZooInstance z = build(spec);
  return orthonormalize(z.t, z.v);
}

}  // namespace

TEST_CASE("family names") {
  CHECK(to_string(ConstraintFamily::AF) == "A∩F");
  CHECK(parse_family("AF") == ConstraintFamily::AF);
  CHECK(parse_family("B∩F") == ConstraintFamily::BF);
  CHECK(parse_family("B") == ConstraintFamily::BF);
  CHECK_THROWS(parse_family("C"));
}

TEST_CASE("grid levels") {
  CHECK(grid_levels(0.25) == std::vector<double>{0.0, 0.5, 0.75, 1.0});
  CHECK(grid_levels(0.5) == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(grid_levels(0.05).size() == 12);
  CHECK(grid_levels(0.3) == std::vector<double>{0.0, 0.5, 0.8, 1.0});
  CHECK_THROWS_AS(grid_levels(0.0), DomainError);
}

TEST_CASE("penalty examples") {
  const KrylovForm f = shift_form(8);
  CHECK(penalty(witness({1, 1}, 8), with_windows(f, {{1, 1}})) == 0.0);
  CHECK(penalty(DiagonalElement::zero(8), make_problem(f, ConstraintFamily::AF)) > 0.0);

  const FeasibilityProblem p = with_windows(f, {{2, 3}});
  const std::vector<WindowMargin> m = window_margins(ones_after_first(8), p);
  REQUIRE(m.size() == 1);
  CHECK(m[0].side_margin == 0.0);
  CHECK(m[0].f_margin == 1.0 / 128.0 - 1.0 / 32.0);
  const double expected = std::pow(1.0 / 128.0 - 1.0 / 32.0, 2);
  CHECK(penalty(ones_after_first(8), p) == doctest::Approx(expected).epsilon(1e-15));
  CHECK_THROWS_AS(penalty(DiagonalElement::zero(5), p), DimensionError);
}

TEST_CASE("search on the shift with diagonal windows finds the invariant-subspace point") {
  const FeasibilityProblem p = make_problem(shift_form(8), ConstraintFamily::AF, true);
  const FeasibilityReport r = search(p, 1);
  REQUIRE(r.verdict == Verdict::feasible);
  CHECK(r.best_penalty <= p.tol * p.tol);
  for (const WindowMargin& m : r.per_window_margins) CHECK(m.margin() >= -p.tol);
  CHECK(r.point.at(1) == 0.0);
  for (int i = 3; i <= 8; ++i) CHECK(r.point.at(i) == 1.0);
  CHECK(r.residual <= 1e-12);
  REQUIRE(r.subspace.has_value());
  CHECK(r.subspace->rank == 7);
  CHECK(r.subspace->kernel_dim == 1);
  CHECK(r.subspace->invariance_defect <= 1e-12);
  CHECK_FALSE(r.subspace->trivial);

  CHECK(penalty(ones_after_first(8), p) == 0.0);
  // L_k = 2^{-(2k+1)} a_k equals D_k for k >= 2; a_1 = 0 leaves slack D_1 = 1/8.
  for (const WindowMargin& m : window_margins(ones_after_first(8), p))
    CHECK(m.f_margin == (m.window.k == 1 ? 0.125 : 0.0));
}

TEST_CASE("search on the shift with all windows is infeasible on the grid") {
  const FeasibilityProblem p = make_problem(shift_form(8), ConstraintFamily::AF);
  const FeasibilityReport r = search(p, 1);
  CHECK(r.verdict == Verdict::infeasible_on_grid);
  CHECK(r.best_penalty > 0.0);
  CHECK_FALSE(r.subspace.has_value());

  // Analytic bound: any A-member has L_k >= 2^{-(2k+2)} > 2^{-(2k+3)} = D_{k+1}.
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(8);
    for (double& x : a) x = u(rng);
    a[0] = 0.0;
    const DiagonalElement d(a);
    for (int k = 2; k <= 6; ++k) {
      CHECK(f_side_value(d, k, p.form) >= std::ldexp(1.0, -(2 * k + 2)));
      CHECK(std::ldexp(1.0, -(2 * k + 2)) > compression_defect(p.form, k + 1).value);
    }
  }
}

TEST_CASE("empty window list is vacuously feasible") {
  const FeasibilityReport r = search(with_windows(shift_form(6), {}), 3);
  CHECK(r.verdict == Verdict::feasible);
  CHECK(r.vacuous);
  CHECK(r.point == witness({1, 1}, 6));
  const GridResult g = grid_oracle(with_windows(shift_form(6), {}), 0.1);
  CHECK(g.feasible);
}

TEST_CASE("budget and guard errors") {
  FeasibilityProblem p = make_problem(shift_form(5), ConstraintFamily::AF);
  p.budget.restarts = 0;
  CHECK_THROWS_AS(search(p, 0), ConfigError);
  p.budget.restarts = 4;
  p.budget.grid_resolution = 0.0;
  CHECK_THROWS_AS(search(p, 0), ConfigError);
  CHECK_THROWS_AS(grid_oracle(make_problem(shift_form(9), ConstraintFamily::AF), 0.25), DomainError);
  FeasibilityProblem bad = with_windows(shift_form(5), {{2, 5}});
  CHECK_THROWS_AS(search(bad, 0), DomainError);
  bad.allow_degenerate = true;
  CHECK_NOTHROW(search(bad, 0));
}

TEST_CASE("grid_oracle examples") {
  const GridResult diag = grid_oracle(make_problem(shift_form(5), ConstraintFamily::AF, true), 0.25);
  REQUIRE(diag.feasible);
  REQUIRE(diag.point.has_value());
  // Oracle: plain lexicographic enumeration of the same grid.
  const std::vector<double> levels = grid_levels(0.25);
  const FeasibilityProblem p = make_problem(shift_form(5), ConstraintFamily::AF, true);
  std::optional<DiagonalElement> first;
  for (double a2 : levels)
    for (double a3 : levels)
      for (double a4 : levels)
        for (double a5 : levels) {
          const DiagonalElement d({0.0, a2, a3, a4, a5});
          if (!first && penalty(d, p) == 0.0) first = d;
        }
  REQUIRE(first.has_value());
  CHECK(*diag.point == *first);
  CHECK(*first == DiagonalElement({0.0, 0.5, 1.0, 1.0, 0.5}));

  const GridResult all = grid_oracle(make_problem(shift_form(5), ConstraintFamily::AF), 0.05);
  CHECK_FALSE(all.feasible);
  CHECK(all.nodes_visited > 0);
}

TEST_CASE("fip_audit examples") {
  const KrylovForm f = shift_form(8);
  for (const Window& w : all_windows(8)) {
    const std::vector<Window> single{w};
    const FipAuditRow r = fip_audit(single, f);
    CHECK(r.passes);
    CHECK(r.failing == FipAuditRow::FailingSide::none);
    const std::vector<Window> same{w, w, w};
    CHECK(fip_audit(same, f).passes);
  }
  const std::vector<Window> pair{{1, 3}, {2, 3}};
  const FipAuditRow r = fip_audit(pair, f);
  CHECK_FALSE(r.passes);
  CHECK(r.failing == FipAuditRow::FailingSide::f_side);
  CHECK(r.envelope == Window{1, 3});
  REQUIRE(r.per_window.size() == 2);
  CHECK(r.per_window[0].a_side.member);
  CHECK(r.per_window[1].a_side.member);
  CHECK(r.per_window[0].f_side.member);
  CHECK(r.per_window[1].f_side.margin == -1.0 / 128.0);

  CHECK_THROWS_AS(fip_audit(std::vector<Window>{}, f), DomainError);
  CHECK_THROWS_AS(fip_audit(std::vector<Window>(11, Window{1, 1}), f), DomainError);
}

TEST_CASE("evaluate_candidate examples") {
  const KrylovForm f = shift_form(8);
  const CandidateEvaluation full = evaluate_candidate(ones_after_first(8), f);
  CHECK(full.residual == 0.0);
  CHECK(full.subspace.rank == 7);
  CHECK(full.subspace.kernel_dim == 1);
  CHECK(full.subspace.invariance_defect == 0.0);
  CHECK_FALSE(full.subspace.trivial);

  const CandidateEvaluation zero = evaluate_candidate(DiagonalElement::zero(8), f);
  CHECK(zero.residual == 0.0);
  CHECK(zero.subspace.rank == 0);
  CHECK(zero.subspace.trivial);

  const CandidateEvaluation w = evaluate_candidate(witness({1, 1}, 8), f);
  // Oracle: (MHM - HM) has the single entry -1/2 at (3,2), weight 2^{-5}.
  const Matrix m = embed(witness({1, 1}, 8)).matrix();
  const Matrix diff = m * f.h.matrix() * m - f.h.matrix() * m;
  CHECK(std::abs(diff(2, 1)) == 0.5);
  CHECK((diff.cwiseAbs().sum()) == 0.5);
  CHECK(w.residual == 1.0 / 64.0);
  CHECK(w.subspace.invariance_defect == doctest::Approx(1.0));
}

TEST_CASE("property: search agrees with grid_oracle at N = 5, resolution 0.1") {
  const std::vector<KrylovForm> forms{shift_form(5), hessenberg_form(5, 7)};
  const std::vector<Window> windows = all_windows(5);
  int disagreements = 0, problems = 0;
  for (const KrylovForm& f : forms) {
    for (ConstraintFamily fam : {ConstraintFamily::AF, ConstraintFamily::BF}) {
      for (std::size_t i = 0; i < windows.size(); ++i) {
        for (std::size_t j = i; j < windows.size(); j += 3) {
          FeasibilityProblem p = with_windows(f, {windows[i], windows[j]}, fam);
          p.budget.grid_resolution = 0.1;
          const bool s = search(p, 9).verdict == Verdict::feasible;
          const bool g = grid_oracle(p, 0.1).feasible;
          disagreements += s != g;
          ++problems;
        }
      }
    }
  }
  CHECK(problems > 50);
  CHECK(disagreements == 0);
}

TEST_CASE("property: feasible reports have nonnegative margins") {
  std::mt19937_64 rng(52);
  const std::vector<Window> windows = all_windows(6);
  const KrylovForm f = hessenberg_form(6, 3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Window> ws;
    for (const Window& w : windows)
      if (rng() % 4 == 0) ws.push_back(w);
    const FeasibilityProblem p = with_windows(f, ws, trial % 2 ? ConstraintFamily::BF : ConstraintFamily::AF);
    const FeasibilityReport r = search(p, static_cast<std::uint64_t>(trial));
    if (r.verdict == Verdict::feasible)
      for (const WindowMargin& m : r.per_window_margins) CHECK(m.margin() >= -p.tol);
    CHECK(r.best_penalty >= 0.0);
  }
}

TEST_CASE("property: residual decomposition along E_k") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const ZooSpec& spec : standard_zoo(10)) {
    const ZooInstance z = build(spec);
    const KrylovForm f = orthonormalize(z.t, z.v);
    const Matrix h = f.h.matrix();
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> a(10);
      for (double& x : a) x = u(rng);
      const Matrix m = embed(DiagonalElement(a)).matrix();
      const double total = enorm_value(Operator(m * h * m - h * m));
      for (int k = 1; k <= 10; ++k) {
        const Matrix e = projection(k, 10).matrix();
        const double chain = enorm_value(Operator(m * h * m - m * e * h * e * m)) +
                             enorm_value(Operator(m * e * h * e * m - h * e * m)) +
                             enorm_value(Operator(h * e * m - h * m));
        CHECK(total <= chain + 1e-12);
      }
    }
  }
}

TEST_CASE("property: diagonal-window feasibility bounds the compressed residual by the defect") {
  std::mt19937_64 rng(54);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const ZooSpec& spec : standard_zoo(8)) {
    const ZooInstance z = build(spec);
    const KrylovForm f = orthonormalize(z.t, z.v);
    const FeasibilityProblem p = make_problem(f, ConstraintFamily::AF, true);
    std::vector<DiagonalElement> candidates{ones_after_first(8)};
    const FeasibilityReport r = search(p, 4);
    if (r.verdict == Verdict::feasible) candidates.push_back(r.point);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> a(8);
      for (double& x : a) x = u(rng);
      a[0] = 0.0;
      candidates.emplace_back(a);
    }
    for (const DiagonalElement& d : candidates) {
      const Matrix m = embed(d).matrix();
      for (int k = 1; k <= 7; ++k) {
        if (!in_F(d, {k, k}, f).member) continue;
        const Matrix e = projection(k, 8).matrix();
        const double lhs = enorm_value(Operator(m * e * f.h.matrix() * e * m - f.h.matrix() * e * m));
        CHECK(lhs <= compression_defect(f, k).value + kDefaultMembershipTol);
      }
    }
  }
}

TEST_CASE("property: kernel and range are complementary") {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> pick(0, 3);
  const KrylovForm f = shift_form(9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(9);
    for (double& x : a) x = pick(rng) == 0 ? 0.0 : 0.25 * pick(rng) + 0.1;
    const DiagonalElement d(a);
    const SubspaceCandidate s = evaluate_candidate(d, f).subspace;
    CHECK(s.rank + s.kernel_dim == 9);
    const Matrix p = s.projection.matrix();
    const Matrix m = embed(d).matrix();
    CHECK((p * m - m).norm() <= 1e-12);
    CHECK((p * p - p).norm() <= 1e-10);
    CHECK((p.adjoint() - p).norm() <= 1e-10);
  }
}

TEST_CASE("property: search is deterministic in its seed") {
  const FeasibilityProblem p = make_problem(hessenberg_form(6, 11), ConstraintFamily::AF);
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const std::string a = to_json(search(p, seed)).dump();
    const std::string b = to_json(search(p, seed)).dump();
    CHECK(a == b);
  }
}
