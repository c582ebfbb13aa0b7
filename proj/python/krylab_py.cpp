#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "krylab/constraints.hpp"
#include "krylab/enorm.hpp"
#include "krylab/error.hpp"
#include "krylab/harness.hpp"
#include "krylab/io.hpp"
#include "krylab/krylov.hpp"
#include "krylab/solver.hpp"

namespace py = pybind11;
using namespace krylab;

namespace {

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Window to_window(const std::pair<int, int>& w) { return {w.first, w.second}; }

std::vector<Window> to_windows(const std::vector<std::pair<int, int>>& ws) {
  std::vector<Window> out;
  for (const auto& w : ws) out.push_back(to_window(w));
  return out;
}

FeasibilityProblem problem_from(const KrylovForm& form, const std::string& family,
                                std::optional<std::vector<std::pair<int, int>>> windows,
                                bool diagonal_only, bool include_degenerate) {
  FeasibilityProblem p = make_problem(form, parse_family(family), diagonal_only, include_degenerate);
  if (windows) p.windows = to_windows(*windows);
  return p;
}

}  // namespace

PYBIND11_MODULE(_krylab, m) {
  m.doc() = "Krylov orthonormalization, weighted e-norm, constraint families and feasibility search";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericFailure>(m, "NumericFailure", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<KrylovForm>(m, "KrylovForm")
      .def_property_readonly("q", [](const KrylovForm& k) { return k.q.matrix(); })
      .def_property_readonly("h", [](const KrylovForm& k) { return k.h.matrix(); })
      .def_readonly("breakdown_index", &KrylovForm::breakdown_index)
      .def_readonly("subdiag", &KrylovForm::subdiag)
      .def_property_readonly("dim", &KrylovForm::dim);

  m.def("orthonormalize",
        [](const Matrix& t, const Vector& v, double tol) { return orthonormalize(Operator(t), v, tol); },
        py::arg("t"), py::arg("v"), py::arg("breakdown_tol") = kDefaultBreakdownTol);
  m.def("operator_norm", [](const Matrix& a) { return operator_norm(Operator(a)); });
  m.def("is_positive", [](const Matrix& a, double tol) { return is_positive(Operator(a), tol); },
        py::arg("a"), py::arg("tol") = 1e-12);
  m.def("spectrum", [](const Matrix& a) { return spectrum(Operator(a)).values; });
  m.def(
      "graph_norm",
      [](const Vector& x, const Matrix& t, int max_terms, double growth_tol) {
        const GraphNorm g = graph_norm(x, Operator(t), max_terms, growth_tol);
        return py::dict(py::arg("value") = g.value, py::arg("diverged") = g.diverged, py::arg("terms") = g.terms);
      },
      py::arg("x"), py::arg("t"), py::arg("max_terms") = 50, py::arg("growth_tol") = 1e-12);
  m.def("enorm", [](const Matrix& a) {
    const ENormValue e = enorm(Operator(a));
    return py::make_tuple(e.value, e.truncation_bound);
  });
  m.def("compression_defect", [](const KrylovForm& form, int k) {
    const CompressionDefect d = compression_defect(form, k);
    return py::dict(py::arg("value") = d.value, py::arg("closed_form") = d.closed_form,
                    py::arg("degenerate") = d.degenerate);
  });

  m.def("witness", [](std::pair<int, int> w, int n) {
    const DiagonalElement d = witness(to_window(w), n);
    return std::vector<double>(d.values().begin(), d.values().end());
  });
  m.def("in_A", [](std::vector<double> a, std::pair<int, int> w, double tol) {
        return to_py(to_json(in_A(DiagonalElement(std::move(a)), to_window(w), tol)));
      }, py::arg("a"), py::arg("window"), py::arg("tol") = kDefaultMembershipTol);
  m.def("in_B", [](std::vector<double> a, std::pair<int, int> w, double tol) {
        return to_py(to_json(in_B(DiagonalElement(std::move(a)), to_window(w), tol)));
      }, py::arg("a"), py::arg("window"), py::arg("tol") = kDefaultMembershipTol);
  m.def("in_F", [](std::vector<double> a, std::pair<int, int> w, const KrylovForm& form, double tol) {
        return to_py(to_json(in_F(DiagonalElement(std::move(a)), to_window(w), form, tol)));
      }, py::arg("a"), py::arg("window"), py::arg("form"), py::arg("tol") = kDefaultMembershipTol);

  m.def(
      "check_inclusion",
      [](const std::string& family, std::pair<int, int> first, std::pair<int, int> second, const KrylovForm& form,
         int samples, std::uint64_t seed) {
        const SetFamily fam = family == "A" ? SetFamily::A : family == "F" ? SetFamily::F
                                                                            : throw DomainError("family must be 'A' or 'F'");
        const InclusionReport r = check_inclusion(fam, to_window(first), to_window(second), form, samples, seed);
        const char* status = r.status == InclusionReport::Status::holds_on_samples ? "holds_on_samples"
                             : r.status == InclusionReport::Status::counterexample ? "counterexample"
                                                                                   : "vacuous";
        Json out{{"status", status}, {"members_tested", r.members_tested}, {"verdict", to_json(r.second_verdict)}};
        out["counterexample"] = r.counterexample ? to_json(*r.counterexample).at("a") : Json(nullptr);
        return to_py(out);
      },
      py::arg("family"), py::arg("first"), py::arg("second"), py::arg("form"), py::arg("samples") = 100,
      py::arg("seed") = 0);

  m.def(
      "penalty",
      [](std::vector<double> a, const KrylovForm& form, const std::string& family,
         std::optional<std::vector<std::pair<int, int>>> windows, bool diagonal_only) {
        return penalty(DiagonalElement(std::move(a)), problem_from(form, family, windows, diagonal_only, false));
      },
      py::arg("a"), py::arg("form"), py::arg("family") = "A∩F", py::arg("windows") = py::none(),
      py::arg("diagonal_only") = false);
  m.def(
      "search",
      [](const KrylovForm& form, const std::string& family, std::optional<std::vector<std::pair<int, int>>> windows,
         bool diagonal_only, bool include_degenerate, int restarts, int iterations, double grid_resolution,
         std::uint64_t seed) {
        FeasibilityProblem p = problem_from(form, family, windows, diagonal_only, include_degenerate);
        p.budget.restarts = restarts;
        p.budget.iterations = iterations;
        p.budget.grid_resolution = grid_resolution;
        return to_py(to_json(search(p, seed)));
      },
      py::arg("form"), py::arg("family") = "A∩F", py::arg("windows") = py::none(), py::arg("diagonal_only") = false,
      py::arg("include_degenerate") = false, py::arg("restarts") = 24, py::arg("iterations") = 300,
      py::arg("grid_resolution") = 0.05, py::arg("seed") = 0);
  m.def(
      "grid_oracle",
      [](const KrylovForm& form, double resolution, const std::string& family,
         std::optional<std::vector<std::pair<int, int>>> windows, bool diagonal_only) {
        const GridResult g = grid_oracle(problem_from(form, family, windows, diagonal_only, false), resolution);
        Json out{{"feasible", g.feasible}, {"nodes_visited", g.nodes_visited}};
        out["point"] = g.point ? to_json(*g.point).at("a") : Json(nullptr);
        return to_py(out);
      },
      py::arg("form"), py::arg("resolution"), py::arg("family") = "A∩F", py::arg("windows") = py::none(),
      py::arg("diagonal_only") = false);
  m.def("fip_audit", [](const std::vector<std::pair<int, int>>& windows, const KrylovForm& form) {
    return to_py(to_json(fip_audit(to_windows(windows), form)));
  });
  m.def(
      "evaluate_candidate",
      [](std::vector<double> a, const KrylovForm& form, double rank_tol) {
        const CandidateEvaluation e = evaluate_candidate(DiagonalElement(std::move(a)), form, rank_tol);
        return to_py(Json{{"residual", e.residual}, {"subspace", to_json(e.subspace)}});
      },
      py::arg("a"), py::arg("form"), py::arg("rank_tol") = kDefaultRankTol);
  m.def("run_audit", [](const py::object& config) {
    const AuditOutcome out = run_audit(parse_run_config(from_py(config)));
    return to_py(out.summary);
  });
}
