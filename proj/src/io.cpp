#include "krylab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "krylab/error.hpp"

namespace krylab {

namespace {

Json real_rows(const Matrix& m, bool imag) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

void read_rows(const Json& rows, Eigen::Index n, const char* name, Matrix& m, bool imag) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
    throw DimensionError(std::string("operator JSON: '") + name + "' must have n rows");
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      std::ostringstream msg;
      msg << "operator JSON: ragged row " << i << " in '" << name << "'";
      throw DimensionError(msg.str());
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const Json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) throw DomainError(std::string("operator JSON: non-numeric entry in '") + name + "'");
      const double v = x.get<double>();
      if (imag) m(i, j).imag(v);
      else m(i, j).real(v);
    }
  }
}

}  // namespace

Json to_json(const Operator& a) {
  return Json{{"n", a.dim()}, {"re", real_rows(a.matrix(), false)}, {"im", real_rows(a.matrix(), true)}};
}

Operator operator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("re") || !j.contains("im"))
    throw DomainError("operator JSON: expected object with keys n, re, im");
  if (!j.at("n").is_number_integer() || j.at("n").get<long long>() < 1)
    throw DomainError("operator JSON: n must be a positive integer");
  const auto n = static_cast<Eigen::Index>(j.at("n").get<long long>());
  Matrix m = Matrix::Zero(n, n);
  read_rows(j.at("re"), n, "re", m, false);
  read_rows(j.at("im"), n, "im", m, true);
  return Operator(std::move(m));
}

Operator read_operator(const std::filesystem::path& path) { return operator_from_json(read_json(path)); }

Json to_json(const KrylovForm& k) {
  return Json{{"q", to_json(k.q)},
              {"h", to_json(k.h)},
              {"breakdown", k.breakdown_index ? Json(*k.breakdown_index) : Json(nullptr)},
              {"subdiag", k.subdiag}};
}

KrylovForm krylov_from_json(const Json& j) {
  Operator q = operator_from_json(j.at("q"));
  Operator h = operator_from_json(j.at("h"));
  std::optional<int> b;
  if (!j.at("breakdown").is_null()) b = j.at("breakdown").get<int>();
  auto sub = j.at("subdiag").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(sub.size()) != h.dim() - 1)
    throw DimensionError("KrylovForm JSON: subdiag must have N-1 entries");
  return KrylovForm{std::move(q), std::move(h), b, std::move(sub)};
}

Json to_json(const DiagonalElement& d) {
  return Json{{"a", std::vector<double>(d.values().begin(), d.values().end())}};
}

DiagonalElement diagonal_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("a") || !j.at("a").is_array())
    throw DomainError("diagonal element JSON: expected {\"a\": [...]}");
  return DiagonalElement(j.at("a").get<std::vector<double>>());
}

Json to_json(Window w) { return Json::array({w.k, w.l}); }

Json to_json(const MembershipVerdict& v) {
  return Json{{"member", v.member}, {"margin", v.margin}, {"worst_constraint", v.worst_constraint}};
}

Json to_json(const SubspaceCandidate& s) {
  std::vector<int> basis;
  for (Eigen::Index i = 0; i < s.projection.dim(); ++i)
    if (s.projection(i, i).real() == 1.0) basis.push_back(static_cast<int>(i + 1));
  return Json{{"rank", s.rank},
              {"kernel_dim", s.kernel_dim},
              {"invariance_defect", s.invariance_defect},
              {"trivial", s.trivial},
              {"basis", basis}};
}

Json to_json(const FeasibilityReport& r) {
  Json margins = Json::array();
  for (const WindowMargin& m : r.per_window_margins)
    margins.push_back(Json{{"window", to_json(m.window)}, {"side", m.side_margin}, {"f", m.f_margin}});
  Json out{{"verdict", to_string(r.verdict)},
           {"point", to_json(r.point)},
           {"best_penalty", r.best_penalty},
           {"per_window_margins", std::move(margins)},
           {"residual", r.residual},
           {"vacuous", r.vacuous},
           {"restarts_run", r.restarts_run},
           {"annealing_used", r.annealing_used}};
  out["subspace"] = r.subspace ? to_json(*r.subspace) : Json(nullptr);
  return out;
}

Json to_json(const FipAuditRow& r) {
  Json windows = Json::array();
  for (Window w : r.windows) windows.push_back(to_json(w));
  Json per = Json::array();
  for (const FipWindowResult& p : r.per_window)
    per.push_back(Json{{"window", to_json(p.window)}, {"a_side", to_json(p.a_side)}, {"f_side", to_json(p.f_side)}});
  return Json{{"windows", std::move(windows)},
              {"envelope", to_json(r.envelope)},
              {"passes", r.passes},
              {"failing_side", to_string(r.failing)},
              {"per_window", std::move(per)}};
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("JSON parse error in " + path.string() + ": " + e.what());
  }
}

}  // namespace krylab
