#include "krylab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "krylab/enorm.hpp"
#include "krylab/error.hpp"
#include "krylab/seeding.hpp"

namespace krylab {

const std::vector<std::string>& known_claims() {
  static const std::vector<std::string> claims{"2.13", "2.16", "2.17", "2.18", "2.19", "2.31",
                                               "2.32", "2.33", "2.35", "2.44", "2.48", "2.51"};
  return claims;
}

namespace {

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

}  // namespace

RunConfig parse_run_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"zoo", "claims", "solver", "inclusion_samples", "master_seed", "output_dir",
                  "include_degenerate_windows", "grid_oracle", "threads"},
                 "config");
  RunConfig cfg;
  if (!j.contains("zoo") || !j.at("zoo").is_array()) throw ConfigError("config: 'zoo' must be an array");
  for (const Json& z : j.at("zoo")) {
    auto specs = zoo_specs_from_json(z);
    cfg.zoo.insert(cfg.zoo.end(), specs.begin(), specs.end());
  }
  if (cfg.zoo.empty()) throw ConfigError("config: zoo is empty");
  std::set<std::string> ids;
  for (const ZooSpec& z : cfg.zoo)
    if (!ids.insert(z.id).second) throw ConfigError("config: duplicate operator id '" + z.id + "'");

  cfg.claims = j.contains("claims") ? get_as<std::vector<std::string>>(j, "claims") : known_claims();
  for (const std::string& c : cfg.claims)
    if (std::find(known_claims().begin(), known_claims().end(), c) == known_claims().end())
      throw ConfigError("config: unknown claim id '" + c + "'");

  if (j.contains("solver")) {
    const Json& s = j.at("solver");
    if (!s.is_object()) throw ConfigError("config: 'solver' must be an object");
    reject_unknown(s, {"restarts", "iterations", "grid_resolution", "anneal_steps", "families",
                       "diagonal_windows_only"},
                   "solver");
    if (s.contains("restarts")) cfg.budget.restarts = get_as<int>(s, "restarts");
    if (s.contains("iterations")) cfg.budget.iterations = get_as<int>(s, "iterations");
    if (s.contains("grid_resolution")) cfg.budget.grid_resolution = get_as<double>(s, "grid_resolution");
    if (s.contains("anneal_steps")) cfg.budget.anneal_steps = get_as<int>(s, "anneal_steps");
    if (s.contains("diagonal_windows_only")) cfg.diagonal_windows_only = get_as<bool>(s, "diagonal_windows_only");
    if (s.contains("families")) {
      cfg.families.clear();
      for (const auto& f : get_as<std::vector<std::string>>(s, "families")) cfg.families.push_back(parse_family(f));
      if (cfg.families.empty()) throw ConfigError("solver: families must not be empty");
    }
  }
  if (j.contains("inclusion_samples")) cfg.inclusion_samples = get_as<int>(j, "inclusion_samples");
  if (cfg.inclusion_samples < 0) throw ConfigError("config: inclusion_samples must be >= 0");
  if (j.contains("master_seed")) cfg.master_seed = get_as<std::uint64_t>(j, "master_seed");
  if (j.contains("output_dir")) cfg.output_dir = get_as<std::string>(j, "output_dir");
  if (j.contains("include_degenerate_windows"))
    cfg.include_degenerate_windows = get_as<bool>(j, "include_degenerate_windows");
  if (j.contains("grid_oracle")) cfg.grid_oracle = get_as<bool>(j, "grid_oracle");
  if (j.contains("threads")) cfg.threads = get_as<int>(j, "threads");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  Json j;
  try {
    j = read_json(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_run_config(j);
}

RunConfig golden_config() {
  RunConfig cfg;
  ZooSpec shift{.kind = ZooKind::shift, .n = 8};
  shift.id = default_id(shift);
  cfg.zoo.push_back(shift);
  cfg.claims = known_claims();
  cfg.master_seed = 2024;
  cfg.inclusion_samples = 50;
  cfg.threads = 1;
  return cfg;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string window_str(Window w) { return to_string(w); }

struct OperatorAudit {
  std::vector<AuditRow> rows;
  std::vector<std::pair<std::filesystem::path, std::string>> files;
};

// Produces the rows for one operator. File writes are returned rather than
// performed so that the caller controls ordering.
class OperatorAuditor {
 public:
  OperatorAuditor(const ZooSpec& spec, const RunConfig& cfg, std::uint64_t seed)
      : spec_(spec), cfg_(cfg), seed_(seed) {}

  OperatorAudit run() {
    const ZooInstance inst = build(spec_);
    id_ = inst.id;
    n_ = static_cast<int>(inst.t.dim());
    const KrylovForm form = orthonormalize(inst.t, inst.v);
    if (form.breakdown_index) {
      std::ostringstream why;
      why << "skip=invariant subspace found at step " << *form.breakdown_index;
      for (const std::string& c : cfg_.claims) add(c, why.str(), "skip", 0.0);
      return std::move(out_);
    }
    form_ = &form;
    windows_ = all_windows(n_, cfg_.include_degenerate_windows);
    defects_ = defect_profile(form);
    for (const std::string& c : cfg_.claims) audit_claim(c);
    return std::move(out_);
  }

 private:
  void add(const std::string& claim, std::string params, std::string verdict, double margin,
           std::string witness_path = {}) {
    out_.rows.push_back({claim, id_, n_, std::move(params), std::move(verdict), margin, std::move(witness_path)});
  }

  std::string save_witness(const std::string& claim, const DiagonalElement& d) {
    std::ostringstream name;
    name << "witnesses/" << id_ << "/" << claim << "-" << out_.rows.size() << ".json";
    out_.files.emplace_back(name.str(), to_json(d).dump(2) + "\n");
    return name.str();
  }

  std::uint64_t next_seed() { return derive_seed(seed_, counter_++); }

  std::vector<std::pair<Window, Window>> nested_pairs() const {
    std::vector<std::pair<Window, Window>> pairs;
    for (Window outer : windows_)
      for (Window inner : windows_)
        if (inner != outer && outer.k <= inner.k && inner.l <= outer.l) pairs.emplace_back(outer, inner);
    return pairs;
  }

  void inclusion_rows(const std::string& claim, SetFamily family) {
    for (const auto& [outer, inner] : nested_pairs()) {
      const InclusionReport r = check_inclusion(family, outer, inner, *form_, cfg_.inclusion_samples, next_seed());
      std::ostringstream params;
      params << "w=" << window_str(outer) << ";w'=" << window_str(inner) << ";tested=" << r.members_tested;
      switch (r.status) {
        case InclusionReport::Status::holds_on_samples:
          add(claim, params.str(), "pass", r.second_verdict.margin);
          break;
        case InclusionReport::Status::counterexample:
          params << ";worst=" << r.second_verdict.worst_constraint;
          add(claim, params.str(), "fail", r.second_verdict.margin, save_witness(claim, *r.counterexample));
          break;
        case InclusionReport::Status::vacuous:
          add(claim, params.str(), "vacuous", 0.0);
          break;
      }
    }
  }

  void witness_rows(const std::string& claim) {
    for (Window w : windows_) {
      const DiagonalElement wit = witness(w, n_);
      const std::string params = "w=" + window_str(w);
      if (claim == "2.17") {
        add(claim, params, telescoping_deviation(w) == 0.0 ? "pass" : "fail", -telescoping_deviation(w));
        continue;
      }
      const MembershipVerdict a = in_A(wit, w);
      const MembershipVerdict f = f_verdict(f_side_value(wit, w.k, *form_), w, defects_);
      const MembershipVerdict& v = claim == "2.16" ? a : claim == "2.18" ? f : (a.margin <= f.margin ? a : f);
      const bool ok = claim == "2.16" ? a.member : claim == "2.18" ? f.member : (a.member && f.member);
      if (ok) add(claim, params, "pass", v.margin);
      else add(claim, params + ";worst=" + v.worst_constraint, "fail", v.margin, save_witness(claim, wit));
    }
  }

  // max |A_{k,l} - (1/2)(E_{l+1} - E_k)| and max over s of
  // |A_{k,l}(E_{s+1} - E_s) - (1/2)(E_{s+1} - E_s)|; exact zero expected.
  double telescoping_deviation(Window w) const {
    const Operator a = embed(witness(w, n_));
    const auto e = [&](int j) { return j > n_ ? Operator::identity(n_) : projection(j, n_); };
    double dev = (a - Complex(0.5) * (e(w.l + 1) - e(w.k))).matrix().cwiseAbs().maxCoeff();
    for (int s = w.k; s <= w.l; ++s) {
      const Operator diff = e(s + 1) - e(s);
      dev = std::max(dev, (a * diff - Complex(0.5) * diff).matrix().cwiseAbs().maxCoeff());
    }
    return dev;
  }

  void fip_rows() {
    std::vector<std::vector<Window>> families;
    for (Window w : windows_) families.push_back({w});
    for (std::size_t i = 0; i < windows_.size(); ++i)
      for (std::size_t j = i + 1; j < windows_.size(); ++j) families.push_back({windows_[i], windows_[j]});
    for (const auto& fam : families) {
      const FipAuditRow r = fip_audit(fam, *form_, defects_);
      double margin = std::numeric_limits<double>::infinity();
      for (const auto& p : r.per_window) margin = std::min({margin, p.a_side.margin, p.f_side.margin});
      std::ostringstream params;
      params << "windows=";
      for (std::size_t i = 0; i < fam.size(); ++i) params << (i ? "+" : "") << window_str(fam[i]);
      params << ";envelope=" << window_str(r.envelope) << ";failing=" << to_string(r.failing);
      if (r.passes) add("2.33", params.str(), "pass", margin);
      else add("2.33", params.str(), "fail", margin, save_witness("2.33", witness(r.envelope, n_)));
    }
  }

  void defect_rows() {
    const double tnorm = operator_norm(form_->h);
    for (int k = 1; k < n_; ++k) {
      const CompressionDefect d = compression_defect(*form_, k);
      const double envelope = enorm_weight(k, k + 1) * tnorm;
      const bool ok = std::abs(d.value - d.closed_form) <= 1e-13 && d.value <= envelope + 1e-15;
      std::ostringstream params;
      params << "k=" << k << ";defect=" << format_double(d.value);
      add("2.44", params.str(), ok ? "pass" : "fail", envelope - d.value);
    }
  }

  const FeasibilityReport& searched(ConstraintFamily fam, bool diagonal) {
    const auto key = std::make_pair(static_cast<int>(fam), diagonal);
    auto it = searches_.find(key);
    if (it == searches_.end()) {
      FeasibilityProblem p = make_problem(*form_, fam, diagonal, cfg_.include_degenerate_windows);
      p.budget = cfg_.budget;
      const std::uint64_t seed = derive_seed(seed_, 1'000'000 + 2 * static_cast<std::uint64_t>(fam) + diagonal);
      it = searches_.emplace(key, search(p, seed)).first;
    }
    return it->second;
  }

  static std::string search_params(ConstraintFamily fam, bool diagonal) {
    return "family=" + to_string(fam) + ";windows=" + (diagonal ? "diagonal" : "all");
  }

  void feasibility_rows() {
    for (ConstraintFamily fam : cfg_.families) {
      const bool diagonal = cfg_.diagonal_windows_only;
      const FeasibilityReport& r = searched(fam, diagonal);
      double margin = std::numeric_limits<double>::infinity();
      for (const WindowMargin& m : r.per_window_margins) margin = std::min(margin, m.margin());
      if (r.per_window_margins.empty()) margin = 0.0;
      std::ostringstream name;
      name << "reports/" << id_ << "-" << (fam == ConstraintFamily::AF ? "AF" : "BF") << "-"
           << (diagonal ? "diagonal" : "all") << ".json";
      out_.files.emplace_back(name.str(), to_json(r).dump(2) + "\n");
      const std::string verdict = r.verdict == Verdict::feasible             ? "pass"
                                  : r.verdict == Verdict::infeasible_on_grid ? "fail"
                                                                             : "inconclusive";
      add("2.35", search_params(fam, diagonal) + ";verdict=" + to_string(r.verdict), verdict, margin, name.str());
    }
  }

  // Conclusions drawn from a feasible M: zero commutation residual (2.48) and
  // a nontrivial invariant range (2.51). Evaluated on the configured windows
  // and on the diagonal windows (k, k), which are all the proof uses.
  void consequence_rows(const std::string& claim) {
    for (ConstraintFamily fam : cfg_.families) {
      std::vector<bool> kinds{cfg_.diagonal_windows_only};
      if (!cfg_.diagonal_windows_only) kinds.push_back(true);
      for (bool diagonal : kinds) {
        const FeasibilityReport& r = searched(fam, diagonal);
        const std::string params = search_params(fam, diagonal);
        if (r.verdict != Verdict::feasible) {
          add(claim, params + ";no feasible M (" + to_string(r.verdict) + ")", "vacuous", 0.0);
          continue;
        }
        const CandidateEvaluation eval = evaluate_candidate(r.point, *form_);
        if (claim == "2.48") {
          const bool ok = eval.residual <= 1e-12;
          add(claim, params + ";residual=" + format_double(eval.residual), ok ? "pass" : "fail", -eval.residual,
              ok ? std::string() : save_witness(claim, r.point));
        } else {
          const SubspaceCandidate& s = eval.subspace;
          const bool ok = !s.trivial && s.invariance_defect <= 1e-12;
          std::ostringstream p;
          p << params << ";rank=" << s.rank << ";kernel_dim=" << s.kernel_dim
            << ";defect=" << format_double(s.invariance_defect);
          add(claim, p.str(), ok ? "pass" : "fail", -s.invariance_defect,
              ok ? std::string() : save_witness(claim, r.point));
        }
      }
    }
  }

  void audit_claim(const std::string& c) {
    if (c == "2.13") inclusion_rows(c, SetFamily::A);
    else if (c == "2.31") inclusion_rows(c, SetFamily::A);
    else if (c == "2.32") inclusion_rows(c, SetFamily::F);
    else if (c == "2.16" || c == "2.17" || c == "2.18" || c == "2.19") witness_rows(c);
    else if (c == "2.33") fip_rows();
    else if (c == "2.35") feasibility_rows();
    else if (c == "2.44") defect_rows();
    else if (c == "2.48" || c == "2.51") consequence_rows(c);
    else throw ConfigError("unknown claim id '" + c + "'");
  }

  const ZooSpec& spec_;
  const RunConfig& cfg_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::string id_;
  int n_ = 0;
  const KrylovForm* form_ = nullptr;
  std::vector<Window> windows_;
  std::vector<double> defects_;
  std::map<std::pair<int, bool>, FeasibilityReport> searches_;
  OperatorAudit out_;
};

// Runs task(i) for i in [0, count) on a small thread pool; results are
// stored by index, so the merge order never depends on scheduling.
template <class Result, class Task>
std::vector<Result> parallel_map(std::size_t count, int threads, Task task) {
  std::vector<Result> results(count);
  std::vector<std::exception_ptr> errors(count);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers =
      std::min<std::size_t>(count, threads > 0 ? static_cast<std::size_t>(threads) : hw);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::vector<OperatorAudit> audit_all(const RunConfig& cfg) {
  return parallel_map<OperatorAudit>(cfg.zoo.size(), cfg.threads, [&](std::size_t i) {
    return OperatorAuditor(cfg.zoo[i], cfg, derive_seed(cfg.master_seed, i)).run();
  });
}

std::string claim_status(const Json& counts) {
  if (counts.at("fail").get<int>() > 0) return "fail";
  if (counts.at("inconclusive").get<int>() > 0) return "inconclusive";
  if (counts.at("pass").get<int>() > 0) return "pass";
  if (counts.at("vacuous").get<int>() > 0) return "vacuous";
  return "skip";
}

void write_files(const std::filesystem::path& dir, const std::vector<OperatorAudit>& audits) {
  for (const OperatorAudit& a : audits)
    for (const auto& [rel, text] : a.files) write_text(dir / rel, text);
}

}  // namespace

std::string audit_csv(const std::vector<AuditRow>& rows) {
  std::ostringstream out;
  out << "claim_id,operator_id,N,params,verdict,margin,witness_path\n";
  for (const AuditRow& r : rows) {
    out << csv_field(r.claim_id) << ',' << csv_field(r.operator_id) << ',' << r.n << ','
        << csv_field(r.params) << ',' << r.verdict << ',' << format_double(r.margin) << ','
        << csv_field(r.witness_path) << '\n';
  }
  return out.str();
}

Json summarize(const std::vector<AuditRow>& rows, const RunConfig& cfg) {
  Json claims = Json::object();
  for (const std::string& c : cfg.claims)
    claims[c] = Json{{"pass", 0}, {"fail", 0}, {"vacuous", 0}, {"skip", 0}, {"inconclusive", 0}};
  for (const AuditRow& r : rows) claims[r.claim_id][r.verdict] = claims[r.claim_id][r.verdict].get<int>() + 1;
  for (auto& [id, counts] : claims.items()) counts["status"] = claim_status(counts);
  Json ops = Json::array();
  for (const ZooSpec& z : cfg.zoo) ops.push_back(z.id);
  return Json{{"master_seed", cfg.master_seed}, {"operators", ops}, {"rows", rows.size()}, {"claims", claims}};
}

AuditOutcome run_audit(const RunConfig& cfg) {
  const std::vector<OperatorAudit> audits = audit_all(cfg);
  AuditOutcome out;
  for (const OperatorAudit& a : audits) out.rows.insert(out.rows.end(), a.rows.begin(), a.rows.end());
  out.summary = summarize(out.rows, cfg);
  write_files(cfg.output_dir, audits);
  write_text(cfg.output_dir / "audit.csv", audit_csv(out.rows));
  write_text(cfg.output_dir / "summary.json", out.summary.dump(2) + "\n");
  return out;
}

std::vector<Json> run_feasibility(const RunConfig& cfg) {
  struct Job {
    std::size_t op;
    std::size_t family;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cfg.zoo.size(); ++i)
    for (std::size_t f = 0; f < cfg.families.size(); ++f) jobs.push_back({i, f});

  const std::vector<Json> reports = parallel_map<Json>(jobs.size(), cfg.threads, [&](std::size_t j) {
    const auto [op, fi] = jobs[j];
    const ZooInstance inst = build(cfg.zoo[op]);
    const ConstraintFamily fam = cfg.families[fi];
    Json out{{"operator", inst.id},
             {"N", inst.t.dim()},
             {"family", to_string(fam)},
             {"windows", cfg.diagonal_windows_only ? "diagonal" : "all"},
             {"include_degenerate_windows", cfg.include_degenerate_windows}};
    const KrylovForm form = orthonormalize(inst.t, inst.v);
    if (form.breakdown_index) {
      out["skipped"] = "invariant subspace found at step " + std::to_string(*form.breakdown_index);
      return out;
    }
    FeasibilityProblem p = make_problem(form, fam, cfg.diagonal_windows_only, cfg.include_degenerate_windows);
    p.budget = cfg.budget;
    const FeasibilityReport r = search(p, derive_seed(derive_seed(cfg.master_seed, op), 1'000'000 + fi));
    out["report"] = to_json(r);
    if (cfg.grid_oracle) {
      if (inst.t.dim() <= 8) {
        const GridResult g = grid_oracle(p, cfg.budget.grid_resolution);
        out["oracle"] = Json{{"verdict", g.feasible ? "feasible" : "infeasible_on_grid"},
                             {"point", g.point ? to_json(*g.point) : Json(nullptr)},
                             {"nodes_visited", g.nodes_visited},
                             {"agreement", g.feasible == (r.verdict == Verdict::feasible)}};
      } else {
        out["oracle"] = Json{{"error", "grid oracle requires N <= 8"}};
      }
    }
    return out;
  });

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const std::string fam = cfg.families[jobs[j].family] == ConstraintFamily::AF ? "AF" : "BF";
    write_text(cfg.output_dir / ("report-" + cfg.zoo[jobs[j].op].id + "-" + fam + ".json"),
               reports[j].dump(2) + "\n");
  }
  return reports;
}

DecayFit fit_defect_decay(std::span<const double> defects) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < defects.size(); ++i)
    if (defects[i] > 0.0) pts.emplace_back(static_cast<double>(i + 1), std::log(defects[i]));
  DecayFit fit;
  fit.points = static_cast<int>(pts.size());
  if (pts.size() < 2) {
    fit.rate = std::numeric_limits<double>::quiet_NaN();
    fit.intercept = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.rate = std::exp(slope);
  fit.intercept = (sy - slope * sx) / m;
  return fit;
}

Json run_sweep(const RunConfig& cfg) {
  const std::vector<OperatorAudit> audits = audit_all(cfg);
  std::vector<AuditRow> rows;
  for (const OperatorAudit& a : audits) rows.insert(rows.end(), a.rows.begin(), a.rows.end());
  write_files(cfg.output_dir, audits);
  write_text(cfg.output_dir / "audit.csv", audit_csv(rows));
  write_text(cfg.output_dir / "summary.json", summarize(rows, cfg).dump(2) + "\n");

  const std::vector<Json> per_op = parallel_map<Json>(cfg.zoo.size(), cfg.threads, [&](std::size_t i) {
    const ZooInstance inst = build(cfg.zoo[i]);
    const KrylovForm form = orthonormalize(inst.t, inst.v);
    std::vector<double> defects = defect_profile(form);
    defects.pop_back();  // D_N = 0 by construction
    const DecayFit fit = fit_defect_decay(defects);
    const auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
    Json op{{"id", inst.id},
            {"N", inst.t.dim()},
            {"breakdown", form.breakdown_index ? Json(*form.breakdown_index) : Json(nullptr)},
            {"decay", Json{{"rate", num(fit.rate)}, {"intercept", num(fit.intercept)}, {"points", fit.points}}}};
    Json claims = Json::object();
    for (const AuditRow& r : audits[i].rows) {
      Json& c = claims[r.claim_id];
      if (c.is_null()) c = Json{{"pass", 0}, {"fail", 0}, {"vacuous", 0}, {"skip", 0}, {"inconclusive", 0}};
      c[r.verdict] = c[r.verdict].get<int>() + 1;
    }
    for (auto& [id, counts] : claims.items()) counts["status"] = claim_status(counts);
    op["claims"] = claims;
    return op;
  });

  Json aggregate = Json::object();
  for (const std::string& c : cfg.claims) {
    int pass = 0, fail = 0, total = 0;
    for (const Json& op : per_op) {
      if (!op.at("claims").contains(c)) continue;
      const std::string s = op.at("claims").at(c).at("status").get<std::string>();
      ++total;
      pass += s == "pass";
      fail += s == "fail";
    }
    aggregate[c] = Json{{"operators", total},
                        {"pass", pass},
                        {"fail", fail},
                        {"pass_rate", pass + fail > 0 ? Json(static_cast<double>(pass) / (pass + fail)) : Json(nullptr)}};
  }
  double max_rate = -1.0;
  for (const Json& op : per_op)
    if (!op.at("decay").at("rate").is_null()) max_rate = std::max(max_rate, op.at("decay").at("rate").get<double>());

  Json out{{"master_seed", cfg.master_seed},
           {"operators", per_op},
           {"claims", aggregate},
           {"max_decay_rate", max_rate >= 0.0 ? Json(max_rate) : Json(nullptr)}};
  write_text(cfg.output_dir / "sweep.json", out.dump(2) + "\n");
  return out;
}

namespace {

bool params_match(const std::string& params, const std::string& key) {
  return params.rfind(key, 0) == 0 && (params.size() == key.size() || params[key.size()] == ';');
}

}  // namespace

std::vector<std::string> verify_golden(const std::filesystem::path& golden_path,
                                       const std::filesystem::path& out_dir) {
  const Json golden = read_json(golden_path);
  RunConfig cfg = golden_config();
  cfg.output_dir = out_dir;
  const AuditOutcome run = run_audit(cfg);

  std::vector<std::string> mismatches;
  for (const auto& [claim, status] : golden.at("claim_status").items()) {
    if (!run.summary.at("claims").contains(claim)) {
      mismatches.push_back("claim " + claim + " missing from summary");
      continue;
    }
    const auto got = run.summary.at("claims").at(claim).at("status").get<std::string>();
    if (got != status.get<std::string>())
      mismatches.push_back("claim " + claim + ": status " + got + ", golden " + status.get<std::string>());
  }
  for (const Json& exp : golden.at("rows")) {
    const auto claim = exp.at("claim").get<std::string>();
    const auto key = exp.at("key").get<std::string>();
    const auto it = std::find_if(run.rows.begin(), run.rows.end(), [&](const AuditRow& r) {
      return r.claim_id == claim && params_match(r.params, key);
    });
    const std::string where = "row " + claim + " [" + key + "]";
    if (it == run.rows.end()) {
      mismatches.push_back(where + ": missing");
      continue;
    }
    if (it->verdict != exp.at("verdict").get<std::string>())
      mismatches.push_back(where + ": verdict " + it->verdict + ", golden " + exp.at("verdict").get<std::string>());
    if (exp.contains("margin") && std::abs(it->margin - exp.at("margin").get<double>()) > 1e-15)
      mismatches.push_back(where + ": margin " + format_double(it->margin) + ", golden " +
                           format_double(exp.at("margin").get<double>()));
    if (exp.contains("witness")) {
      if (it->witness_path.empty()) {
        mismatches.push_back(where + ": no witness file");
      } else if (read_json(out_dir / it->witness_path) != exp.at("witness")) {
        mismatches.push_back(where + ": witness differs");
      }
    }
  }
  return mismatches;
}

}  // namespace krylab
