#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "krylab/io.hpp"
#include "krylab/solver.hpp"
#include "krylab/zoo.hpp"

namespace krylab {

/// Claim identifiers understood by the audit.
const std::vector<std::string>& known_claims();

struct RunConfig {
  std::vector<ZooSpec> zoo;
  std::vector<std::string> claims;
  SolverBudget budget;
  std::vector<ConstraintFamily> families{ConstraintFamily::AF};
  bool diagonal_windows_only = false;
  int inclusion_samples = 50;
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir = "out";
  bool include_degenerate_windows = false;
  bool grid_oracle = false;
  int threads = 0;  // 0: hardware concurrency
};

/// Strict parse: unknown keys, unknown claims and an empty zoo are ConfigErrors.
RunConfig parse_run_config(const Json& j);
RunConfig load_run_config(const std::filesystem::path& path);

/// The shift N = 8 configuration behind the golden report.
RunConfig golden_config();

struct AuditRow {
  std::string claim_id;
  std::string operator_id;
  int n = 0;
  std::string params;
  std::string verdict;  // pass | fail | vacuous | skip | inconclusive
  double margin = 0.0;
  std::string witness_path;  // relative to the output directory, empty if none
};

struct AuditOutcome {
  std::vector<AuditRow> rows;
  Json summary;
};

/// Header plus one line per row; fields containing commas are quoted.
std::string audit_csv(const std::vector<AuditRow>& rows);

/// Per-claim verdict counts and an overall status per claim.
Json summarize(const std::vector<AuditRow>& rows, const RunConfig& cfg);

/// Audits every zoo operator against the requested claims and writes
/// audit.csv, summary.json and witness files into cfg.output_dir.
AuditOutcome run_audit(const RunConfig& cfg);

/// Runs the feasibility search per (operator, family), writes
/// report-<operator>-<family>.json files and returns their contents.
std::vector<Json> run_feasibility(const RunConfig& cfg);

/// Least-squares fit of log D_k = c + k log(rate) over k with D_k > 0.
struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  int points = 0;
};
DecayFit fit_defect_decay(std::span<const double> defects);

/// Audit over the (seed-expanded) zoo with per-operator defect-decay fits,
/// aggregated into sweep.json.
Json run_sweep(const RunConfig& cfg);

/// Runs the golden configuration into out_dir and compares it against the
/// golden file. Returns the list of mismatches (empty on success).
std::vector<std::string> verify_golden(const std::filesystem::path& golden_path,
                                       const std::filesystem::path& out_dir);

}  // namespace krylab
