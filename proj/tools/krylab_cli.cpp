// Command-line entry points: audit, feasibility, sweep, zoo list, verify-golden.
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "krylab/error.hpp"
#include "krylab/harness.hpp"

#ifndef KRYLAB_GOLDEN_PATH
#define KRYLAB_GOLDEN_PATH "tests/golden/shift8_golden.json"
#endif

namespace {

constexpr int kExitRan = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitError = 2;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool degenerate = false;
  bool grid_oracle = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seed", f.seed, "Master seed (overrides master_seed)");
  cmd->add_flag("--include-degenerate-windows", f.degenerate, "Also use windows with l = N");
  cmd->add_flag("--grid-oracle", f.grid_oracle, "Cross-check feasibility verdicts with the grid oracle");
}

krylab::RunConfig load(const CommonFlags& f) {
  krylab::RunConfig cfg = krylab::load_run_config(f.config);
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (f.seed) cfg.master_seed = *f.seed;
  cfg.include_degenerate_windows |= f.degenerate;
  cfg.grid_oracle |= f.grid_oracle;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"krylab: Krylov-basis audit and feasibility laboratory"};
  app.require_subcommand(1);

  CommonFlags audit_flags, feas_flags, sweep_flags;
  auto* audit = app.add_subcommand("audit", "Evaluate claim predicates for every zoo operator");
  add_common(audit, audit_flags);
  auto* feas = app.add_subcommand("feasibility", "Search for a point in the grand intersection");
  add_common(feas, feas_flags);
  auto* sweep = app.add_subcommand("sweep", "Audit with defect-decay fits over seed ranges, aggregated");
  add_common(sweep, sweep_flags);

  auto* zoo = app.add_subcommand("zoo", "Operator zoo");
  zoo->require_subcommand(1);
  auto* zoo_list = zoo->add_subcommand("list", "List zoo kinds, or the operators of a config");
  std::string zoo_config;
  zoo_list->add_option("--config", zoo_config, "Run configuration (JSON)")->check(CLI::ExistingFile);

  auto* golden = app.add_subcommand("verify-golden", "Re-run the shift N = 8 golden audit and compare");
  std::string golden_path = KRYLAB_GOLDEN_PATH;
  std::string golden_out = "golden-run";
  golden->add_option("--golden", golden_path, "Golden report");
  golden->add_option("--out", golden_out, "Output directory for the run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitRan : kExitError;
  }

  try {
    if (*audit) {
      const auto cfg = load(audit_flags);
      const auto outcome = krylab::run_audit(cfg);
      std::cout << "audit: " << outcome.rows.size() << " rows written to " << cfg.output_dir.string() << "\n";
      for (const auto& [claim, counts] : outcome.summary.at("claims").items())
        std::cout << "  " << claim << ": " << counts.at("status").get<std::string>() << "\n";
    } else if (*feas) {
      const auto cfg = load(feas_flags);
      for (const auto& r : krylab::run_feasibility(cfg)) {
        std::cout << r.at("operator").get<std::string>() << " " << r.at("family").get<std::string>() << ": ";
        if (r.contains("skipped")) std::cout << "skipped (" << r.at("skipped").get<std::string>() << ")";
        else std::cout << r.at("report").at("verdict").get<std::string>();
        if (r.contains("oracle") && r.at("oracle").contains("agreement"))
          std::cout << " oracle_agreement=" << (r.at("oracle").at("agreement").get<bool>() ? "true" : "false");
        std::cout << "\n";
      }
    } else if (*sweep) {
      const auto cfg = load(sweep_flags);
      const auto out = krylab::run_sweep(cfg);
      std::cout << "sweep: " << out.at("operators").size() << " operators, max decay rate "
                << out.at("max_decay_rate").dump() << "\n";
    } else if (*zoo_list) {
      if (zoo_config.empty()) {
        for (auto kind : krylab::zoo_kinds()) std::cout << krylab::to_string(kind) << "\n";
      } else {
        const auto cfg = krylab::load_run_config(zoo_config);
        for (const auto& spec : cfg.zoo) {
          const auto inst = krylab::build(spec);
          std::cout << inst.id << "\t" << krylab::to_string(spec.kind) << "\tN=" << spec.n << "\n";
        }
      }
    } else if (*golden) {
      const auto mismatches = krylab::verify_golden(golden_path, golden_out);
      for (const auto& m : mismatches) std::cout << "MISMATCH " << m << "\n";
      std::cout << (mismatches.empty() ? "golden report matches\n" : "golden report differs\n");
      return mismatches.empty() ? kExitRan : kExitMismatch;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitRan;
}
