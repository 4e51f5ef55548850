#pragma once

// Whole-run orchestration: build the catalogs for one sphere count, compute
// the landscape, rates, or a verification trajectory, and emit every output
// file with its manifest. This is the layer the shared-library API wraps.

#include <cstdint>
#include <string>
#include <vector>

#include "core/exports.hpp"

namespace sticky {

struct RunOptions {
  int n = 6;
  double ds = 0.05;    // face sampling step; lines sample at ds / 5
  bool strict = false;  // halve steps and enforce mesh-quality convergence
  double kappa = 16.0;  // may be infinity: rates stay purely geometric
  RateConvention convention = RateConvention::leading_order;
  std::string config_path;  // simulate: required; rates: optional duration source
  std::string out_dir = ".";
  std::uint64_t seed = 0;  // 0: keep the config file's seed
  int jobs = 1;  // simulate: replica count (splits total_time, merges traces)
};

// Simulation configuration file: plain `key=value` lines, '#' comments.
// Keys: n, E, rho, m, dt, total_time, seed, classify_interval,
// confine_radius (optional), cutoff (optional).
struct SimConfig {
  SimParams params;
  double kappa = 0.0;  // closed-form bond weight of the configured potential
};
SimConfig parse_sim_config(const std::string& path);

struct LandscapeRun {
  LandscapeSummary summary;
  int modes0 = 0, modes1 = 0, modes2 = 0;
  std::vector<std::string> files;
};
// Catalogs + totals + per-class exports into out_dir.
LandscapeRun run_landscape(const RunOptions& options);

struct RatesRun {
  RateNetwork leading;
  RateNetwork restricted;
  double duration = 2300.0;  // geometric time for the expected-count table
  std::vector<std::string> files;
};
RatesRun run_rates(const RunOptions& options);

struct SimulateRun {
  SimTrace trace;  // merged over replicas
  double kappa = 0.0;
  std::vector<std::string> files;
};
SimulateRun run_simulate(const RunOptions& options);

struct CompareRun {
  double z10_theory = 0.0, z21_theory = 0.0;
  double z10_sim = 0.0, z21_sim = 0.0;
  double rank_corr = 0.0;
  std::vector<std::string> files;
};
// Reads a landscape/rates output directory and a simulate output directory
// (same n), and emits the comparison tables and plots into out_dir.
CompareRun run_compare(const std::string& theory_dir, const std::string& sim_dir,
                       const RunOptions& options);

}  // namespace sticky
