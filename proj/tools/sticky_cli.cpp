// Command-line front end. Orchestration only: every computation happens
// behind the shared-library C interface.
//
// Exit codes: 0 ok, 1 internal numerical failure, 2 missing input,
// 3 inconsistent or invalid inputs.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "sticky/sticky.h"

namespace {

int report(sticky_status status) {
  if (status != STICKY_OK) std::fprintf(stderr, "error: %s\n", sticky_last_error());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-energy landscape of short-ranged sticky spheres"};
  app.set_version_flag("--version", std::string(sticky_version()));
  app.require_subcommand(1);

  // ---- landscape ----
  int n = 6;
  double ds = 0.05;
  bool strict = false;
  double kappa = 16.0;
  std::string out_dir = ".";
  CLI::App* landscape = app.add_subcommand(
      "landscape", "Catalog all manifolds up to dimension two and export them");
  landscape->add_option("--n", n, "sphere count (4..8)")->capture_default_str();
  landscape->add_option("--ds", ds, "sampling step")->capture_default_str();
  landscape->add_flag("--strict", strict, "halve steps, enforce mesh convergence");
  landscape->add_option("--kappa", kappa, "bond weight for the free-energy column")
      ->capture_default_str();
  landscape->add_option("--out", out_dir, "output directory")->capture_default_str();

  // ---- rates ----
  std::string convention = "leading";
  std::string config_path;
  CLI::App* rates = app.add_subcommand(
      "rates", "Transition-rate matrix between rigid modes in geometric units");
  rates->add_option("--n", n, "sphere count (4..8)")->capture_default_str();
  rates->add_option("--kappa", kappa, "bond weight (accepts inf)")
      ->capture_default_str();
  rates->add_option("--convention", convention, "leading or restricted")
      ->check(CLI::IsMember({"leading", "restricted"}))
      ->capture_default_str();
  rates->add_option("--config", config_path,
                    "simulation config supplying the expected-count duration");
  rates->add_option("--out", out_dir, "output directory")->capture_default_str();

  // ---- simulate ----
  std::uint64_t seed = 0;
  int jobs = 1;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Overdamped Langevin verification trajectory from a config file");
  simulate->add_option("--config", config_path, "key=value run configuration")
      ->required();
  simulate->add_option("--seed", seed, "override the config seed (0 keeps it)")
      ->capture_default_str();
  simulate->add_option("--jobs", jobs, "replica count; splits total_time")
      ->capture_default_str();
  simulate->add_option("--out", out_dir, "output directory")->capture_default_str();

  // ---- compare ----
  std::string theory_dir, sim_dir;
  CLI::App* compare = app.add_subcommand(
      "compare", "Theory-versus-simulation tables and plots from two run directories");
  compare->add_option("theory_dir", theory_dir, "landscape + rates output directory")
      ->required();
  compare->add_option("sim_dir", sim_dir, "simulate output directory")->required();
  compare->add_option("--out", out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;  // usage problems are inconsistent inputs
  }

  if (landscape->parsed()) {
    const int code =
        report(sticky_run_landscape(n, ds, strict ? 1 : 0, kappa, out_dir.c_str()));
    if (code == 0) std::printf("landscape written to %s\n", out_dir.c_str());
    return code;
  }
  if (rates->parsed()) {
    if (!(kappa > 0.0) || std::isnan(kappa)) {
      std::fprintf(stderr, "error: --kappa must be positive (or inf)\n");
      return 3;
    }
    const sticky_convention conv = convention == "restricted"
                                       ? STICKY_RATES_RESTRICTED
                                       : STICKY_RATES_LEADING;
    const int code = report(sticky_run_rates(
        n, kappa, conv, config_path.empty() ? nullptr : config_path.c_str(),
        out_dir.c_str()));
    if (code == 0) std::printf("rates written to %s\n", out_dir.c_str());
    return code;
  }
  if (simulate->parsed()) {
    const int code =
        report(sticky_run_simulate(config_path.c_str(), out_dir.c_str(), seed, jobs));
    if (code == 0) std::printf("simulation written to %s\n", out_dir.c_str());
    return code;
  }
  if (compare->parsed()) {
    const int code = report(
        sticky_run_compare(theory_dir.c_str(), sim_dir.c_str(), out_dir.c_str()));
    if (code == 0) std::printf("comparison written to %s\n", out_dir.c_str());
    return code;
  }
  return 3;
}
