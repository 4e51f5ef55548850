#pragma once

// File emission for landscape, rate, and simulation runs: CSV tables with
// '#' comment headers, JSON sidecars, direct SVG plots, and the run manifest
// every file references. All CSVs use a comma separator, '.' decimal point,
// one header row, LF line endings, and fixed iteration order, so re-running
// a command with the same manifest reproduces them bit for bit.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/bdsim.hpp"
#include "core/clusters.hpp"
#include "core/face.hpp"
#include "core/kinetics.hpp"
#include "core/line.hpp"
#include "core/statmech.hpp"

namespace sticky {

inline constexpr const char* kCodeVersion = "1.0.0";

// Everything needed to reproduce a run. Written once per output directory as
// run_manifest.json; every other emitted file carries a '# manifest:' line
// (or a "manifest" JSON key) pointing back at it.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;    // stringified, sorted
  std::map<std::string, std::string> input_hashes;  // path -> fnv1a64 hex
  std::string version = kCodeVersion;
  std::uint64_t seed = 0;
  std::string timestamp;  // UTC, informational only; never read back
};

// 64-bit FNV-1a of the file's bytes, 16 hex digits. Throws MissingInput.
std::string file_hash(const std::string& path);

// Writes out_dir/run_manifest.json (creating out_dir) and returns its path.
std::string write_manifest(const RunManifest& manifest, const std::string& out_dir);

// One file per line class: comment header (id, endpoints, multiplicity,
// zeta, Q, length), then rows (s, h, I, 3n coordinates).
std::string write_line_export(const LineCatalog& lines, size_t k,
                              const std::string& out_dir);

// Three files per face class: face_<k>.json (id, corner modes, boundary
// edge classes, multiplicity, zeta, S, Euler characteristic), plus vertex
// and triangle CSV tables.
std::vector<std::string> write_face_export(const FaceCatalog& faces,
                                           const LineCatalog& lines, size_t k,
                                           const std::string& out_dir);

// The appendix-style per-mode table: one row per catalog class in fixed
// order (rigid, then lines, then faces), columns mode, dim, h_bar, I_bar,
// S, n_alpha, z_alpha, F_over_kT, corners; followed by a totals block.
std::string write_mode_summary(const LandscapeSummary& summary,
                               const std::string& out_dir);

// One-row totals table: class counts per dimension and Z_0, Z_1, Z_2 with
// their ratios.
std::string write_totals(const LandscapeSummary& summary, int modes0, int modes1,
                         int modes2, const std::string& out_dir);

// Mode-to-mode matrix with both conventions side by side, annotated with
// the geometric-units note. The two networks must share shape and kappa.
std::string write_rate_matrix(const RateNetwork& leading, const RateNetwork& restricted,
                              const std::string& out_dir);

// Expected a<->b event counts over `duration` (geometric units, D = d = 1).
std::string write_expected_counts(const RateNetwork& network, double duration,
                                  const std::string& out_dir);

// Classification time series (time, dimension, index), -1/-1 when nothing
// matched.
struct TraceSample {
  double time = 0.0;
  int dimension = -1;
  int index = -1;
};
std::string write_trace(const std::vector<TraceSample>& samples,
                        const std::string& out_dir);

// JSON digest of a finished trajectory: bookkeeping totals, per-class
// occupancy, the labeled transition matrix, and the occupancy-implied
// weight ratios at the given bond weight.
std::string write_sim_summary(const SimTrace& trace, const SimParams& params,
                              double kappa, const std::string& out_dir);

// Comparison tables: per-class theory-vs-simulation probabilities, the
// expected-vs-observed count matrix, and the weight-ratio table.
struct ScatterPoint {
  int dimension = 0;
  int index = 0;
  double theory = 0.0;
  double simulated = 0.0;
};
std::string write_scatter(const std::vector<ScatterPoint>& points,
                          const std::string& out_dir);
std::string write_count_diff(const Mat& expected, const std::vector<std::vector<long>>& observed,
                             const std::string& out_dir);
std::string write_ratio_table(double z10_theory, double z21_theory, double z10_sim,
                              double z21_sim, double rank_corr,
                              const std::string& out_dir);

// Log-log scatter of the probability pairs against the identity line.
std::string write_scatter_svg(const std::vector<ScatterPoint>& points,
                              const std::string& out_dir);

// Yield curves y_p(T) for p = 0, 1, 2 under the temperature law.
std::string write_yields_svg(const LandscapeSummary& summary, const StickyLaw& law,
                             double t_lo, double t_hi, const std::string& out_dir);

}  // namespace sticky
