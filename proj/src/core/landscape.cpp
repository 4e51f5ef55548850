#include "core/landscape.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace sticky {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string catalog_file(int n) {
  return default_data_dir() + "/rigid_n" + std::to_string(n) + ".txt";
}

std::string fmt_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw InconsistentInput("config value for '" + key + "' is not a number: " + value);
  }
}

// Minimal reader for our own CSV dialect: '#' comments, one header row.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> comments;  // "# key: value" lines

  int column(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return static_cast<int>(i);
    throw InconsistentInput("CSV is missing the '" + name + "' column");
  }
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("missing input file: " + path);
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const size_t colon = line.find(':');
      if (colon != std::string::npos) {
        std::string key = line.substr(1, colon - 1);
        std::string value = line.substr(colon + 1);
        const auto trim = [](std::string& s) {
          while (!s.empty() && s.front() == ' ') s.erase(s.begin());
          while (!s.empty() && s.back() == ' ') s.pop_back();
        };
        trim(key);
        trim(value);
        table.comments[key] = value;
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (table.columns.empty())
      table.columns = cells;
    else
      table.rows.push_back(cells);
  }
  if (table.columns.empty()) throw InconsistentInput("empty CSV: " + path);
  return table;
}

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("missing input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InconsistentInput("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

double line_step(const RunOptions& o) {
  const double ds = o.strict ? o.ds / 2.0 : o.ds;
  return ds / 5.0;
}

FaceOptions face_options(const RunOptions& o) {
  FaceOptions fo;
  fo.ds = o.strict ? o.ds / 2.0 : o.ds;
  fo.strict_quality = o.strict;
  return fo;
}

void validate_common(const RunOptions& o) {
  if (o.n < 4 || o.n > 8)
    throw InconsistentInput("sphere count must be between 4 and 8");
  if (!(o.ds > 0.0)) throw InconsistentInput("sampling step must be positive");
  if (o.jobs < 1) throw InconsistentInput("job count must be at least one");
  if (std::isnan(o.kappa) || o.kappa <= 0.0)
    throw InconsistentInput("bond weight kappa must be positive (or infinite)");
}

}  // namespace

SimConfig parse_sim_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("missing config file: " + path);
  SimConfig config;
  SimParams& p = config.params;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.erase(line.begin());
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InconsistentInput("config line " + std::to_string(lineno) +
                              " is not key=value: " + line);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto trim = [](std::string& s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    };
    trim(key);
    trim(value);
    if (key == "n")
      p.n = static_cast<int>(parse_double(key, value));
    else if (key == "E")
      p.potential.depth = parse_double(key, value);
    else if (key == "rho")
      p.potential.range = parse_double(key, value);
    else if (key == "m")
      p.potential.core_stiffness = parse_double(key, value);
    else if (key == "dt")
      p.dt = parse_double(key, value);
    else if (key == "total_time")
      p.total_time = parse_double(key, value);
    else if (key == "seed")
      p.seed = static_cast<std::uint64_t>(parse_double(key, value));
    else if (key == "classify_interval")
      p.classify_interval = parse_double(key, value);
    else if (key == "confine_radius")
      p.confine_radius = parse_double(key, value);
    else if (key == "cutoff")
      p.potential.cutoff = parse_double(key, value);
    else
      throw InconsistentInput("unknown config key: " + key);
  }
  config.kappa = kappa_closed_form(p.potential).kappa;
  return config;
}

LandscapeRun run_landscape(const RunOptions& o) {
  validate_common(o);
  const ModeCatalog modes = standard_catalog(o.n);
  const LineCatalog lines = build_line_catalog(modes, line_step(o));
  const FaceCatalog faces = build_face_catalog(modes, face_options(o));

  LandscapeRun run;
  run.summary = totals(modes, lines, faces, std::isinf(o.kappa) ? 1.0 : o.kappa);
  run.modes0 = static_cast<int>(modes.rigid.size());
  run.modes1 = static_cast<int>(lines.classes.size());
  run.modes2 = static_cast<int>(faces.classes.size());

  RunManifest m;
  m.command = "landscape";
  m.parameters["n"] = std::to_string(o.n);
  m.parameters["ds"] = fmt_param(o.ds);
  m.parameters["strict"] = o.strict ? "true" : "false";
  m.parameters["kappa"] = fmt_param(o.kappa);
  m.input_hashes[catalog_file(o.n)] = file_hash(catalog_file(o.n));
  m.seed = o.seed;
  run.files.push_back(write_manifest(m, o.out_dir));
  run.files.push_back(write_mode_summary(run.summary, o.out_dir));
  run.files.push_back(write_totals(run.summary, run.modes0, run.modes1, run.modes2,
                                   o.out_dir));
  for (size_t k = 0; k < lines.classes.size(); ++k)
    run.files.push_back(write_line_export(lines, k, o.out_dir));
  for (size_t k = 0; k < faces.classes.size(); ++k) {
    std::vector<std::string> face_files = write_face_export(faces, lines, k, o.out_dir);
    run.files.insert(run.files.end(), face_files.begin(), face_files.end());
  }
  return run;
}

RatesRun run_rates(const RunOptions& o) {
  validate_common(o);
  const ModeCatalog modes = standard_catalog(o.n);
  const LineCatalog lines = build_line_catalog(modes, line_step(o));

  RatesRun run;
  run.leading = assemble_rates(modes, lines, o.kappa, RateConvention::leading_order);
  run.restricted =
      assemble_rates(modes, lines, o.kappa, RateConvention::restricted_network);
  if (!o.config_path.empty())
    run.duration = parse_sim_config(o.config_path).params.total_time;

  RunManifest m;
  m.command = "rates";
  m.parameters["n"] = std::to_string(o.n);
  m.parameters["kappa"] = fmt_param(o.kappa);
  m.parameters["convention"] = o.convention == RateConvention::leading_order
                                   ? "leading"
                                   : "restricted";
  m.parameters["duration"] = fmt_param(run.duration);
  m.input_hashes[catalog_file(o.n)] = file_hash(catalog_file(o.n));
  m.seed = o.seed;
  run.files.push_back(write_manifest(m, o.out_dir));
  run.files.push_back(write_rate_matrix(run.leading, run.restricted, o.out_dir));
  if (std::isfinite(o.kappa))
    run.files.push_back(write_expected_counts(
        o.convention == RateConvention::leading_order ? run.leading : run.restricted,
        run.duration, o.out_dir));
  return run;
}

SimulateRun run_simulate(const RunOptions& o) {
  if (o.config_path.empty())
    throw InconsistentInput("simulate requires a config file");
  SimConfig config = parse_sim_config(o.config_path);
  if (o.jobs < 1) throw InconsistentInput("job count must be at least one");
  SimParams params = config.params;
  if (o.seed != 0) params.seed = o.seed;  // command line overrides the file

  const ModeCatalog modes = standard_catalog(params.n);
  const LineCatalog lines = build_line_catalog(modes);
  const FaceCatalog faces = build_face_catalog(modes);
  const Catalogs cats{&modes, &lines, &faces};

  SimulateRun run;
  run.kappa = config.kappa;

  // Replicas split the budget and differ only by seed; the first one also
  // records the classification time series.
  std::vector<TraceSample> series;
  SimTrace merged;
  const double slice = params.total_time / o.jobs;
  for (int job = 0; job < o.jobs; ++job) {
    SimParams p = params;
    p.total_time = slice;
    p.seed = params.seed + static_cast<std::uint64_t>(job);
    SimObserver observer;
    if (job == 0) {
      observer = [&](const SimState& s) {
        const ClassifyResult r = classify(s.x, p, cats);
        series.push_back(TraceSample{s.time, r.dimension, r.index});
      };
    }
    SimTrace trace = simulate(p, initial_state(modes, 0), cats, observer);
    if (job == 0)
      merged = std::move(trace);
    else
      merge(merged, trace);
  }
  merged.seed = params.seed;
  run.trace = std::move(merged);

  RunManifest m;
  m.command = "simulate";
  m.parameters["config"] = o.config_path;
  m.parameters["n"] = std::to_string(params.n);
  m.parameters["E"] = fmt_param(params.potential.depth);
  m.parameters["rho"] = fmt_param(params.potential.range);
  m.parameters["m"] = fmt_param(params.potential.core_stiffness);
  m.parameters["dt"] = fmt_param(params.dt > 0.0 ? params.dt : params.stability_dt());
  m.parameters["total_time"] = fmt_param(params.total_time);
  m.parameters["classify_interval"] = fmt_param(params.classify_interval);
  m.parameters["jobs"] = std::to_string(o.jobs);
  m.parameters["kappa"] = fmt_param(config.kappa);
  m.input_hashes[o.config_path] = file_hash(o.config_path);
  m.input_hashes[catalog_file(params.n)] = file_hash(catalog_file(params.n));
  m.seed = params.seed;
  run.files.push_back(write_manifest(m, o.out_dir));
  run.files.push_back(write_trace(series, o.out_dir));
  run.files.push_back(write_sim_summary(run.trace, params, config.kappa, o.out_dir));
  return run;
}

CompareRun run_compare(const std::string& theory_dir, const std::string& sim_dir,
                       const RunOptions& o) {
  if (!fs::exists(theory_dir))
    throw MissingInput("theory directory does not exist: " + theory_dir);
  if (!fs::exists(sim_dir))
    throw MissingInput("simulation directory does not exist: " + sim_dir);

  const fs::path sim_summary_path = fs::path(sim_dir) / "summary.json";
  if (!fs::exists(sim_summary_path))
    throw InconsistentInput("not a simulation output directory (no summary.json): " +
                            sim_dir);
  const json sim = read_json(sim_summary_path.string());
  const int n = sim.at("n").get<int>();

  const std::string modes_csv =
      (fs::path(theory_dir) / ("modes_n" + std::to_string(n) + ".csv")).string();
  const std::string totals_csv =
      (fs::path(theory_dir) / ("totals_n" + std::to_string(n) + ".csv")).string();
  const std::string rates_csv =
      (fs::path(theory_dir) / ("rates_n" + std::to_string(n) + ".csv")).string();
  const fs::path theory_manifest = fs::path(theory_dir) / "run_manifest.json";
  if (fs::exists(theory_manifest)) {
    const json tm = read_json(theory_manifest.string());
    if (tm.contains("parameters") && tm["parameters"].contains("n")) {
      const int theory_n = std::stoi(tm["parameters"]["n"].get<std::string>());
      if (theory_n != n)
        throw InconsistentInput("theory is for n=" + std::to_string(theory_n) +
                                " but the simulation is for n=" + std::to_string(n));
    }
  }

  const CsvTable modes = read_csv(modes_csv);
  const CsvTable totals_table = read_csv(totals_csv);

  CompareRun run;
  const auto& trow = totals_table.rows.at(0);
  const double z0 = std::stod(trow.at(totals_table.column("Z_0")));
  const double z1 = std::stod(trow.at(totals_table.column("Z_1")));
  const double z2 = std::stod(trow.at(totals_table.column("Z_2")));
  run.z10_theory = z1 / z0;
  run.z21_theory = z2 / z1;

  const double kappa = sim.at("kappa").get<double>();
  if (!(kappa > 0.0)) throw InconsistentInput("simulation summary has no bond weight");

  // Per-class occupation probabilities: kappa^(2-p) z_alpha over the grand
  // total against the simulated time fraction of classified time.
  const std::vector<double> rigid_time = sim.at("rigid_time").get<std::vector<double>>();
  const std::vector<double> line_time = sim.at("line_time").get<std::vector<double>>();
  const std::vector<double> face_time = sim.at("face_time").get<std::vector<double>>();
  double classified = 0.0;
  for (double t : rigid_time) classified += t;
  for (double t : line_time) classified += t;
  for (double t : face_time) classified += t;
  if (!(classified > 0.0))
    throw InconsistentInput("simulation never classified any sample");

  const int col_dim = modes.column("dimension");
  const int col_z = modes.column("z_alpha");
  const int col_mode = modes.column("mode");
  std::vector<ScatterPoint> points;
  std::vector<int> index_within(3, 0);
  const double grand = kappa * kappa * z0 + kappa * z1 + z2;
  std::vector<double> theory_w, sim_w;
  for (const auto& row : modes.rows) {
    if (row.at(col_mode).rfind("Z_", 0) == 0) continue;  // totals block
    const int dim = std::stoi(row.at(col_dim));
    const double z = std::stod(row.at(col_z));
    const int idx = index_within.at(dim)++;
    ScatterPoint pt;
    pt.dimension = dim;
    pt.index = idx;
    pt.theory = std::pow(kappa, 2 - dim) * z / grand;
    const std::vector<double>& times =
        dim == 0 ? rigid_time : (dim == 1 ? line_time : face_time);
    if (idx >= static_cast<int>(times.size()))
      throw InconsistentInput("theory and simulation catalogs differ in size");
    pt.simulated = times.at(idx) / classified;
    points.push_back(pt);
    theory_w.push_back(pt.theory);
    sim_w.push_back(pt.simulated);
  }
  if (index_within[0] != static_cast<int>(rigid_time.size()) ||
      index_within[1] != static_cast<int>(line_time.size()) ||
      index_within[2] != static_cast<int>(face_time.size()))
    throw InconsistentInput("theory and simulation catalogs differ in size");
  run.rank_corr = rank_correlation(theory_w, sim_w);

  if (sim.at("ratios").is_null())
    throw InconsistentInput("simulation too short to define occupancy ratios");
  run.z10_sim = sim["ratios"].at("z1_over_z0").get<double>();
  run.z21_sim = sim["ratios"].at("z2_over_z1").get<double>();

  // Expected counts from the theory rate matrix over the simulated span.
  const CsvTable rates = read_csv(rates_csv);
  const double rates_kappa = std::stod(rates.comments.at("kappa"));
  const int m0 = static_cast<int>(rigid_time.size());
  Mat expected = Mat::Zero(m0, m0);
  const int col_a = rates.column("a");
  const int col_b = rates.column("b");
  const int col_r = rates.column("R_leading");
  const double duration = sim.at("classified_elapsed").get<double>();
  for (const auto& row : rates.rows) {
    const int a = std::stoi(row.at(col_a)) - 1;
    const int b = std::stoi(row.at(col_b)) - 1;
    if (a < 0 || a >= m0 || b < 0 || b >= m0)
      throw InconsistentInput("rate matrix does not match the simulated mode count");
    expected(a, b) = std::stod(row.at(col_r)) * duration / rates_kappa;
  }
  const std::vector<std::vector<long>> observed =
      sim.at("transitions").get<std::vector<std::vector<long>>>();

  RunManifest m;
  m.command = "compare";
  m.parameters["theory_dir"] = theory_dir;
  m.parameters["sim_dir"] = sim_dir;
  m.parameters["n"] = std::to_string(n);
  m.input_hashes[modes_csv] = file_hash(modes_csv);
  m.input_hashes[totals_csv] = file_hash(totals_csv);
  m.input_hashes[rates_csv] = file_hash(rates_csv);
  m.input_hashes[sim_summary_path.string()] = file_hash(sim_summary_path.string());
  m.seed = o.seed;
  run.files.push_back(write_manifest(m, o.out_dir));
  run.files.push_back(write_scatter(points, o.out_dir));
  run.files.push_back(write_count_diff(expected, observed, o.out_dir));
  run.files.push_back(write_ratio_table(run.z10_theory, run.z21_theory, run.z10_sim,
                                        run.z21_sim, run.rank_corr, o.out_dir));
  run.files.push_back(write_scatter_svg(points, o.out_dir));
  LandscapeSummary summary;
  summary.n = n;
  summary.z0 = z0;
  summary.z1 = z1;
  summary.z2 = z2;
  run.files.push_back(write_yields_svg(summary, StickyLaw{}, 0.6, 3.0, o.out_dir));
  return run;
}

}  // namespace sticky
