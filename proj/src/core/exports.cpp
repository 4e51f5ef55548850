#include "core/exports.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/graph.hpp"
#include "json.hpp"

namespace sticky {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestName = "run_manifest.json";

// Fixed-precision decimal rendering keeps reruns bit-identical.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw MissingInput("cannot open for writing: " + path.string());
  return out;
}

void manifest_line(std::ostream& out) { out << "# manifest: " << kManifestName << "\n"; }

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_coordinates_header(std::ostream& out, int n) {
  for (int i = 0; i < n; ++i) out << ",x" << i << ",y" << i << ",z" << i;
  out << "\n";
}

void write_coordinates(std::ostream& out, const Configuration& x) {
  for (int k = 0; k < 3 * x.n; ++k) out << "," << fmt(x.coords[k]);
  out << "\n";
}

}  // namespace

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("cannot hash missing file: " + path);
  std::uint64_t h = 14695981039346656037ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char hex[24];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::string write_manifest(const RunManifest& manifest, const std::string& out_dir) {
  const fs::path path = fs::path(out_dir) / kManifestName;
  json j;
  j["command"] = manifest.command;
  j["parameters"] = manifest.parameters;
  j["inputs"] = manifest.input_hashes;
  j["version"] = manifest.version;
  j["seed"] = manifest.seed;
  j["timestamp"] = manifest.timestamp.empty() ? utc_now() : manifest.timestamp;
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
  return path.string();
}

std::string write_line_export(const LineCatalog& lines, size_t k,
                              const std::string& out_dir) {
  if (k >= lines.classes.size()) throw InconsistentInput("line class index out of range");
  const LineClass& cls = lines.classes[k];
  const LineManifold& rep = cls.representative;
  const fs::path path = fs::path(out_dir) / ("line_" + std::to_string(k) + ".csv");
  std::ofstream out = open_out(path);
  manifest_line(out);
  out << "# class: " << k << "\n";
  out << "# start_mode: " << rep.start_mode << "\n";
  out << "# end_mode: " << rep.end_mode << "\n";
  out << "# multiplicity: " << cls.multiplicity << "\n";
  out << "# zeta: " << fmt(rep.zeta) << "\n";
  out << "# q_integral: " << fmt(rep.q_integral) << "\n";
  out << "# length: " << fmt(rep.length) << "\n";
  out << "# units: geometric (sphere diameter 1, quotient metric)\n";
  out << "s,h,I";
  const int n = rep.samples.empty() ? 0 : rep.samples.front().x.n;
  write_coordinates_header(out, n);
  for (const PathSample& s : rep.samples) {
    out << fmt(s.s) << "," << fmt(s.h) << "," << fmt(s.inertia);
    write_coordinates(out, s.x);
  }
  return path.string();
}

std::vector<std::string> write_face_export(const FaceCatalog& faces,
                                           const LineCatalog& lines, size_t k,
                                           const std::string& out_dir) {
  if (k >= faces.classes.size()) throw InconsistentInput("face class index out of range");
  const FaceClass& cls = faces.classes[k];
  const FaceManifold& rep = cls.representative;
  const std::string stem = "face_" + std::to_string(k);
  std::vector<std::string> written;

  {
    const fs::path path = fs::path(out_dir) / (stem + ".json");
    json j;
    j["manifest"] = kManifestName;
    j["id"] = k;
    j["corner_modes"] = cls.corner_modes;
    j["boundary_edge_classes"] = boundary_edge_classes(rep, lines);
    std::vector<double> edge_lengths;
    for (const FaceEdge& e : rep.boundary.edges) edge_lengths.push_back(e.length);
    j["boundary_edge_lengths"] = edge_lengths;
    j["multiplicity"] = cls.multiplicity;
    j["zeta"] = rep.zeta;
    j["area"] = rep.area;
    j["hbar"] = rep.hbar;
    j["ibar"] = rep.ibar;
    j["euler_characteristic"] = euler_characteristic(rep);
    j["units"] = "geometric (sphere diameter 1, quotient metric)";
    std::ofstream out = open_out(path);
    out << j.dump(2) << "\n";
    written.push_back(path.string());
  }

  {
    const fs::path path = fs::path(out_dir) / (stem + "_vertices.csv");
    std::ofstream out = open_out(path);
    manifest_line(out);
    out << "# class: " << k << "\n";
    out << "# kind: 0 corner, 1 boundary, 2 interior\n";
    out << "kind,edge,s,u,v,h,I";
    const int n = rep.points.empty() ? 0 : rep.points.front().x.n;
    write_coordinates_header(out, n);
    for (const FacePoint& p : rep.points) {
      out << static_cast<int>(p.kind) << "," << p.edge << "," << fmt(p.s) << ","
          << fmt(p.u) << "," << fmt(p.v) << "," << fmt(p.h) << "," << fmt(p.inertia);
      write_coordinates(out, p.x);
    }
    written.push_back(path.string());
  }

  {
    const fs::path path = fs::path(out_dir) / (stem + "_triangles.csv");
    std::ofstream out = open_out(path);
    manifest_line(out);
    out << "# class: " << k << "\n";
    out << "a,b,c,area\n";
    for (size_t t = 0; t < rep.triangles.size(); ++t) {
      const auto& tri = rep.triangles[t];
      out << tri[0] << "," << tri[1] << "," << tri[2] << "," << fmt(rep.tri_areas[t])
          << "\n";
    }
    written.push_back(path.string());
  }
  return written;
}

std::string write_mode_summary(const LandscapeSummary& summary,
                               const std::string& out_dir) {
  const fs::path path =
      fs::path(out_dir) / ("modes_n" + std::to_string(summary.n) + ".csv");
  std::ofstream out = open_out(path);
  manifest_line(out);
  out << "# n: " << summary.n << "\n";
  out << "# kappa: " << fmt(summary.kappa) << " (free-energy column only)\n";
  out << "# units: geometric; S is length (1-D) or area (2-D) in the quotient "
         "metric; corners are 1-based mode ids\n";
  out << "mode,dimension,h_bar,I_bar,S,n_alpha,z_alpha,F_over_kT,corners\n";
  int mode_id = 0;
  for (const SummaryRow& row : summary.rows) {
    ++mode_id;
    out << mode_id << "," << row.dimension << "," << fmt(row.hbar) << ","
        << fmt(row.ibar) << ",";
    if (row.dimension > 0) out << fmt(row.measure);
    out << "," << row.multiplicity << ","
        << fmt(static_cast<double>(row.multiplicity) * row.zeta) << ","
        << fmt(row.free_energy) << ",";
    std::string corners;
    for (size_t c = 0; c < row.adjacent_modes.size(); ++c) {
      if (c) corners += ';';
      corners += std::to_string(row.adjacent_modes[c] + 1);
    }
    out << corners << "\n";
  }
  out << "Z_0,0,,,,,"  << fmt(summary.z0) << ",,\n";
  out << "Z_1,1,,,,,"  << fmt(summary.z1) << ",,\n";
  out << "Z_2,2,,,,,"  << fmt(summary.z2) << ",,\n";
  return path.string();
}

std::string write_totals(const LandscapeSummary& summary, int modes0, int modes1,
                         int modes2, const std::string& out_dir) {
  const fs::path path =
      fs::path(out_dir) / ("totals_n" + std::to_string(summary.n) + ".csv");
  std::ofstream out = open_out(path);
  manifest_line(out);
  out << "# units: geometric partition totals, Z_p = sum of n_alpha zeta_alpha\n";
  out << "n,modes_0d,modes_1d,modes_2d,Z_0,Z_1,Z_2,Z1_over_Z0,Z2_over_Z1\n";
  out << summary.n << "," << modes0 << "," << modes1 << "," << modes2 << ","
      << fmt(summary.z0) << "," << fmt(summary.z1) << "," << fmt(summary.z2) << ","
      << fmt(summary.z1 / summary.z0) << "," << fmt(summary.z2 / summary.z1) << "\n";
  return path.string();
}

std::string write_rate_matrix(const RateNetwork& leading, const RateNetwork& restricted,
                              const std::string& out_dir) {
  const int modes = static_cast<int>(leading.geometric.rows());
  if (restricted.geometric.rows() != modes ||
      restricted.geometric.cols() != leading.geometric.cols())
    throw InconsistentInput("rate networks differ in shape");
  const fs::path path =
      fs::path(out_dir) / ("rates_n" + std::to_string(leading.n) + ".csv");
  std::ofstream out = open_out(path);
  manifest_line(out);
  out << "# note: dimensional rates are kappa^-1 D/d^2 times the above\n";
  out << "# kappa: " << fmt(leading.kappa) << "\n";
  out << "# Z_0: " << fmt(leading.z0) << "\n";
  out << "# Z_1: " << fmt(leading.z1) << "\n";
  out << "# excluded_lines: " << leading.excluded_lines << "\n";
  out << "# units: geometric (dimensionless); modes are 1-based rigid ids\n";
  out << "a,b,R_leading,R_restricted\n";
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      out << (a + 1) << "," << (b + 1) << "," << fmt(leading.geometric(a, b)) << ","
          << fmt(restricted.geometric(a, b)) << "\n";
  return path.string();
}

std::string write_expected_counts(const RateNetwork& network, double duration,
                                  const std::string& out_dir) {
  const int modes = static_cast<int>(network.geometric.rows());
  const fs::path path =
      fs::path(out_dir) / ("expected_counts_n" + std::to_string(network.n) + ".csv");
  std::ofstream out = open_out(path);
  manifest_line(out);
  out << "# duration: " << fmt(duration) << " (geometric time, D = d = 1)\n";
  out << "# kappa: " << fmt(network.kappa) << "\n";
  out << "a,b,expected_events\n";
  for (int a = 0; a < modes; ++a)
    for (int b = 0; b < modes; ++b)
      out << (a + 1) << "," << (b + 1) << ","
          << fmt(expected_count(network, a, b, duration)) << "\n";
  return path.string();
}

std::string write_trace(const std::vector<TraceSample>& samples,
                        const std::string& out_dir) {
  const fs::path path = fs::path(out_dir) / "trace.csv";
  std::ofstream out = open_out(path);
  manifest_line(out);
  out << "# dimension -1: unclassified; index within that dimension's catalog\n";
  out << "time,dimension,index\n";
  for (const TraceSample& s : samples)
    out << fmt(s.time) << "," << s.dimension << "," << s.index << "\n";
  return path.string();
}

std::string write_sim_summary(const SimTrace& trace, const SimParams& params,
                              double kappa, const std::string& out_dir) {
  const fs::path path = fs::path(out_dir) / "summary.json";
  json j;
  j["manifest"] = kManifestName;
  j["n"] = trace.n;
  j["seed"] = trace.seed;
  j["dt"] = trace.dt;
  j["steps"] = trace.steps;
  j["elapsed"] = trace.elapsed;
  j["classified_elapsed"] = trace.classified_elapsed;
  j["rigid_time"] = trace.rigid_time;
  j["line_time"] = trace.line_time;
  j["face_time"] = trace.face_time;
  j["unclassified_time"] = trace.unclassified_time;
  j["transitions"] = trace.transitions;
  j["anomalies"] = trace.anomalies;
  j["kappa"] = kappa;
  json ratios;
  try {
    const RatioEstimates est = extract_ratios(trace, kappa);
    ratios["z1_over_z0"] = est.z1_over_z0;
    ratios["z2_over_z1"] = est.z2_over_z1;
  } catch (const InconsistentInput&) {
    ratios = nullptr;  // trace too short to define the ratios
  }
  j["ratios"] = ratios;
  json p;
  p["depth"] = params.potential.depth;
  p["range"] = params.potential.range;
  p["core_stiffness"] = params.potential.core_stiffness;
  p["cutoff"] = params.potential.cutoff_radius();
  p["dt"] = params.dt > 0.0 ? params.dt : params.stability_dt();
  p["total_time"] = params.total_time;
  p["classify_interval"] = params.classify_interval;
  p["confine_radius"] = params.confine_radius;
  j["params"] = p;
  j["units"] = "geometric (sphere diameter 1, D = 1, kT = 1)";
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
  return path.string();
}

std::string write_scatter(const std::vector<ScatterPoint>& points,
                          const std::string& out_dir) {
  const fs::path path = fs::path(out_dir) / "scatter.csv";
  std::ofstream out = open_out(path);
  manifest_line(out);
  out << "# per-class occupation probabilities, theory vs simulation\n";
  out << "dimension,index,p_theory,p_simulated\n";
  for (const ScatterPoint& p : points)
    out << p.dimension << "," << p.index << "," << fmt(p.theory) << ","
        << fmt(p.simulated) << "\n";
  return path.string();
}

std::string write_count_diff(const Mat& expected,
                             const std::vector<std::vector<long>>& observed,
                             const std::string& out_dir) {
  const int modes = static_cast<int>(expected.rows());
  if (observed.size() != static_cast<size_t>(modes))
    throw InconsistentInput("count matrices differ in shape");
  const fs::path path = fs::path(out_dir) / "count_diff.csv";
  std::ofstream out = open_out(path);
  manifest_line(out);
  out << "# labeled transition events, expected vs observed\n";
  out << "a,b,expected,observed,difference\n";
  for (int a = 0; a < modes; ++a) {
    if (observed[a].size() != static_cast<size_t>(modes))
      throw InconsistentInput("count matrices differ in shape");
    for (int b = 0; b < modes; ++b)
      out << (a + 1) << "," << (b + 1) << "," << fmt(expected(a, b)) << ","
          << observed[a][b] << ","
          << fmt(static_cast<double>(observed[a][b]) - expected(a, b)) << "\n";
  }
  return path.string();
}

std::string write_ratio_table(double z10_theory, double z21_theory, double z10_sim,
                              double z21_sim, double rank_corr,
                              const std::string& out_dir) {
  const fs::path path = fs::path(out_dir) / "ratios.csv";
  std::ofstream out = open_out(path);
  manifest_line(out);
  out << "# simulated ratios are kappa times the adjacent-dimension time ratios\n";
  out << "quantity,theory,simulated\n";
  out << "Z1_over_Z0," << fmt(z10_theory) << "," << fmt(z10_sim) << "\n";
  out << "Z2_over_Z1," << fmt(z21_theory) << "," << fmt(z21_sim) << "\n";
  out << "rank_correlation,1," << fmt(rank_corr) << "\n";
  return path.string();
}

namespace {

// Shared SVG scaffolding: fixed canvas, margins, and tick label style.
constexpr int kW = 640, kH = 640, kMargin = 70;

double map_x(double v, double lo, double hi) {
  return kMargin + (v - lo) / (hi - lo) * (kW - 2 * kMargin);
}
double map_y(double v, double lo, double hi) {
  return kH - kMargin - (v - lo) / (hi - lo) * (kH - 2 * kMargin);
}

const char* dim_color(int d) {
  switch (d) {
    case 0: return "#c0392b";
    case 1: return "#2980b9";
    default: return "#27ae60";
  }
}

void svg_open(std::ostream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\""
      << kH << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
  out << "<!-- manifest: " << kManifestName << " -->\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
}

void svg_axes(std::ostream& out, const std::string& xlabel, const std::string& ylabel) {
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\""
      << kW - kMargin << "\" y2=\"" << kH - kMargin
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xlabel << "</text>\n";
  out << "<text x=\"20\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 20 "
      << kH / 2 << ")\">" << ylabel << "</text>\n";
}

}  // namespace

std::string write_scatter_svg(const std::vector<ScatterPoint>& points,
                              const std::string& out_dir) {
  const fs::path path = fs::path(out_dir) / "scatter.svg";
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const ScatterPoint& p : points) {
    if (p.theory <= 0.0 || p.simulated <= 0.0) continue;
    const double a = std::log10(p.theory), b = std::log10(p.simulated);
    if (!any) {
      lo = std::min(a, b);
      hi = std::max(a, b);
      any = true;
    } else {
      lo = std::min({lo, a, b});
      hi = std::max({hi, a, b});
    }
  }
  if (!any) throw InconsistentInput("no positive probability pairs to plot");
  lo = std::floor(lo);
  hi = std::ceil(hi);
  if (hi <= lo) hi = lo + 1.0;

  std::ofstream out = open_out(path);
  svg_open(out, "Occupation probability: theory vs simulation");
  svg_axes(out, "theory, log10 P", "simulation, log10 P");
  for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); ++d) {
    const double px = map_x(d, lo, hi), py = map_y(d, lo, hi);
    out << "<text x=\"" << fmt(px) << "\" y=\"" << kH - kMargin + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << d << "</text>\n";
    out << "<text x=\"" << kMargin - 10 << "\" y=\"" << fmt(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << d
        << "</text>\n";
  }
  out << "<line x1=\"" << fmt(map_x(lo, lo, hi)) << "\" y1=\"" << fmt(map_y(lo, lo, hi))
      << "\" x2=\"" << fmt(map_x(hi, lo, hi)) << "\" y2=\"" << fmt(map_y(hi, lo, hi))
      << "\" stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
  for (const ScatterPoint& p : points) {
    if (p.theory <= 0.0 || p.simulated <= 0.0) continue;
    out << "<circle cx=\"" << fmt(map_x(std::log10(p.theory), lo, hi)) << "\" cy=\""
        << fmt(map_y(std::log10(p.simulated), lo, hi)) << "\" r=\"4\" fill=\""
        << dim_color(p.dimension) << "\" fill-opacity=\"0.8\"/>\n";
  }
  const char* labels[3] = {"rigid", "1-D", "2-D"};
  for (int d = 0; d < 3; ++d) {
    out << "<circle cx=\"" << kW - kMargin - 90 << "\" cy=\"" << kMargin + 18 * d + 8
        << "\" r=\"4\" fill=\"" << dim_color(d) << "\"/>\n";
    out << "<text x=\"" << kW - kMargin - 80 << "\" y=\"" << kMargin + 18 * d + 12
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << labels[d]
        << "</text>\n";
  }
  out << "</svg>\n";
  return path.string();
}

std::string write_yields_svg(const LandscapeSummary& summary, const StickyLaw& law,
                             double t_lo, double t_hi, const std::string& out_dir) {
  if (!(t_hi > t_lo) || t_lo <= 0.0)
    throw InconsistentInput("yield plot needs a positive temperature range");
  const fs::path path = fs::path(out_dir) / "yields.svg";
  std::ofstream out = open_out(path);
  svg_open(out, "Yields by manifold dimension");
  svg_axes(out, "temperature (well-depth units)", "yield");
  for (int tick = 0; tick <= 4; ++tick) {
    const double frac = tick / 4.0;
    const double t = t_lo + frac * (t_hi - t_lo);
    out << "<text x=\"" << fmt(map_x(t, t_lo, t_hi)) << "\" y=\"" << kH - kMargin + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(t) << "</text>\n";
    out << "<text x=\"" << kMargin - 10 << "\" y=\"" << fmt(map_y(frac, 0.0, 1.0) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(frac) << "</text>\n";
  }
  const int samples = 200;
  for (int p = 0; p < 3; ++p) {
    out << "<polyline fill=\"none\" stroke=\"" << dim_color(p)
        << "\" stroke-width=\"2\" points=\"";
    for (int k = 0; k <= samples; ++k) {
      const double t = t_lo + (t_hi - t_lo) * k / samples;
      const Yields y = yields(summary, law.kappa(t));
      const double v = p == 0 ? y.y0 : (p == 1 ? y.y1 : y.y2);
      out << fmt(map_x(t, t_lo, t_hi)) << "," << fmt(map_y(v, 0.0, 1.0)) << " ";
    }
    out << "\"/>\n";
    const char* labels[3] = {"y0 (rigid)", "y1 (1-D)", "y2 (2-D)"};
    out << "<text x=\"" << kW - kMargin - 90 << "\" y=\"" << kMargin + 18 * p + 12
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << dim_color(p)
        << "\">" << labels[p] << "</text>\n";
  }
  out << "</svg>\n";
  return path.string();
}

}  // namespace sticky
