#include "core/statmech.hpp"

#include <algorithm>
#include <cmath>

namespace sticky {

double PotentialSpec::morse(double r) const {
  const double a = std::exp(-range * (r - 1.0));
  return depth * a * (a - 2.0);
}

double PotentialSpec::morse_slope(double r) const {
  const double a = std::exp(-range * (r - 1.0));
  return 2.0 * depth * range * a * (1.0 - a);
}

StickyParameter kappa_closed_form(const PotentialSpec& spec) {
  if (spec.depth <= 0.0) throw InconsistentInput("potential depth must be positive");
  if (spec.range <= 0.0) throw InconsistentInput("potential range must be positive");
  if (spec.core_stiffness <= 0.0)
    throw InconsistentInput("core stiffness must be positive");
  const double rc = spec.cutoff_radius();
  if (rc <= 1.0) throw InconsistentInput("cutoff must lie outside contact");

  // Tilting the tail by its tangent at r_c shifts the contact minimum from
  // -E to -(E + U(r_c) + U'(r_c)(1 - r_c)).
  const double d =
      spec.depth + spec.morse(rc) + spec.morse_slope(rc) * (1.0 - rc);
  const double m = spec.core_stiffness;
  const double curvature = 2.0 * spec.depth * spec.range * spec.range;  // U''(1)
  StickyParameter out;
  out.kappa = (m + 1.0) / m * std::exp(d) * std::sqrt(M_PI / 2.0) / std::sqrt(curvature);
  out.provenance = KappaProvenance::closed_form;
  return out;
}

StickyParameter kappa_laplace(const std::function<double(double)>& U, double r_lo,
                              double r_hi, double T) {
  if (T <= 0.0) throw InconsistentInput("temperature must be positive");
  if (!(r_hi > r_lo)) throw InconsistentInput("empty bracket for the well search");

  // Golden-section minimization of U on [r_lo, r_hi].
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = r_lo, b = r_hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = U(c), fd = U(d);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * (r_hi - r_lo); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = U(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = U(d);
    }
  }
  const double r_min = 0.5 * (a + b);
  const double edge = 1e-6 * (r_hi - r_lo);
  if (r_min - r_lo < edge || r_hi - r_min < edge)
    throw InconsistentInput("potential has no interior minimum in the bracket");

  const double u0 = U(r_min);
  if (u0 >= 0.0) throw InconsistentInput("potential minimum is not a bound well");

  const double h = 1e-4;
  const double curvature = (-U(r_min - 2 * h) + 16 * U(r_min - h) - 30 * U(r_min) +
                            16 * U(r_min + h) - U(r_min + 2 * h)) /
                           (12 * h * h);
  if (curvature <= 0.0)
    throw InconsistentInput("potential minimum has non-positive curvature");

  StickyParameter out;
  out.kappa = std::exp(-u0 / T) / std::sqrt((2.0 / M_PI) * curvature / T);
  out.provenance = KappaProvenance::laplace;
  return out;
}

double free_energy(int bonds, long multiplicity, double zeta, double kappa) {
  if (multiplicity <= 0) throw InconsistentInput("multiplicity must be positive");
  if (zeta <= 0.0) throw InconsistentInput("zeta must be positive");
  if (kappa <= 0.0) throw InconsistentInput("kappa must be positive");
  return -bonds * std::log(kappa) -
         std::log(static_cast<double>(multiplicity) * zeta);
}

double LandscapeSummary::z(int p) const {
  switch (p) {
    case 0: return z0;
    case 1: return z1;
    case 2: return z2;
    default: throw InconsistentInput("dimension must be 0, 1, or 2");
  }
}

namespace {

// Trapezoidal average of a sampled factor along a walk, weighted by arc
// length; falls back to a plain mean when the path has no extent.
template <typename Get>
double path_average(const std::vector<PathSample>& samples, Get get) {
  if (samples.empty()) return 0.0;
  if (samples.size() == 1) return get(samples.front());
  double total = 0.0, length = 0.0;
  for (size_t k = 0; k + 1 < samples.size(); ++k) {
    const double ds = samples[k + 1].s - samples[k].s;
    total += 0.5 * (get(samples[k]) + get(samples[k + 1])) * ds;
    length += ds;
  }
  if (length <= 0.0) return get(samples.front());
  return total / length;
}

}  // namespace

LandscapeSummary totals(const ModeCatalog& modes, const LineCatalog& lines,
                        const FaceCatalog& faces, double kappa) {
  if (modes.n != lines.n || modes.n != faces.n)
    throw InconsistentInput("catalogs disagree on the number of spheres");

  LandscapeSummary out;
  out.n = modes.n;
  const int rigid_bonds = 3 * modes.n - 6;

  for (size_t k = 0; k < modes.rigid.size(); ++k) {
    const RigidMode& mode = modes.rigid[k];
    SummaryRow row;
    row.dimension = 0;
    row.index = static_cast<int>(k);
    row.bonds = rigid_bonds;
    row.multiplicity = mode.multiplicity;
    row.zeta = mode.h * mode.inertia;
    row.hbar = mode.h;
    row.ibar = mode.inertia;
    row.measure = 0.0;
    out.z0 += static_cast<double>(row.multiplicity) * row.zeta;
    out.rows.push_back(std::move(row));
  }
  for (size_t k = 0; k < lines.classes.size(); ++k) {
    const LineClass& cls = lines.classes[k];
    SummaryRow row;
    row.dimension = 1;
    row.index = static_cast<int>(k);
    row.bonds = rigid_bonds - 1;
    row.multiplicity = cls.multiplicity;
    row.zeta = cls.representative.zeta;
    row.hbar = path_average(cls.representative.samples,
                            [](const PathSample& s) { return s.h; });
    row.ibar = path_average(cls.representative.samples,
                            [](const PathSample& s) { return s.inertia; });
    row.measure = cls.representative.length;
    row.adjacent_modes = {cls.representative.start_mode, cls.representative.end_mode};
    out.z1 += static_cast<double>(row.multiplicity) * row.zeta;
    out.rows.push_back(std::move(row));
  }
  for (size_t k = 0; k < faces.classes.size(); ++k) {
    const FaceClass& cls = faces.classes[k];
    SummaryRow row;
    row.dimension = 2;
    row.index = static_cast<int>(k);
    row.bonds = rigid_bonds - 2;
    row.multiplicity = cls.multiplicity;
    row.zeta = cls.representative.zeta;
    row.hbar = cls.representative.hbar;
    row.ibar = cls.representative.ibar;
    row.measure = cls.representative.area;
    row.adjacent_modes = cls.corner_modes;
    out.z2 += static_cast<double>(row.multiplicity) * row.zeta;
    out.rows.push_back(std::move(row));
  }

  set_kappa(out, kappa);
  return out;
}

void set_kappa(LandscapeSummary& summary, double kappa) {
  if (kappa <= 0.0) throw InconsistentInput("kappa must be positive");
  summary.kappa = kappa;
  for (SummaryRow& row : summary.rows)
    row.free_energy = free_energy(row.bonds, row.multiplicity, row.zeta, kappa);
}

double partition_function(const LandscapeSummary& summary, double kappa) {
  if (kappa <= 0.0) throw InconsistentInput("kappa must be positive");
  const int rigid_bonds = 3 * summary.n - 6;
  return std::pow(kappa, rigid_bonds) * summary.z0 +
         std::pow(kappa, rigid_bonds - 1) * summary.z1 +
         std::pow(kappa, rigid_bonds - 2) * summary.z2;
}

Yields yields(const LandscapeSummary& summary, double kappa) {
  if (kappa <= 0.0) throw InconsistentInput("kappa must be positive");
  const double w0 = kappa * kappa * summary.z0;
  const double w1 = kappa * summary.z1;
  const double w2 = summary.z2;
  const double total = w0 + w1 + w2;
  if (total <= 0.0) throw InconsistentInput("summary has no weight");
  return {w0 / total, w1 / total, w2 / total};
}

double StickyLaw::kappa(double temperature) const {
  if (temperature <= 0.0) throw InconsistentInput("temperature must be positive");
  if (curvature <= 0.0) throw InconsistentInput("curvature must be positive");
  return std::exp(-u0 / temperature) / std::sqrt(curvature / temperature);
}

double critical_temperature(const LandscapeSummary& summary, int p,
                            const StickyLaw& law) {
  if (p != 0 && p != 1) throw InconsistentInput("crossover needs p in {0, 1}");
  if (law.u0 >= 0.0) throw InconsistentInput("law must describe a bound well");
  if (law.curvature <= 0.0) throw InconsistentInput("curvature must be positive");
  const double zp = summary.z(p);
  const double zq = summary.z(p + 1);
  if (zp <= 0.0 || zq <= 0.0)
    throw InconsistentInput("crossover needs positive totals on both sides");

  // Work with ln kappa(T) = -u0/T + ln(T)/2 - ln(curvature)/2 to avoid
  // overflow at small T. The law decreases up to its minimum at T = -2 u0.
  const auto log_kappa = [&](double T) {
    return -law.u0 / T + 0.5 * std::log(T) - 0.5 * std::log(law.curvature);
  };
  const double target = std::log(zq / zp);
  double hi = -2.0 * law.u0;
  if (log_kappa(hi) > target)
    throw InconsistentInput("target ratio is below the law's minimum stickiness");
  double lo = hi;
  while (log_kappa(lo) <= target) lo *= 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_kappa(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace sticky
