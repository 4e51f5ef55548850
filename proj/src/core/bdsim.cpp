#include "core/bdsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/graph.hpp"

namespace sticky {

namespace {

// Pair-force constants hoisted out of the stepping loop.
struct PairTable {
  double rc = 0.0;       // truncation radius
  double rc2 = 0.0;      // squared, for the cheap distance test
  double shift_e = 0.0;  // well value at the truncation radius
  double shift_s = 0.0;  // well slope at the truncation radius
  double core_k = 0.0;   // m^2 U''(1)
};

PairTable make_table(const PotentialSpec& spec) {
  PairTable t;
  t.rc = spec.cutoff_radius();
  t.rc2 = t.rc * t.rc;
  t.shift_e = spec.morse(t.rc);
  t.shift_s = spec.morse_slope(t.rc);
  t.core_k = spec.core_stiffness * spec.core_stiffness * 2.0 * spec.depth *
             spec.range * spec.range;
  return t;
}

// dU/dr of the truncated potential for r < rc.
inline double truncated_slope(double r, const PotentialSpec& spec, const PairTable& t) {
  if (r >= 1.0) {
    const double a = std::exp(-spec.range * (r - 1.0));
    return 2.0 * spec.depth * spec.range * a * (1.0 - a) - t.shift_s;
  }
  return t.core_k * (r - 1.0) - t.shift_s;
}

void accumulate_drift(const Configuration& x, const PotentialSpec& spec,
                      const PairTable& t, Vec& out) {
  out.setZero();
  for (int i = 0; i < x.n; ++i) {
    const Eigen::Vector3d xi = x.particle(i);
    for (int j = i + 1; j < x.n; ++j) {
      const Eigen::Vector3d d = xi - x.particle(j);
      const double r2 = d.squaredNorm();
      if (r2 >= t.rc2 || r2 < 1e-24) continue;
      const double r = std::sqrt(r2);
      // Force on i is -dU/dr along the outward pair direction.
      const Eigen::Vector3d f = (-truncated_slope(r, spec, t) / r) * d;
      out.segment<3>(3 * i) += f;
      out.segment<3>(3 * j) -= f;
    }
  }
}

void validate(const SimParams& params) {
  if (params.n < 1) throw InconsistentInput("simulation needs at least one sphere");
  if (params.potential.depth <= 0.0 || params.potential.range <= 0.0 ||
      params.potential.core_stiffness <= 0.0)
    throw InconsistentInput("potential parameters must be positive");
  if (params.potential.cutoff_radius() <= 1.0)
    throw InconsistentInput("truncation radius must exceed the diameter");
  if (params.total_time <= 0.0) throw InconsistentInput("total time must be positive");
  if (params.classify_interval <= 0.0)
    throw InconsistentInput("classification interval must be positive");
  if (params.dt < 0.0) throw InconsistentInput("time step must be non-negative");
  if (params.dt > params.stability_dt() * (1.0 + 1e-12))
    throw InconsistentInput("time step exceeds the forward Euler stability bound");
  if (params.confine_radius < 0.0)
    throw InconsistentInput("confinement radius must be non-negative");
}

void reflect_into_ball(Configuration& x, double radius) {
  for (int i = 0; i < x.n; ++i) {
    Eigen::Vector3d p = x.particle(i);
    const double r = p.norm();
    if (r <= radius || r == 0.0) continue;
    p *= std::max(2.0 * radius - r, 0.0) / r;
    if (p.norm() > radius) p *= radius / p.norm();
    x.set_particle(i, p);
  }
}

}  // namespace

PairPotential potential_eval(double r, const PotentialSpec& spec) {
  const PairTable t = make_table(spec);
  if (r >= t.rc) return {};
  double base_e = 0.0;
  double base_s = 0.0;
  if (r >= 1.0) {
    base_e = spec.morse(r);
    base_s = spec.morse_slope(r);
  } else {
    base_e = 0.5 * t.core_k * (r - 1.0) * (r - 1.0) - spec.depth;
    base_s = t.core_k * (r - 1.0);
  }
  PairPotential out;
  out.energy = base_e - t.shift_e - t.shift_s * (r - t.rc);
  out.force = -(base_s - t.shift_s);
  return out;
}

Vec conservative_drift(const Configuration& x, const PotentialSpec& spec) {
  Vec out = Vec::Zero(3 * x.n);
  accumulate_drift(x, spec, make_table(spec), out);
  return out;
}

void step(SimState& state, const SimParams& params, const Vec& standard_normal) {
  if (standard_normal.size() != 3 * state.x.n)
    throw InconsistentInput("noise vector size mismatch");
  const double dt = params.dt > 0.0 ? params.dt : params.stability_dt();
  state.x.coords += conservative_drift(state.x, params.potential) * dt +
                    std::sqrt(2.0 * dt) * standard_normal;
  if (params.confine_radius > 0.0) reflect_into_ball(state.x, params.confine_radius);
  state.time += dt;
}

void step(SimState& state, const SimParams& params, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec noise(3 * state.x.n);
  for (int k = 0; k < noise.size(); ++k) noise[k] = normal(rng);
  step(state, params, noise);
}

ClassifyResult classify(const Configuration& x, const SimParams& params,
                        const Catalogs& catalogs) {
  ClassifyResult out;
  const ContactGraph g = contacts_within(x, params.classify_cutoff());
  const int bonds = g.edge_count();
  const int rigid_bonds = 3 * x.n - 6;
  if (bonds < rigid_bonds - 2) return out;  // too floppy to be catalogued

  bool catalog_available = false;
  if (bonds == rigid_bonds && catalogs.modes) {
    catalog_available = !catalogs.modes->rigid.empty();
    for (size_t i = 0; i < catalogs.modes->rigid.size(); ++i) {
      if (isomorphism(g, catalogs.modes->rigid[i].graph)) {
        out.dimension = 0;
        out.index = static_cast<int>(i);
        return out;
      }
    }
  } else if (bonds == rigid_bonds - 1 && catalogs.lines) {
    catalog_available = !catalogs.lines->classes.empty();
    for (size_t i = 0; i < catalogs.lines->classes.size(); ++i) {
      const ContactGraph ref =
          ContactGraph::from_bonds(x.n, catalogs.lines->classes[i].representative.bonds);
      if (isomorphism(g, ref)) {
        out.dimension = 1;
        out.index = static_cast<int>(i);
        return out;
      }
    }
  } else if (bonds == rigid_bonds - 2 && catalogs.faces) {
    catalog_available = !catalogs.faces->classes.empty();
    for (size_t i = 0; i < catalogs.faces->classes.size(); ++i) {
      const ContactGraph ref =
          ContactGraph::from_bonds(x.n, catalogs.faces->classes[i].representative.bonds);
      if (isomorphism(g, ref)) {
        out.dimension = 2;
        out.index = static_cast<int>(i);
        return out;
      }
    }
  } else if (bonds > rigid_bonds) {
    // More contacts than any catalogued shape: always anomalous.
    catalog_available = catalogs.modes && !catalogs.modes->rigid.empty();
  }
  out.anomaly = catalog_available;
  return out;
}

SimTrace simulate(const SimParams& params, const SimState& start,
                  const Catalogs& catalogs, const SimObserver& observer) {
  validate(params);
  if (start.x.n != params.n)
    throw InconsistentInput("start configuration does not match the sphere count");
  if (catalogs.modes && catalogs.modes->n != params.n)
    throw InconsistentInput("rigid catalog does not match the sphere count");

  const double dt = params.dt > 0.0 ? params.dt : params.stability_dt();
  const long long steps_per_check = std::max<long long>(
      1, static_cast<long long>(std::llround(params.classify_interval / dt)));
  const long long total_steps =
      std::max<long long>(1, static_cast<long long>(std::llround(params.total_time / dt)));
  const double check_time = static_cast<double>(steps_per_check) * dt;

  SimTrace trace;
  trace.n = params.n;
  trace.seed = params.seed;
  trace.dt = dt;
  if (catalogs.modes) {
    trace.rigid_time.assign(catalogs.modes->rigid.size(), 0.0);
    trace.transitions.assign(catalogs.modes->rigid.size(),
                             std::vector<long>(catalogs.modes->rigid.size(), 0));
  }
  if (catalogs.lines) trace.line_time.assign(catalogs.lines->classes.size(), 0.0);
  if (catalogs.faces) trace.face_time.assign(catalogs.faces->classes.size(), 0.0);

  const PairTable table = make_table(params.potential);
  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SimState state = start;
  Vec drift = Vec::Zero(3 * params.n);
  const double noise_scale = std::sqrt(2.0 * dt);

  ConstraintSet last_rigid_bonds;
  int last_rigid_index = -1;

  for (long long k = 1; k <= total_steps; ++k) {
    accumulate_drift(state.x, params.potential, table, drift);
    for (int c = 0; c < 3 * params.n; ++c)
      state.x.coords[c] += drift[c] * dt + noise_scale * normal(rng);
    if (params.confine_radius > 0.0) reflect_into_ball(state.x, params.confine_radius);
    state.time += dt;

    if (k % steps_per_check != 0) continue;
    trace.classified_elapsed += check_time;
    const ClassifyResult result = classify(state.x, params, catalogs);
    if (result.anomaly) ++trace.anomalies;
    switch (result.dimension) {
      case 0: {
        trace.rigid_time[static_cast<size_t>(result.index)] += check_time;
        ConstraintSet bonds =
            contacts_within(state.x, params.classify_cutoff()).bonds();
        if (last_rigid_index >= 0 && bonds != last_rigid_bonds)
          ++trace.transitions[static_cast<size_t>(last_rigid_index)]
                             [static_cast<size_t>(result.index)];
        last_rigid_bonds = std::move(bonds);
        last_rigid_index = result.index;
        break;
      }
      case 1:
        trace.line_time[static_cast<size_t>(result.index)] += check_time;
        break;
      case 2:
        trace.face_time[static_cast<size_t>(result.index)] += check_time;
        break;
      default:
        trace.unclassified_time += check_time;
        break;
    }
    if (observer) observer(state);
  }

  trace.steps = total_steps;
  trace.elapsed = static_cast<double>(total_steps) * dt;
  return trace;
}

SimState initial_state(const ModeCatalog& catalog, int mode_index) {
  if (mode_index < 0 || mode_index >= static_cast<int>(catalog.rigid.size()))
    throw InconsistentInput("mode index outside the catalog");
  SimState state;
  state.x = catalog.rigid[static_cast<size_t>(mode_index)].representative;
  return state;
}

void merge(SimTrace& into, const SimTrace& other) {
  if (into.n != other.n || into.rigid_time.size() != other.rigid_time.size() ||
      into.line_time.size() != other.line_time.size() ||
      into.face_time.size() != other.face_time.size())
    throw InconsistentInput("traces to merge cover different catalogs");
  into.steps += other.steps;
  into.elapsed += other.elapsed;
  into.classified_elapsed += other.classified_elapsed;
  for (size_t i = 0; i < into.rigid_time.size(); ++i)
    into.rigid_time[i] += other.rigid_time[i];
  for (size_t i = 0; i < into.line_time.size(); ++i)
    into.line_time[i] += other.line_time[i];
  for (size_t i = 0; i < into.face_time.size(); ++i)
    into.face_time[i] += other.face_time[i];
  into.unclassified_time += other.unclassified_time;
  for (size_t a = 0; a < into.transitions.size(); ++a)
    for (size_t b = 0; b < into.transitions[a].size(); ++b)
      into.transitions[a][b] += other.transitions[a][b];
  into.anomalies += other.anomalies;
}

double dimension_time(const SimTrace& trace, int p) {
  switch (p) {
    case 0: return std::accumulate(trace.rigid_time.begin(), trace.rigid_time.end(), 0.0);
    case 1: return std::accumulate(trace.line_time.begin(), trace.line_time.end(), 0.0);
    case 2: return std::accumulate(trace.face_time.begin(), trace.face_time.end(), 0.0);
    default: throw InconsistentInput("dimension must be 0, 1, or 2");
  }
}

RatioEstimates extract_ratios(const SimTrace& trace, double kappa) {
  if (kappa <= 0.0) throw InconsistentInput("kappa must be positive");
  const double t0 = dimension_time(trace, 0);
  const double t1 = dimension_time(trace, 1);
  const double t2 = dimension_time(trace, 2);
  if (t0 <= 0.0 || t1 <= 0.0)
    throw InconsistentInput("trace never visited the manifolds being compared");
  RatioEstimates out;
  // Equilibrium occupancies of adjacent dimensions differ by Z_{p+1}/(kappa Z_p).
  out.z1_over_z0 = kappa * t1 / t0;
  out.z2_over_z1 = kappa * t2 / t1;
  return out;
}

double rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw InconsistentInput("rank correlation needs two equal-length samples");
  const auto ranks = [](const std::vector<double>& v) {
    const size_t m = v.size();
    std::vector<size_t> order(m);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t i, size_t j) { return v[i] < v[j]; });
    std::vector<double> rank(m, 0.0);
    size_t i = 0;
    while (i < m) {
      size_t j = i;
      while (j + 1 < m && v[order[j + 1]] == v[order[i]]) ++j;
      const double shared = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank
      for (size_t k = i; k <= j; ++k) rank[order[k]] = shared;
      i = j + 1;
    }
    return rank;
  };
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double m = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    mean_a += ra[k];
    mean_b += rb[k];
  }
  mean_a /= m;
  mean_b /= m;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    cov += (ra[k] - mean_a) * (rb[k] - mean_b);
    var_a += (ra[k] - mean_a) * (ra[k] - mean_a);
    var_b += (rb[k] - mean_b) * (rb[k] - mean_b);
  }
  if (var_a <= 0.0 || var_b <= 0.0)
    throw InconsistentInput("rank correlation undefined for a constant sample");
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace sticky
