#include "core/line.hpp"

#include <algorithm>
#include <cmath>

#include "core/geometry.hpp"

namespace sticky {

namespace {

std::vector<Bond> unconstrained_pairs(int n, const ConstraintSet& bonds) {
  std::vector<Bond> watched;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Bond pair{i, j};
      if (!std::binary_search(bonds.begin(), bonds.end(), pair)) watched.push_back(pair);
    }
  }
  return watched;
}

// Smallest watched excess and the pair attaining it.
std::pair<double, Bond> min_excess(const Configuration& x, const std::vector<Bond>& watched) {
  double lowest = 1e30;
  Bond at{0, 0};
  for (const Bond& pair : watched) {
    double e = bond_excess(x, pair);
    if (e < lowest) {
      lowest = e;
      at = pair;
    }
  }
  return {lowest, at};
}

// Project x + t*v with step-halving retries (the retry only tightens the
// Newton basin; the caller controls the nominal step).
Configuration project_step(const Configuration& x, const Vec& direction, double t,
                           const ConstraintSet& bonds) {
  for (int attempt = 0; attempt < 6; ++attempt) {
    Configuration trial = x;
    trial.coords += (t / (1 << attempt)) * direction;
    try {
      return newton_project(trial, bonds);
    } catch (const ProjectionFailure&) {
      if (attempt == 5) throw;
    }
  }
  throw ProjectionFailure("unreachable");
}

}  // namespace

Walk walk_one_dim(const Configuration& start, const ConstraintSet& bonds,
                  const Bond& opening, double ds) {
  const std::vector<Bond> watched = unconstrained_pairs(start.n, bonds);
  Walk walk;

  Configuration x = newton_project(start, bonds);
  walk.samples.push_back({x, 0.0, vibrational_factor(x, bonds), rotational_factor(x)});

  // Initial direction: open the released pair.
  Mat tangent = internal_tangents(x, bonds, 1);
  Vec direction = tangent.col(0);
  Mat opening_grad = constraint_jacobian(x, {opening});
  if ((opening_grad * direction)(0) < 0.0) direction = -direction;

  const int max_steps = 20000;
  for (int step = 1; step <= max_steps; ++step) {
    Configuration trial = project_step(x, direction, ds, bonds);
    auto [lowest, pair] = min_excess(trial, watched);

    if (lowest < 0.0) {
      // A pair crossed unit distance inside this step: bisect the step
      // length until the first-formed bond sits on the sphere.
      double lo = 0.0, hi = ds;
      Configuration hit = trial;
      for (int iter = 0; iter < 100; ++iter) {
        double mid = 0.5 * (lo + hi);
        Configuration probe = project_step(x, direction, mid, bonds);
        auto [e, p] = min_excess(probe, watched);
        if (std::abs(e) < tol::bond_hit) {
          hit = probe;
          pair = p;
          break;
        }
        if (e < 0.0) {
          hi = mid;
          hit = probe;
          pair = p;
        } else {
          lo = mid;
        }
      }
      walk.formed = pair;

      // Flag a second pair arriving simultaneously (corner hit head-on).
      double runner_up = 1e30;
      for (const Bond& other : watched) {
        if (other == pair) continue;
        runner_up = std::min(runner_up, std::abs(bond_excess(hit, other)));
      }
      walk.tie_flag = runner_up < 1e-8;

      if (pair == opening) {
        double back = quotient_distance(hit, walk.samples.front().x);
        throw TopologyError("walk re-formed the released pair (closed loop, distance " +
                            std::to_string(back) + " from start)");
      }

      // Keep arc increments in [0.5, 1.5] steps: a short final segment is
      // merged into the previous one.
      double increment = quotient_distance(x, hit);
      if (increment < 0.5 * ds && walk.samples.size() >= 2) {
        walk.samples.pop_back();
        const PathSample& prev = walk.samples.back();
        increment = quotient_distance(prev.x, hit);
      }
      double s_end = walk.samples.back().s + increment;
      walk.samples.push_back({hit, s_end, vibrational_factor(hit, bonds),
                              rotational_factor(hit)});
      walk.length = s_end;
      return walk;
    }

    double s_next = walk.samples.back().s + quotient_distance(x, trial);
    walk.samples.push_back({trial, s_next, vibrational_factor(trial, bonds),
                            rotational_factor(trial)});
    x = trial;

    Mat next_tangent = internal_tangents(x, bonds, 1);
    Vec next_direction = next_tangent.col(0);
    if (next_direction.dot(direction) < 0.0) next_direction = -next_direction;
    direction = next_direction;

    if (step % 16 == 0 && step > 16 &&
        quotient_distance(x, walk.samples.front().x) < 0.5 * ds) {
      throw TopologyError("walk returned to its start without forming a bond");
    }
  }
  throw TopologyError("no bond formed after " + std::to_string(max_steps) + " steps");
}

std::pair<double, double> line_integrals(const std::vector<PathSample>& samples) {
  double zeta = 0.0, q = 0.0;
  for (size_t k = 0; k + 1 < samples.size(); ++k) {
    double step = samples[k + 1].s - samples[k].s;
    double f0 = samples[k].h * samples[k].inertia;
    double f1 = samples[k + 1].h * samples[k + 1].inertia;
    zeta += 0.5 * (f0 + f1) * step;
    q += 0.5 * (1.0 / f0 + 1.0 / f1) * step;
  }
  return {zeta, q};
}

LineManifold trace_line(const ModeCatalog& catalog, int mode_index, const Bond& broken,
                        double ds) {
  const RigidMode& mode = catalog.rigid.at(static_cast<size_t>(mode_index));
  if (!mode.graph.has_edge(broken.i, broken.j)) {
    throw InconsistentInput("bond to break is not present in the rigid mode");
  }
  ConstraintSet bonds;
  for (const Bond& b : mode.graph.bonds()) {
    if (!(b == broken)) bonds.push_back(b);
  }

  LineManifold line;
  line.bonds = bonds;
  line.start_mode = mode_index;
  line.broken = broken;

  Walk walk = walk_one_dim(mode.representative, bonds, broken, ds);
  line.samples = std::move(walk.samples);
  line.formed = walk.formed;
  line.tie_flag = walk.tie_flag;
  line.length = walk.length;

  ContactGraph end_graph = ContactGraph::from_bonds(mode.graph.n, bonds);
  end_graph.add_edge(walk.formed.i, walk.formed.j);
  line.end_graph = end_graph;
  std::optional<int> end_mode = find_mode(catalog, end_graph);
  if (!end_mode) {
    if (is_rigid(line.samples.back().x, end_graph)) {
      throw InconsistentInput("line endpoint is rigid but missing from the catalog");
    }
    throw SingularityError("line endpoint has 3n-6 bonds but remains flexible");
  }
  line.end_mode = *end_mode;

  auto [zeta, q] = line_integrals(line.samples);
  line.zeta = zeta;
  line.q_integral = q;
  return line;
}

long floppy_multiplicity(const ModeCatalog& catalog, const std::map<int, int>& nu,
                         int corner_slots) {
  long total = 0;
  for (const auto& [mode_index, count] : nu) {
    total += catalog.rigid.at(static_cast<size_t>(mode_index)).multiplicity * count;
  }
  if (corner_slots <= 0 || total % corner_slots != 0) {
    throw InconsistentInput("incidence total " + std::to_string(total) +
                            " is not divisible by " + std::to_string(corner_slots) +
                            " corner slots");
  }
  return total / corner_slots;
}

LineCatalog build_line_catalog(const ModeCatalog& catalog, double ds) {
  LineCatalog lines;
  lines.n = catalog.n;

  for (size_t mode_index = 0; mode_index < catalog.rigid.size(); ++mode_index) {
    for (const Bond& bond : catalog.rigid[mode_index].graph.bonds()) {
      LineManifold line = trace_line(catalog, static_cast<int>(mode_index), bond, ds);
      ContactGraph interior = ContactGraph::from_bonds(lines.n, line.bonds);

      LineClass* home = nullptr;
      for (LineClass& cls : lines.classes) {
        ContactGraph cls_interior = ContactGraph::from_bonds(lines.n, cls.representative.bonds);
        std::pair<int, int> cls_ends =
            std::minmax(cls.representative.start_mode, cls.representative.end_mode);
        std::pair<int, int> line_ends = std::minmax(line.start_mode, line.end_mode);
        if (cls_ends == line_ends && isomorphism(cls_interior, interior)) {
          home = &cls;
          break;
        }
      }
      if (!home) {
        lines.classes.push_back({std::move(line), {}, 0});
        home = &lines.classes.back();
      }
      home->nu[static_cast<int>(mode_index)] += 1;
    }
  }

  for (LineClass& cls : lines.classes) {
    cls.multiplicity = floppy_multiplicity(catalog, cls.nu, 2);
  }
  return lines;
}

}  // namespace sticky
