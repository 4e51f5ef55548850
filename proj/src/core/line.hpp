#pragma once

// One-dimensional floppy manifolds: break a single bond of a rigid cluster,
// walk the released degree of freedom until a new bond forms, and record the
// sampled geometry (arc length, h, I) needed for the entropy and rate
// integrals. The stepping core is shared with the 2-D boundary tracer.

#include <map>
#include <vector>

#include "core/clusters.hpp"
#include "core/graph.hpp"
#include "core/types.hpp"

namespace sticky {

struct PathSample {
  Configuration x;
  double s = 0.0;        // cumulative arc length in the quotient metric
  double h = 0.0;        // vibrational factor under the walk's constraint set
  double inertia = 0.0;  // rotational factor
};

// Result of walking a 1-D constraint manifold from a start point until some
// unconstrained pair reaches unit distance.
struct Walk {
  std::vector<PathSample> samples;
  Bond formed;            // the pair that reached unit distance
  bool tie_flag = false;  // a second pair formed within 1e-8 simultaneously
  double length = 0.0;
};

// Walk the single internal degree of freedom of `bonds` starting at `start`,
// in the direction that initially increases the excess of `opening`.
// Terminates when any pair outside `bonds` reaches unit distance (bisected
// to |excess| < 1e-10). Throws TopologyError on a closed loop (return to the
// start without forming a bond) and ProjectionFailure when stepping fails.
Walk walk_one_dim(const Configuration& start, const ConstraintSet& bonds,
                  const Bond& opening, double ds);

struct LineManifold {
  ConstraintSet bonds;  // the 3n-7 active constraints
  std::vector<PathSample> samples;
  int start_mode = -1;        // catalog index of the rigid mode traced from
  int end_mode = -1;          // catalog index identified at the far end
  ContactGraph end_graph;     // labeled contact graph at the far endpoint
  Bond broken;                // bond removed from the start representative
  Bond formed;                // bond formed at the far endpoint
  double length = 0.0;
  double zeta = 0.0;        // integral of h*I ds
  double q_integral = 0.0;  // integral of (h*I)^{-1} ds
  bool tie_flag = false;
};

// A deduplicated line class with its per-rigid-mode adjacency counts nu
// (how many broken bonds of one labeled copy of that mode land here).
struct LineClass {
  LineManifold representative;
  std::map<int, int> nu;  // catalog mode index -> nu_i
  long multiplicity = 0;  // n_alpha
};

struct LineCatalog {
  int n = 0;
  std::vector<LineClass> classes;
};

inline constexpr double kLineStep = 0.01;  // default arc-length step

// Break `broken` in the given catalog mode and trace to the far endpoint;
// fills samples, integrals, and endpoint identification.
LineManifold trace_line(const ModeCatalog& catalog, int mode_index, const Bond& broken,
                        double ds = kLineStep);

// Trapezoidal (zeta, Q) over the samples.
std::pair<double, double> line_integrals(const std::vector<PathSample>& samples);

// Multiplicity of a floppy manifold adjacent to rigid modes: sum of
// n_i * nu_i over rigid classes, divided by the number of endpoint/corner
// slots. Throws InconsistentInput when the division is not exact.
long floppy_multiplicity(const ModeCatalog& catalog, const std::map<int, int>& nu,
                         int corner_slots);

// Trace every (mode, bond) pair of the catalog and group the results by
// interior-graph isomorphism and endpoint classes.
LineCatalog build_line_catalog(const ModeCatalog& catalog, double ds = kLineStep);

}  // namespace sticky
