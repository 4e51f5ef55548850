#pragma once

// Verification harness: overdamped Langevin dynamics of n spheres with a
// truncated short-range pair potential, periodic topological classification
// of the instantaneous contact graph against the mode catalogs, occupancy
// bookkeeping per manifold dimension, and labeled transition counting
// between rigid shapes. Nondimensional units throughout: sphere diameter,
// diffusion constant, and inverse temperature are all one.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "core/clusters.hpp"
#include "core/face.hpp"
#include "core/line.hpp"
#include "core/statmech.hpp"
#include "core/types.hpp"

namespace sticky {

struct SimParams {
  int n = 6;
  PotentialSpec potential;  // depth, inverse range, core stiffness, cutoff
  double dt = 0.0;          // 0 selects the stability default
  double total_time = 1.0;
  double classify_interval = 1e-2;  // time between contact-graph checks
  double confine_radius = 0.0;      // reflecting sphere about the origin; 0 = none
  std::uint64_t seed = 1;

  // Forward Euler is stable only well below 1 / (m^2 U''(1)); default to a
  // sixth of it.
  double stability_dt() const {
    const double curvature = potential.core_stiffness * potential.core_stiffness *
                             2.0 * potential.depth * potential.range * potential.range;
    return (1.0 / 6.0) / curvature;
  }

  // Bonds are declared at a looser cutoff than the force truncation, so a
  // vibrating bond does not flicker in and out of the contact graph.
  double classify_cutoff() const { return 1.0 + 2.0 / potential.range; }
};

struct SimState {
  Configuration x;
  double time = 0.0;
};

// Value and radial force of the simulated pair potential: the smooth
// attractive well for r >= 1, a stiffened parabolic core for r < 1, both
// shifted by a linear term so that energy and force vanish continuously at
// the cutoff radius. `force` is -dU/dr (positive pushes the pair apart).
struct PairPotential {
  double energy = 0.0;
  double force = 0.0;
};
PairPotential potential_eval(double r, const PotentialSpec& spec);

// -grad U summed over all pairs, laid out like the configuration's coords.
Vec conservative_drift(const Configuration& x, const PotentialSpec& spec);

// One forward Euler update x += -grad U dt + sqrt(2 dt) * noise, where
// `standard_normal` supplies the 3n unit-variance draws. The deterministic
// entry point is the test hook; the rng overload fills the draws itself.
void step(SimState& state, const SimParams& params, const Vec& standard_normal);
void step(SimState& state, const SimParams& params, std::mt19937_64& rng);

// The catalogs a classification run matches against; absent catalogs simply
// leave the corresponding dimension unidentifiable.
struct Catalogs {
  const ModeCatalog* modes = nullptr;
  const LineCatalog* lines = nullptr;
  const FaceCatalog* faces = nullptr;
};

// Outcome of one contact-graph classification. `dimension` is -1 when the
// graph matches nothing; `anomaly` flags a graph with enough bonds to be a
// catalogued manifold that matches no entry of the provided catalogs.
struct ClassifyResult {
  int dimension = -1;
  int index = -1;
  bool anomaly = false;
};

// Build the contact graph at the classification cutoff and match it by
// isomorphism: 3n-6 bonds against rigid modes, 3n-7 against line classes,
// 3n-8 against face classes.
ClassifyResult classify(const Configuration& x, const SimParams& params,
                        const Catalogs& catalogs);

struct SimTrace {
  int n = 0;
  std::uint64_t seed = 0;
  double dt = 0.0;
  long long steps = 0;
  double elapsed = 0.0;             // total simulated time
  double classified_elapsed = 0.0;  // time covered by classification checks
  std::vector<double> rigid_time;   // per rigid catalog index
  std::vector<double> line_time;    // per line class
  std::vector<double> face_time;    // per face class
  double unclassified_time = 0.0;
  std::vector<std::vector<long>> transitions;  // rigid a -> b labeled-change counts
  long anomalies = 0;
};

using SimObserver = std::function<void(const SimState&)>;

// Run a single trajectory from `start`, classifying every classify_interval
// and calling the observer (when given) at the same cadence. Throws
// InconsistentInput for invalid parameters, a start of the wrong size, or a
// time step above the stability bound.
SimTrace simulate(const SimParams& params, const SimState& start,
                  const Catalogs& catalogs = {}, const SimObserver& observer = {});

// Start at rest in a catalogued rigid shape.
SimState initial_state(const ModeCatalog& catalog, int mode_index = 0);

// Sum a replica's statistics into `into` (replicas differ only by seed).
void merge(SimTrace& into, const SimTrace& other);

// Total classified time spent on manifolds of dimension p in {0, 1, 2}.
double dimension_time(const SimTrace& trace, int p);

// Ratios of geometric weights implied by the occupancy statistics: the
// equilibrium time ratio between adjacent dimensions times the bond weight.
struct RatioEstimates {
  double z1_over_z0 = 0.0;
  double z2_over_z1 = 0.0;
};
RatioEstimates extract_ratios(const SimTrace& trace, double kappa);

// Spearman rank correlation (average ranks on ties); inputs must have equal
// size of at least two.
double rank_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sticky
