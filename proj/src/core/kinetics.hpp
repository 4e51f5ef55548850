#pragma once

// Leading-order transition kinetics between rigid modes, assembled from the
// 1-D catalog: committor profiles along lines, the symmetric geometric rate
// matrix with self-line doubling, outgoing (per-occupancy) rates, and the
// grouping of nearly coincident rigid shapes that a trajectory classifier
// cannot tell apart.

#include <vector>

#include "core/clusters.hpp"
#include "core/line.hpp"
#include "core/types.hpp"

namespace sticky {

// Probability of reaching the far end of a line before returning to the
// start, at leading order in stickiness: the cumulative integral of
// (h I)^{-1} along the arc, normalized to end at one.
struct CommittorProfile {
  std::vector<double> s;  // arc positions, s.front() = 0
  std::vector<double> q;  // q.front() = 0, q.back() = 1, strictly increasing
};

// Cumulative trapezoid of (h I)^{-1} over the line's samples. Throws
// InconsistentInput on fewer than two samples and SingularityError when a
// sample has non-positive h I (the integrand blows up).
CommittorProfile committor(const LineManifold& line);

enum class RateConvention { leading_order, restricted_network };

struct RateNetwork {
  int n = 0;  // spheres
  RateConvention convention = RateConvention::leading_order;
  double kappa = 1.0;
  double z0 = 0.0;  // total rigid weight (the normalization)
  double z1 = 0.0;  // total line weight (sets the restriction factor)
  Mat geometric;    // symmetric mode-by-mode rate matrix, dimensionless
  int excluded_lines = 0;  // classes skipped for unidentified endpoints
};

// R_ab = Z_0^{-1} sum over line classes connecting a and b of n_k / Q_k,
// where Q_k is the class's integral of (h I)^{-1}; diagonal entries carry
// an extra factor 2 because a self line is entered from both of its ends.
// The restricted-network convention multiplies every entry by
// 1 / (1 + Z_1 / (kappa Z_0)), the leading-order probability of actually
// sitting in a rigid mode rather than on a line.
RateNetwork assemble_rates(const ModeCatalog& modes, const LineCatalog& lines,
                           double kappa,
                           RateConvention convention = RateConvention::leading_order);

// pi_a = n_a zeta_a / Z_0: leading-order equilibrium mode occupancies.
std::vector<double> equilibrium_probabilities(const ModeCatalog& modes);

// R_ab / pi_a: the rate out of a toward b per unit occupancy of a.
// Throws InconsistentInput on index mismatch or non-positive pi_a.
double outgoing_rate(const RateNetwork& network, int a, int b,
                     const std::vector<double>& pi);

// kappa^{-1} (D / d^2) R_ab: the rate in physical time.
double dimensional_rate(const RateNetwork& network, int a, int b, double diffusion,
                        double diameter = 1.0);

// Expected number of a<->b events in a trajectory of the given duration.
double expected_count(const RateNetwork& network, int a, int b, double duration,
                      double diffusion = 1.0, double diameter = 1.0);

// Separation of two shapes in the quotient space: root-mean-square
// difference of the pairwise-distance vectors, minimized over relabelings.
// Throws InconsistentInput when the particle counts differ.
double mode_separation(const Configuration& a, const Configuration& b);

struct ModeGrouping {
  std::vector<int> group_of;              // mode index -> group index
  std::vector<std::vector<int>> members;  // group index -> member modes
};

// Union-find over mode pairs closer than the threshold. The default sits in
// the wide gap between shapes a classifier confuses (separation < 0.03 for
// up to eight spheres) and genuinely distinct ones (> 0.11).
ModeGrouping group_near_modes(const ModeCatalog& catalog, double threshold = 0.08);

// Collapse a rate network onto groups: rates between distinct groups add,
// rates within a group are dropped (the classifier cannot observe them).
RateNetwork grouped_rates(const RateNetwork& network, const ModeGrouping& grouping);

}  // namespace sticky
