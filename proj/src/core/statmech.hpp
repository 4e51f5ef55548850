#pragma once

// Equilibrium assembly on top of the geometric catalogs: the sticky
// parameter of a pair potential, per-mode free energies, dimension-resolved
// totals Z_p, yields as a function of stickiness, and the crossover
// temperatures where neighboring dimensions exchange dominance.

#include <functional>
#include <vector>

#include "core/clusters.hpp"
#include "core/face.hpp"
#include "core/line.hpp"
#include "core/types.hpp"

namespace sticky {

// Pair interaction with a closed-form sticky parameter: a Morse tail of
// depth E and inverse range rho outside contact, a parabolic core whose
// curvature is core_stiffness^2 times the contact curvature inside, the
// whole tail truncated and tilted to zero value and slope at the cutoff.
struct PotentialSpec {
  double depth = 10.0;          // E, in k_B T at the reference temperature
  double range = 30.0;          // rho, in inverse sphere diameters
  double core_stiffness = 2.0;  // m, inner-wall stiffness multiplier
  double cutoff = 0.0;          // r_c; 0 selects the default 1 + 4/rho

  double cutoff_radius() const { return cutoff > 0.0 ? cutoff : 1.0 + 4.0 / range; }
  // Untruncated Morse tail and its slope, valid for r >= 1.
  double morse(double r) const;
  double morse_slope(double r) const;
};

enum class KappaProvenance { closed_form, laplace, assigned };

struct StickyParameter {
  double kappa = 0.0;
  KappaProvenance provenance = KappaProvenance::assigned;
};

// kappa = ((m+1)/m) e^D sqrt(pi/2) / sqrt(2 E rho^2), where
// D = E + U(r_c) + U'(r_c)(1 - r_c) is the well depth at contact after the
// truncation tilts the tail by its tangent at the cutoff (the tilt raises
// the minimum, which is what makes D shallower than E). Throws
// InconsistentInput on non-positive depth, range, or stiffness, or a cutoff
// at or inside contact.
StickyParameter kappa_closed_form(const PotentialSpec& spec);

// Sticky parameter of an arbitrary smooth well by steepest descent: locate
// the interior minimum of U on [r_lo, r_hi] by golden section, take the
// curvature from a 5-point second difference (h = 1e-4), and return
//   kappa = e^{-U(r*)/T} / sqrt((2/pi) U''(r*) / T).
// Throws InconsistentInput when the minimum sits at an edge of the bracket,
// is not below zero, or has non-positive curvature, or when T <= 0.
StickyParameter kappa_laplace(const std::function<double(double)>& U, double r_lo,
                              double r_hi, double T);

// F/kT = -m ln(kappa) - ln(n zeta): each of the m bonds contributes
// -ln kappa, the geometry of the mode the rest. Configuration-independent
// constants are dropped throughout, so only differences are meaningful.
double free_energy(int bonds, long multiplicity, double zeta, double kappa);

// One catalog entry in the assembled landscape.
struct SummaryRow {
  int dimension = 0;  // manifold dimension p
  int index = 0;      // position within its dimension's catalog
  int bonds = 0;      // m = 3n - 6 - p active constraints
  long multiplicity = 0;
  double zeta = 0.0;     // geometric weight integral of the class
  double hbar = 0.0;     // measure-averaged vibrational factor
  double ibar = 0.0;     // measure-averaged rotational factor
  double measure = 0.0;  // 0-D: 0; 1-D: length; 2-D: area
  std::vector<int> adjacent_modes;  // rigid classes at endpoints/corners
  double free_energy = 0.0;         // F/kT at the summary's kappa
};

struct LandscapeSummary {
  int n = 0;
  double kappa = 1.0;  // stickiness the free-energy column refers to
  std::vector<SummaryRow> rows;
  double z0 = 0.0, z1 = 0.0, z2 = 0.0;  // Z_p = sum over rows of n zeta

  double z(int p) const;  // bounds-checked totals access, p in {0, 1, 2}
};

// Assemble the summary from the three catalogs (which must agree on n);
// free energies are evaluated at `kappa`.
LandscapeSummary totals(const ModeCatalog& modes, const LineCatalog& lines,
                        const FaceCatalog& faces, double kappa = 1.0);

// Refill the free-energy column for a new stickiness.
void set_kappa(LandscapeSummary& summary, double kappa);

// Grand total Z = sum_p kappa^{3n-6-p} Z_p.
double partition_function(const LandscapeSummary& summary, double kappa);

struct Yields {
  double y0 = 0.0, y1 = 0.0, y2 = 0.0;
};

// y_p = kappa^{2-p} Z_p / (kappa^2 Z_0 + kappa Z_1 + Z_2); sums to one.
Yields yields(const LandscapeSummary& summary, double kappa);

// Temperature law kappa(T) = e^{-u0/T} / sqrt(curvature / T) for a well of
// depth u0 < 0 and hard-sphere steepest-descent curvature (2/pi) U''(min)
// = `curvature`, both in k_B units. Decreasing in T up to T = -2 u0, where
// the square-root prefactor takes over.
struct StickyLaw {
  double u0 = -4.0;
  double curvature = 15.0;

  double kappa(double temperature) const;
};

// The temperature solving kappa(T) Z_p = Z_{p+1}, i.e. where dimension p
// stops dominating dimension p+1; bisection on the decreasing branch of
// the law. Throws InconsistentInput when p is outside {0, 1}, a total is
// non-positive, the law is not a decaying well, or the target ratio is
// below the law's minimum (no root).
double critical_temperature(const LandscapeSummary& summary, int p, const StickyLaw& law);

}  // namespace sticky
