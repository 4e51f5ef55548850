#pragma once

// Two-dimensional floppy manifolds: break a pair of bonds of a rigid
// cluster, trace the boundary polygon of rigid corners and 1-D edges, fill
// the interior with on-manifold samples, flatten to a disk (convex
// combination parameterization), triangulate, relax the mesh with springs,
// and integrate entropic weights with piecewise-linear elements.

#include <array>
#include <functional>
#include <map>
#include <vector>

#include "core/clusters.hpp"
#include "core/line.hpp"
#include "core/types.hpp"

namespace sticky {

inline constexpr double kFaceStep = 0.05;  // default boundary/interior step

struct FaceCorner {
  ContactGraph graph;     // labeled 3n-6 contact graph
  int mode = -1;          // catalog index
  Configuration x;
  Bond extra_old;         // the constraint inherited from the incoming edge
  Bond extra_new;         // the constraint formed on arrival
};

struct FaceEdge {
  Bond kept;    // the extra constraint active along this edge
  Bond opened;  // the corner constraint released to walk this edge
  std::vector<PathSample> samples;  // corner-to-corner chain, h/I under edge bonds
  double length = 0.0;              // quotient arc length
};

// Ordered loop: edges[e] runs from corners[e] to corners[(e+1) % E].
struct FaceBoundary {
  std::vector<FaceCorner> corners;
  std::vector<FaceEdge> edges;
};

// Walk around a face starting from a rigid mode with two bonds removed:
// release one extra constraint at a time, trace the resulting 1-D edge to
// the next corner, and repeat until the walk returns to the start corner.
// Throws TopologyError if the loop fails to close within max_edges.
FaceBoundary trace_boundary(const ModeCatalog& catalog, int mode_index, const Bond& first,
                            const Bond& second, double ds = kFaceStep, int max_edges = 12);

struct FacePoint {
  enum Kind { corner, boundary, interior };
  Kind kind = interior;
  int edge = -1;     // owning edge for boundary points, corner index for corners
  double s = 0.0;    // arc position along the owning edge (boundary points)
  Configuration x;
  Vec embedding;     // cached pairwise-distance vector
  double u = 0.0, v = 0.0;  // planar parameterization
  double h = 0.0, inertia = 0.0;  // under the face constraint set
};

struct FaceOptions {
  double ds = kFaceStep;    // boundary and interior sampling step
  int neighbor_k = 12;      // nearest neighbors in the convex-combination map
  double dt = 0.1;          // spring relaxation step
  double pressure = 1.2;    // spring rest length = pressure * mean edge length
  int max_rounds = 40;      // re-triangulation rounds before giving up
  bool strict_quality = false;  // keep relaxing until min quality > 0.2
};

struct FaceManifold {
  ConstraintSet bonds;  // the 3n-8 active constraints
  FaceBoundary boundary;
  std::vector<FacePoint> points;  // corners, then boundary samples, then interior
  std::vector<std::array<int, 3>> triangles;
  std::vector<double> tri_areas;  // quotient-metric triangle areas (parallel)
  int start_mode = -1;
  Bond broken_first, broken_second;
  double area = 0.0;   // S = integral of 1 (quotient metric)
  double zeta = 0.0;   // integral of h*I
  double hbar = 0.0;   // area-average of h
  double ibar = 0.0;   // area-average of I
  double min_quality = 0.0;      // worst 2*r_in/r_circ over quotient-metric triangles
  bool strict_converged = false; // min_quality > 0.2 achieved
  int relax_rounds = 0;
};

// Full pipeline for one face: boundary, interior sampling, parameterization,
// relaxation, and the FEM integrals.
FaceManifold build_face(const ModeCatalog& catalog, int mode_index, const Bond& first,
                        const Bond& second, const FaceOptions& options = {});

// Piecewise-linear quadrature of f(h, I) over the relaxed mesh using
// Heron-formula triangle areas from quotient-metric edge lengths.
double fem_integrate(const FaceManifold& face,
                     const std::function<double(double, double)>& f);

// V - E + F of the mesh; 1 for a triangulated disk.
int euler_characteristic(const FaceManifold& face);

// Line-catalog class of each boundary edge, in boundary order: the edge's
// bond set (the face's plus its kept constraint) matched by isomorphism;
// -1 when an edge matches no catalogued class.
std::vector<int> boundary_edge_classes(const FaceManifold& face,
                                       const LineCatalog& lines);

struct FaceClass {
  FaceManifold representative;
  std::map<int, int> nu;          // catalog mode index -> bond pairs landing here
  std::vector<int> corner_modes;  // corner catalog indices in boundary order
  long multiplicity = 0;          // n_alpha
};

struct FaceCatalog {
  int n = 0;
  std::vector<FaceClass> classes;
  int failed_pairs = 0;  // (mode, pair) choices whose boundary failed to trace
};

// Census over all (mode, bond-pair) choices. When `boundaries_only` is set,
// the representatives carry boundary data but skip the interior/FEM stage
// (used for counting-only runs).
FaceCatalog build_face_catalog(const ModeCatalog& catalog, const FaceOptions& options = {},
                               bool boundaries_only = false);

}  // namespace sticky
