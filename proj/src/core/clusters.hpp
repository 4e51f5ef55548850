#pragma once

// The catalog of rigid clusters: geometric realization of contact graphs,
// rigidity verification, symmetry numbers from coordinates, multiplicities,
// and catalog I/O. Rigid clusters are the 0-dimensional manifolds of the
// landscape; everything else is built by breaking their bonds.

#include <optional>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/types.hpp"

namespace sticky {

// The published appendix tables count a labeled cluster once per distinct
// image under *all* isometries (n! / |full group|); the formula in the text
// counts proper rotations only and doubles chiral structures (C0 n! / sigma),
// which is uniformly twice the table value. Ratios and every physical
// observable are convention-invariant; "table" matches published numbers.
enum class MultiplicityConvention { table, paper_formula };

struct RigidMode {
  int id = 0;
  ContactGraph graph;
  Configuration representative;
  int sigma = 0;       // graph automorphisms realizable as proper rotations
  bool chiral = false; // no automorphism realizable as an improper isometry
  long multiplicity = 0;
  double h = 0.0;        // vibrational factor at the representative
  double inertia = 0.0;  // rotational factor at the representative
};

struct ModeCatalog {
  int n = 0;
  MultiplicityConvention convention = MultiplicityConvention::table;
  std::vector<RigidMode> rigid;
  std::string source;  // "file:<path>" or "enumerated"
};

// Randomized least-squares embedding of a contact graph as unit-distance
// coordinates with no non-bonded pair inside the unit sphere; polished by
// Newton projection. Throws UnrealizableGraph after max_restarts failures.
Configuration realize(const ContactGraph& graph, unsigned seed = 0, int max_restarts = 200);

// True iff the configuration has no internal degrees of freedom under the
// graph's bonds.
bool is_rigid(const Configuration& x, const ContactGraph& graph);

// sigma = number of graph automorphisms realizable as proper rotations of
// the representative (orthogonal superposition, RMSD < 1e-6, det +1);
// chiral = true iff no automorphism is realizable as an improper isometry.
std::pair<int, bool> symmetry_number(const Configuration& x, const ContactGraph& graph);

// Number of distinct labeled copies of the cluster. Throws InconsistentInput
// if the group order fails to divide n! (a symmetry-number bug).
long rigid_multiplicity(int n, int sigma, bool chiral, MultiplicityConvention convention);

// Parse `n=<n> id=<k> bonds=i-j,...` lines, realize each graph, and compute
// all derived quantities. Throws MissingInput / InconsistentInput.
ModeCatalog load_catalog(const std::string& path,
                         MultiplicityConvention convention = MultiplicityConvention::table);

void save_catalog(const ModeCatalog& catalog, const std::string& path);

// Brute-force enumeration: all connected graphs with 3n-6 edges, minimum
// degree 3, sparsity-feasible, deduplicated up to isomorphism, then realized
// and kept when rigid. Independent oracle for the shipped files.
ModeCatalog enumerate_catalog(int n,
                              MultiplicityConvention convention = MultiplicityConvention::table);

// Directory holding rigid_n<k>.txt; honors STICKY_DATA_DIR, else "data".
std::string default_data_dir();

// load_catalog(default_data_dir() + "/rigid_n<k>.txt").
ModeCatalog standard_catalog(int n,
                             MultiplicityConvention convention = MultiplicityConvention::table);

// Index of the catalog mode isomorphic to `graph`, if any.
std::optional<int> find_mode(const ModeCatalog& catalog, const ContactGraph& graph);

}  // namespace sticky
