#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sticky {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Tolerances used across the numerical pipeline. Kept in one place so the
// tests pin the same values the implementation runs with.
namespace tol {
// Newton projection residual target for on-manifold points.
inline constexpr double projection = 1e-12;
// |excess| target when bisecting a bond-formation event.
inline constexpr double bond_hit = 1e-10;
// Singular values below this count as zero when extracting null spaces.
inline constexpr double null_space = 1e-9;
// Eigenvalues of the constraint Gram matrix below this count as zero.
inline constexpr double eig_zero = 1e-8;
// RMSD threshold for accepting a permutation as a realized isometry.
inline constexpr double superpose = 1e-6;
// Non-bonded pairs must clear the unit distance by this much in a valid
// rigid realization; touching pairs mean the graph is not the true contact
// graph of the found geometry.
inline constexpr double clearance = 1e-6;
}  // namespace tol

// Error taxonomy. The C API and CLI map these onto status/exit codes:
// numeric failure -> 1, missing input -> 2, inconsistent input -> 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProjectionFailure : NumericError {
  using NumericError::NumericError;
};
struct SingularityError : NumericError {
  using NumericError::NumericError;
};
struct DegenerateGeometry : NumericError {
  using NumericError::NumericError;
};
struct UnrealizableGraph : NumericError {
  using NumericError::NumericError;
};
struct TopologyError : NumericError {
  using NumericError::NumericError;
};
struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A unit-distance contact between particles i < j.
struct Bond {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Bond&, const Bond&) = default;
};

// Sorted list of distinct bonds; the multi-index naming a constraint manifold.
using ConstraintSet = std::vector<Bond>;

// 3n particle coordinates, sphere diameter d = 1.
struct Configuration {
  int n = 0;
  Vec coords;  // length 3n, particle p at [3p, 3p+3)

  Vec3 particle(int p) const { return coords.segment<3>(3 * p); }
  void set_particle(int p, const Vec3& v) { coords.segment<3>(3 * p) = v; }
};

inline Configuration make_configuration(int n) {
  Configuration c;
  c.n = n;
  c.coords = Vec::Zero(3 * n);
  return c;
}

inline ConstraintSet sorted_bonds(std::vector<Bond> bonds) {
  std::sort(bonds.begin(), bonds.end());
  bonds.erase(std::unique(bonds.begin(), bonds.end()), bonds.end());
  return bonds;
}

}  // namespace sticky
