#pragma once

// Reference cluster geometries shared by the test suites. All edges have
// unit length; coordinates are exact closed forms where available.

#include <cmath>

#include "core/geometry.hpp"
#include "core/types.hpp"

namespace fixtures {

using sticky::Bond;
using sticky::Configuration;
using sticky::ConstraintSet;

// Every pair at unit distance within `eps` becomes a bond.
inline ConstraintSet contact_bonds(const Configuration& x, double eps = 1e-6) {
  ConstraintSet bonds;
  for (int i = 0; i < x.n; ++i) {
    for (int j = i + 1; j < x.n; ++j) {
      if (std::abs((x.particle(i) - x.particle(j)).norm() - 1.0) < eps) {
        bonds.push_back({i, j});
      }
    }
  }
  return bonds;
}

inline Configuration dimer() {
  Configuration x = sticky::make_configuration(2);
  x.set_particle(1, {1.0, 0.0, 0.0});
  return sticky::recenter(x);
}

// Triangular bipyramid: equilateral ring of 3, apexes above and below.
inline Configuration bipyramid() {
  Configuration x = sticky::make_configuration(5);
  const double r = 1.0 / std::sqrt(3.0);
  for (int k = 0; k < 3; ++k) {
    double a = 2.0 * M_PI * k / 3.0;
    x.set_particle(k, {r * std::cos(a), r * std::sin(a), 0.0});
  }
  const double zz = std::sqrt(2.0 / 3.0);
  x.set_particle(3, {0.0, 0.0, zz});
  x.set_particle(4, {0.0, 0.0, -zz});
  return sticky::recenter(x);
}

// Regular octahedron, vertices on the axes at radius 1/sqrt(2).
inline Configuration octahedron() {
  Configuration x = sticky::make_configuration(6);
  const double s = 1.0 / std::sqrt(2.0);
  x.set_particle(0, {s, 0, 0});
  x.set_particle(1, {-s, 0, 0});
  x.set_particle(2, {0, s, 0});
  x.set_particle(3, {0, -s, 0});
  x.set_particle(4, {0, 0, s});
  x.set_particle(5, {0, 0, -s});
  return sticky::recenter(x);
}

// Polytetrahedron: three face-sharing tetrahedra. Four particles sit on a
// circle of radius sqrt(3)/2 in the midplane at the dihedral-angle spacing
// acos(1/3) = 70.5288 degrees, the remaining two on the axis at +-1/2.
inline Configuration polytetrahedron() {
  Configuration x = sticky::make_configuration(6);
  const double R = std::sqrt(3.0) / 2.0;
  const double step = std::acos(1.0 / 3.0);
  const int ring_label[4] = {2, 0, 3, 1};
  for (int k = 0; k < 4; ++k) {
    double a = k * step;
    x.set_particle(ring_label[k], {R * std::cos(a), R * std::sin(a), 0.0});
  }
  x.set_particle(4, {0.0, 0.0, 0.5});
  x.set_particle(5, {0.0, 0.0, -0.5});
  return sticky::recenter(x);
}

// Apply a fixed non-trivial proper rotation plus translation.
inline Configuration rigid_motion(const Configuration& x) {
  Configuration out = x;
  sticky::Mat3 rot =
      (Eigen::AngleAxisd(0.7, sticky::Vec3(1, 2, 2).normalized()) *
       Eigen::AngleAxisd(-0.3, sticky::Vec3::UnitZ()))
          .toRotationMatrix();
  sticky::Vec3 shift(0.4, -1.1, 0.25);
  for (int p = 0; p < x.n; ++p) out.set_particle(p, rot * x.particle(p) + shift);
  return out;
}

}  // namespace fixtures
