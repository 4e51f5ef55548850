#include "core/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace sticky {

namespace {

// Columns of an orthonormal basis for the span of `raw`'s columns.
Mat orthonormal_span(const Mat& raw, double rank_tol) {
  Eigen::JacobiSVD<Mat> svd(raw, Eigen::ComputeThinU);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > rank_tol) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

}  // namespace

double bond_excess(const Configuration& x, const Bond& b) {
  return (x.particle(b.i) - x.particle(b.j)).norm() - 1.0;
}

Vec excess_vector(const Configuration& x, const ConstraintSet& bonds) {
  Vec y(static_cast<Eigen::Index>(bonds.size()));
  for (size_t k = 0; k < bonds.size(); ++k) {
    y(static_cast<Eigen::Index>(k)) = bond_excess(x, bonds[k]);
  }
  return y;
}

Mat constraint_jacobian(const Configuration& x, const ConstraintSet& bonds) {
  Mat jac = Mat::Zero(static_cast<Eigen::Index>(bonds.size()), 3 * x.n);
  for (size_t k = 0; k < bonds.size(); ++k) {
    const Bond& b = bonds[k];
    Vec3 diff = x.particle(b.i) - x.particle(b.j);
    double dist = diff.norm();
    if (dist < 1e-12) {
      throw DegenerateGeometry("coincident particles in bonded pair");
    }
    Vec3 unit = diff / dist;
    jac.block<1, 3>(static_cast<Eigen::Index>(k), 3 * b.i) = unit.transpose();
    jac.block<1, 3>(static_cast<Eigen::Index>(k), 3 * b.j) = -unit.transpose();
  }
  return jac;
}

Mat rigid_body_tangents(const Configuration& x) {
  const int n = x.n;
  Vec3 com = Vec3::Zero();
  for (int p = 0; p < n; ++p) com += x.particle(p);
  com /= n;

  Mat raw = Mat::Zero(3 * n, 6);
  for (int p = 0; p < n; ++p) {
    for (int axis = 0; axis < 3; ++axis) raw(3 * p + axis, axis) = 1.0;
    Vec3 rel = x.particle(p) - com;
    // Rotation generators: velocity field e_axis x (x_p - com).
    raw.block<3, 1>(3 * p, 3) = Vec3::UnitX().cross(rel);
    raw.block<3, 1>(3 * p, 4) = Vec3::UnitY().cross(rel);
    raw.block<3, 1>(3 * p, 5) = Vec3::UnitZ().cross(rel);
  }
  Mat basis = orthonormal_span(raw, tol::null_space);
  if (basis.cols() != 6) {
    throw DegenerateGeometry("collinear cluster: rigid-body motions are rank-deficient");
  }
  return basis;
}

Mat internal_tangents(const Configuration& x, const ConstraintSet& bonds,
                      int expected_dim) {
  const int m = static_cast<int>(bonds.size());
  Mat rigid = rigid_body_tangents(x);
  Mat stacked(m + 6, 3 * x.n);
  if (m > 0) stacked.topRows(m) = constraint_jacobian(x, bonds);
  stacked.bottomRows(6) = rigid.transpose();

  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > tol::null_space) ++rank;
  }
  Mat null_basis = svd.matrixV().rightCols(3 * x.n - rank);
  if (expected_dim >= 0 && null_basis.cols() != expected_dim) {
    throw SingularityError("null space dimension " + std::to_string(null_basis.cols()) +
                           ", expected " + std::to_string(expected_dim));
  }
  return null_basis;
}

Configuration newton_project(const Configuration& x, const ConstraintSet& bonds,
                             double tolerance, int max_iter) {
  Configuration cur = x;
  for (int iter = 0; iter < max_iter; ++iter) {
    Vec y = excess_vector(cur, bonds);
    if (bonds.empty() || y.lpNorm<Eigen::Infinity>() < tolerance) {
      return recenter(cur);
    }
    Mat jac = constraint_jacobian(cur, bonds);
    // Solve (J J^T) lambda = -y and move along the constraint gradients.
    Mat gram = jac * jac.transpose();
    Vec lambda = gram.ldlt().solve(-y);
    cur.coords += jac.transpose() * lambda;
  }
  throw ProjectionFailure("Newton projection did not converge in " +
                          std::to_string(max_iter) + " iterations");
}

double vibrational_factor(const Configuration& x, const ConstraintSet& bonds) {
  const int m = static_cast<int>(bonds.size());
  if (m == 0) return 1.0;
  Mat jac = constraint_jacobian(x, bonds);
  // sum_k grad y_k grad y_k^T shares its nonzero spectrum with J J^T.
  Mat gram = jac * jac.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  double h = 1.0;
  int nonzero = 0;
  for (int i = 0; i < m; ++i) {
    double lam = eig.eigenvalues()(i);
    if (lam > tol::eig_zero) {
      h /= std::sqrt(lam);
      ++nonzero;
    }
  }
  if (nonzero != m) {
    throw SingularityError("constraint Gram matrix has " + std::to_string(nonzero) +
                           " nonzero eigenvalues, expected " + std::to_string(m));
  }
  return h;
}

double rotational_factor(const Configuration& x) {
  Configuration c = recenter(x);
  Mat3 inertia = Mat3::Zero();
  for (int p = 0; p < c.n; ++p) {
    Vec3 r = c.particle(p);
    inertia += r.squaredNorm() * Mat3::Identity() - r * r.transpose();
  }
  double det = inertia.determinant();
  if (det <= 0.0) {
    throw DegenerateGeometry("inertia tensor is singular (collinear cluster)");
  }
  return std::sqrt(det);
}

Configuration recenter(const Configuration& x) {
  Configuration c = x;
  Vec3 com = Vec3::Zero();
  for (int p = 0; p < c.n; ++p) com += c.particle(p);
  com /= c.n;
  for (int p = 0; p < c.n; ++p) c.set_particle(p, c.particle(p) - com);
  return c;
}

Vec embed(const Configuration& x) {
  const int n = x.n;
  Vec e(n * (n - 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      e(k++) = (x.particle(i) - x.particle(j)).norm();
    }
  }
  return e;
}

Mat embedding_jacobian(const Configuration& x) {
  const int n = x.n;
  Mat jac = Mat::Zero(n * (n - 1) / 2, 3 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      Vec3 diff = x.particle(i) - x.particle(j);
      double dist = diff.norm();
      if (dist < 1e-12) throw DegenerateGeometry("coincident particles in embedding");
      Vec3 unit = diff / dist;
      jac.block<1, 3>(k, 3 * i) = unit.transpose();
      jac.block<1, 3>(k, 3 * j) = -unit.transpose();
    }
  }
  return jac;
}

namespace {

// Length of the embedded separation measured in the pushed-forward
// horizontal tangent basis at one endpoint.
double projected_length(const Configuration& at, const Vec& separation) {
  Mat rigid = rigid_body_tangents(at);
  // Horizontal = orthogonal complement of the rigid motions in R^{3n}.
  Eigen::JacobiSVD<Mat> svd(rigid.transpose(), Eigen::ComputeFullV);
  Mat horizontal = svd.matrixV().rightCols(3 * at.n - 6);
  Mat pushed = embedding_jacobian(at) * horizontal;  // columns span quotient tangent
  Vec coeffs = pushed.colPivHouseholderQr().solve(separation);
  return coeffs.norm();
}

}  // namespace

double quotient_distance(const Configuration& a, const Configuration& b) {
  Vec separation = embed(b) - embed(a);
  return 0.5 * (projected_length(a, separation) + projected_length(b, separation));
}

}  // namespace sticky
