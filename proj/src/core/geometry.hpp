#pragma once

// Configuration-space primitives: bond constraints, Jacobians, tangent
// spaces, Newton projection onto constraint manifolds, the vibrational
// factor h (from the Gram spectrum of the constraint gradients), the
// rotational factor I (inertia determinant), and distances in the quotient
// of configuration space by rigid motions, measured in the space of all
// pairwise distances.

#include "core/types.hpp"

namespace sticky {

// |x_i - x_j| - 1 for one pair; negative means overlap.
double bond_excess(const Configuration& x, const Bond& b);

// Stacked excesses for every bond in the set, in order.
Vec excess_vector(const Configuration& x, const ConstraintSet& bonds);

// m x 3n matrix; row k is the gradient of the k-th bond excess.
// Throws DegenerateGeometry if a bonded pair is (numerically) coincident.
Mat constraint_jacobian(const Configuration& x, const ConstraintSet& bonds);

// 6 orthonormal columns spanning infinitesimal translations and rotations
// about the center of mass. Throws DegenerateGeometry when the cluster is
// collinear (rotational rank < 3).
Mat rigid_body_tangents(const Configuration& x);

// Orthonormal basis (columns) of the joint null space of the constraint
// Jacobian and the rigid-body motions: the internal degrees of freedom.
// `expected_dim` < 0 accepts whatever dimension arises; otherwise a
// mismatch throws SingularityError.
Mat internal_tangents(const Configuration& x, const ConstraintSet& bonds,
                      int expected_dim = -1);

// Newton iteration on the Lagrange multipliers: x' = x + J^T lambda with
// |excess| < tol for every bond. Recenters the result on the center of
// mass. Throws ProjectionFailure if not converged in max_iter steps.
Configuration newton_project(const Configuration& x, const ConstraintSet& bonds,
                             double tolerance = tol::projection,
                             int max_iter = 50);

// h = prod over the m nonzero eigenvalues lambda_i of sum_k grad y_k grad y_k^T
// of lambda_i^{-1/2}. Throws SingularityError when fewer than m eigenvalues
// clear the zero threshold (the point is singular for this constraint set).
double vibrational_factor(const Configuration& x, const ConstraintSet& bonds);

// sqrt(det(inertia tensor)) about the center of mass; unit point masses.
double rotational_factor(const Configuration& x);

// Translate so the center of mass sits at the origin.
Configuration recenter(const Configuration& x);

// All n(n-1)/2 pairwise distances, pairs in (i<j) lexicographic order.
// This embedding is invariant under rigid motions and reflections, so it
// coordinatizes the quotient space the landscape lives in.
Vec embed(const Configuration& x);

// Jacobian of embed(): n(n-1)/2 x 3n.
Mat embedding_jacobian(const Configuration& x);

// First-order quotient metric: push the internal+rigid-free horizontal
// tangent bases at both points into the embedding, express the embedded
// separation in each basis by least squares, and average the two lengths.
// Symmetric by construction.
double quotient_distance(const Configuration& a, const Configuration& b);

}  // namespace sticky
