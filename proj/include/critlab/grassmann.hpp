#pragma once

#include <Eigen/Dense>

#include "critlab/errors.hpp"

namespace critlab {

// A closed subspace of R^n, represented by an orthonormal column basis.
// The zero subspace is legal and carries an n x 0 basis.
struct Subspace {
    Eigen::MatrixXd basis;

    int ambient() const { return static_cast<int>(basis.rows()); }
    int dim() const { return static_cast<int>(basis.cols()); }

    static Subspace zero(int ambient_dim);

    /// Wraps a matrix that is already orthonormal; throws BadInput otherwise.
    static Subspace from_orthonormal(Eigen::MatrixXd b, double tol = 1e-10);

    /// Orthonormalizes the columns of `m` (Gram-Schmidt with one
    /// reorthogonalization pass); columns with residual norm below
    /// `drop_tol` are dropped, so the result is rank-revealing.
    static Subspace orthonormalized(const Eigen::MatrixXd& m, double drop_tol = 1e-10);
};

/// Orthogonal projector P = B B^T onto the subspace.
Eigen::MatrixXd projector(const Subspace& v);

/// Spectral norm (largest singular value) of a dense matrix.
double spectral_norm(const Eigen::MatrixXd& m);

/// Gap metric d(V,W) = ||P_W - P_V||.
double gap_distance(const Subspace& v, const Subspace& w);

/// Pseudodistance delta(V,W) = sup over unit v in V of dist(v, W).
/// Computed exactly as the largest singular value of (I - P_W) B_V.
/// Asymmetric; zero iff V is contained in W.
double pseudodistance(const Subspace& v, const Subspace& w);

/// Image of V under the orthogonal projection onto W, as a subspace.
/// Requires delta(V,W) <= 1 - 1e-6; throws ProjectionDegenerate otherwise
/// (or when the projected basis loses rank).
Subspace project_subspace(const Subspace& v, const Subspace& w);

/// Direct sum of two (numerically) orthogonal subspaces.
Subspace orthogonal_sum(const Subspace& v, const Subspace& w);

/// Orthogonal complement of V inside the ambient space.
Subspace orthogonal_complement(const Subspace& v);

/// dist(x, V) = ||(I - P_V) x||.
double distance_to_subspace(const Eigen::VectorXd& x, const Subspace& v);

} // namespace critlab
