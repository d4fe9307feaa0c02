#include "critlab/grassmann.hpp"

#include <Eigen/SVD>

namespace critlab {

Subspace Subspace::zero(int ambient_dim) {
    Subspace s;
    s.basis = Eigen::MatrixXd(ambient_dim, 0);
    return s;
}

Subspace Subspace::from_orthonormal(Eigen::MatrixXd b, double tol) {
    if (b.cols() > 0) {
        Eigen::MatrixXd gram = b.transpose() * b;
        gram -= Eigen::MatrixXd::Identity(b.cols(), b.cols());
        require(gram.cwiseAbs().maxCoeff() <= tol, Errc::BadInput,
                "basis columns are not orthonormal");
    }
    require(b.allFinite(), Errc::BadInput, "basis has non-finite entries");
    Subspace s;
    s.basis = std::move(b);
    return s;
}

Subspace Subspace::orthonormalized(const Eigen::MatrixXd& m, double drop_tol) {
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXd out(n, m.cols());
    int kept = 0;
    for (int j = 0; j < m.cols(); ++j) {
        Eigen::VectorXd v = m.col(j);
        // twice-is-enough reorthogonalization
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < kept; ++i) v -= out.col(i).dot(v) * out.col(i);
        double nv = v.norm();
        if (nv <= drop_tol) continue;
        out.col(kept++) = v / nv;
    }
    Subspace s;
    s.basis = out.leftCols(kept);
    return s;
}

Eigen::MatrixXd projector(const Subspace& v) {
    if (v.dim() == 0) return Eigen::MatrixXd::Zero(v.ambient(), v.ambient());
    return v.basis * v.basis.transpose();
}

double spectral_norm(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
}

double gap_distance(const Subspace& v, const Subspace& w) {
    require(v.ambient() == w.ambient(), Errc::AmbientMismatch,
            "subspaces live in different ambient spaces");
    return spectral_norm(projector(w) - projector(v));
}

double pseudodistance(const Subspace& v, const Subspace& w) {
    require(v.ambient() == w.ambient(), Errc::AmbientMismatch,
            "subspaces live in different ambient spaces");
    if (v.dim() == 0) return 0.0;
    Eigen::MatrixXd residual = v.basis - projector(w) * v.basis;
    return spectral_norm(residual);
}

Subspace project_subspace(const Subspace& v, const Subspace& w) {
    double delta = pseudodistance(v, w);
    require(delta <= 1.0 - 1e-6, Errc::ProjectionDegenerate,
            "delta(V,W) too close to 1, projected subspace would collapse");
    if (v.dim() == 0) return Subspace::zero(v.ambient());
    Subspace result = Subspace::orthonormalized(projector(w) * v.basis);
    require(result.dim() == v.dim(), Errc::ProjectionDegenerate,
            "projection lost rank");
    return result;
}

Subspace orthogonal_sum(const Subspace& v, const Subspace& w) {
    require(v.ambient() == w.ambient(), Errc::AmbientMismatch,
            "subspaces live in different ambient spaces");
    if (v.dim() > 0 && w.dim() > 0) {
        double cross = (v.basis.transpose() * w.basis).cwiseAbs().maxCoeff();
        require(cross <= 1e-8, Errc::NotOrthogonal, "summands are not orthogonal");
    }
    Eigen::MatrixXd cat(v.ambient(), v.dim() + w.dim());
    cat << v.basis, w.basis;
    Subspace s = Subspace::orthonormalized(cat);
    require(s.dim() == v.dim() + w.dim(), Errc::NotOrthogonal,
            "orthogonal sum lost a dimension");
    return s;
}

Subspace orthogonal_complement(const Subspace& v) {
    const int n = v.ambient();
    Eigen::MatrixXd cat(n, v.dim() + n);
    cat << v.basis, Eigen::MatrixXd::Identity(n, n);
    Subspace full = Subspace::orthonormalized(cat);
    Subspace s;
    s.basis = full.basis.rightCols(full.dim() - v.dim());
    return s;
}

double distance_to_subspace(const Eigen::VectorXd& x, const Subspace& v) {
    if (v.dim() == 0) return x.norm();
    return (x - v.basis * (v.basis.transpose() * x)).norm();
}

} // namespace critlab
