#pragma once

#include <Eigen/Dense>
#include <vector>

#include "critlab/functional.hpp"
#include "critlab/grassmann.hpp"
#include "critlab/spectral.hpp"

namespace critlab {

enum class ManifoldKind { circle, torus2, twisted_circle, point };

ManifoldKind manifold_kind_from_string(const std::string& s);
const char* manifold_kind_name(ManifoldKind k);

struct GeometryParams {
    double radius = 1.0;
    // Optional ambient isometry applied to the chart (n x n orthogonal);
    // empty means identity. Lets a scenario tilt the manifold relative to
    // the coordinate axes.
    Eigen::MatrixXd rotation;
};

// Discretized compact critical manifold: uniformly spaced chart samples with
// analytic tangent bases, plus the forward-neighbor structure of the
// (periodic) parameter grid.
struct CriticalManifold {
    ManifoldKind kind = ManifoldKind::point;
    int ambient_dim = 0;
    int d = 0; // intrinsic dimension
    std::vector<Eigen::VectorXd> params;
    std::vector<Eigen::VectorXd> points;
    std::vector<Subspace> tangents;
    // forward neighbor per parameter axis (periodic wrap)
    std::vector<std::vector<int>> neighbors;
    GeometryParams geometry;

    int count() const { return static_cast<int>(points.size()); }
};

/// Uniform parameter sampling of the supported chart kinds. For torus2 the
/// count is per axis (count^2 samples total). circle needs ambient >= 3,
/// twisted_circle >= 4, torus2 >= 6.
CriticalManifold sample_manifold(ManifoldKind kind, int ambient_dim, int count,
                                 const GeometryParams& geometry = {});

// Per-sample invariant splittings of the Hessian along M, the desk version of
// the fiber bundles X^- , X^0 , X^+ over the critical manifold.
struct BundleSample {
    CriticalManifold manifold;
    std::vector<Subspace> x_minus;
    std::vector<Subspace> x_zero;
    std::vector<Subspace> x_plus;
    std::vector<double> gaps;
    double nd_residual_max = 0.0;       // max_i d(X^0_i, T_i M)
    double adjacent_fiber_gap = 0.0;    // max over adjacent samples of d(X+-_i, X+-_j)

    double min_gap() const;
};

/// Splits the Hessian at every sample and checks [C] (critical on M) and
/// [ND] (kernel equals the tangent space within nd_tol).
BundleSample fiber_splitting(const SplitFunctional& f, const CriticalManifold& m,
                             double zero_tol = 1e-8, double nd_tol = 1e-6,
                             double crit_tol = 1e-8, HessMode mode = HessMode::analytic);

// Sampled operator field K : M -> K(X), aligned with a manifold's samples,
// together with the fixed L it perturbs. kernel_dim is dim ker(L + K_m).
struct OperatorField {
    SymOperator base_l;
    std::vector<SymOperator> samples;
    int kernel_dim = 0;
};

/// K_m = hess Phi(m_i) - L for every sample.
OperatorField hessian_field(const SplitFunctional& f, const CriticalManifold& m,
                            HessMode mode = HessMode::analytic);

/// Periodic Gaussian smoothing of the field entries over the parameter grid,
/// followed by the rank correction K' = K~ - (L + K~) P_V with V the Riesz
/// spectral subspace around 0, which restores ker(L + K') to kernel_dim
/// exactly. Throws KernelDimensionUnrecoverable if the contour captures the
/// wrong dimension.
OperatorField mollify_field(const OperatorField& field, const CriticalManifold& m,
                            double bandwidth, const ContourPath& contour);

// Finite-dimensional reduction at level n: X_n is spanned by the first n
// eigenvectors of L (kernel first, then alternating -1/+1), and the
// diagnostics measure how well the reduced objects track the full ones.
struct GalerkinDiagnostics {
    double delta_zero = 0.0; // max_m delta(X^0_{K_m}, X_n)
    double op_gap = 0.0;     // max_m ||T_{n,m} - (L+K_m)|_{X_n}||
    double fiber_gap = 0.0;  // max_m d(U^{+-}_{n,m}, Y^{+-}_{n,m})
    double flow_drift = 0.0; // max over adjacent m,m1 and s of d(e^{sL}[Y_{n,m}], Y_{n,m1})
};

struct GalerkinReduction {
    int level = 0;
    Subspace x_n;
    std::vector<Subspace> f_zero;  // F^0_{n,m}
    std::vector<Subspace> u_minus; // U^-_{n,m}
    std::vector<Subspace> u_plus;
    std::vector<Subspace> y_minus; // Y^{+-}_{n,m} = proj of U^{+-} onto X^{+-}_{K_m}
    std::vector<Subspace> y_plus;
    std::vector<Subspace> y_full;  // Y_{n,m} = Y^- + X^0_{K_m} + Y^+
    std::vector<Eigen::MatrixXd> t_nm; // T_{n,m} in X_n coordinates
    GalerkinDiagnostics diagnostics;
    double min_nonzero_t = 0.0; // smallest nonzero |eigenvalue| of T_{n,m} over m
    int ambient_dim = 0;
    int sample_count = 0;
    std::vector<std::vector<int>> neighbors;
};

/// The first n columns of the L-eigenbasis in kernel-first, then alternating
/// -1/+1 order. For diagonal L the coordinate axes are used directly.
Subspace galerkin_basis(const SymOperator& l, int n, double zero_tol = 1e-8);

GalerkinReduction galerkin_reduce(const SplitFunctional& f, const OperatorField& field,
                                  const BundleSample& bundle, int n,
                                  const std::vector<double>& s_grid = {-2.0, -1.0, 0.0, 1.0, 2.0},
                                  double gap_floor = 0.0);

struct ReductionLimitRow {
    int level = 0;
    double flow_drift = 0.0;     // item (i)
    double probe_distance = 0.0; // item (ii): max over probes of dist(x, Y_{n,m})
};

struct ReductionLimitsReport {
    std::vector<ReductionLimitRow> rows;
    bool monotone = false; // both columns nonincreasing within 1e-10 slack
};

/// Convergence diagnostics across a sweep of reductions on one scenario.
/// Probes are the L-eigenvectors plus a few seeded random unit vectors.
ReductionLimitsReport check_reduction_limits(const std::vector<GalerkinReduction>& reductions,
                                             const SymOperator& l,
                                             const std::vector<double>& s_grid,
                                             std::uint64_t probe_seed = 17);

} // namespace critlab
