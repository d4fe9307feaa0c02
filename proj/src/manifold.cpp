#include "critlab/manifold.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "critlab/rng.hpp"

namespace critlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXd effective_rotation(const GeometryParams& g, int n) {
    if (g.rotation.size() == 0) return Eigen::MatrixXd::Identity(n, n);
    require(g.rotation.rows() == n && g.rotation.cols() == n, Errc::DimensionMismatch,
            "rotation must be n x n");
    Eigen::MatrixXd gram = g.rotation.transpose() * g.rotation;
    require((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10,
            Errc::BadInput, "rotation is not orthogonal");
    return g.rotation;
}

} // namespace

ManifoldKind manifold_kind_from_string(const std::string& s) {
    if (s == "circle") return ManifoldKind::circle;
    if (s == "torus2") return ManifoldKind::torus2;
    if (s == "twisted_circle") return ManifoldKind::twisted_circle;
    if (s == "point") return ManifoldKind::point;
    fail(Errc::UnsupportedKind, "unknown manifold kind '" + s + "'");
}

const char* manifold_kind_name(ManifoldKind k) {
    switch (k) {
        case ManifoldKind::circle: return "circle";
        case ManifoldKind::torus2: return "torus2";
        case ManifoldKind::twisted_circle: return "twisted_circle";
        case ManifoldKind::point: return "point";
    }
    return "?";
}

CriticalManifold sample_manifold(ManifoldKind kind, int ambient_dim, int count,
                                 const GeometryParams& geometry) {
    CriticalManifold m;
    m.kind = kind;
    m.ambient_dim = ambient_dim;
    m.geometry = geometry;
    const Eigen::MatrixXd q = effective_rotation(geometry, ambient_dim);
    const double radius = geometry.radius;

    auto circle_like = [&](int min_dim) {
        require(ambient_dim >= min_dim, Errc::DimensionTooSmall,
                std::string(manifold_kind_name(kind)) + " needs ambient dimension >= " +
                    std::to_string(min_dim));
        require(count >= 16, Errc::BadInput, "need at least 16 samples");
        m.d = 1;
        for (int i = 0; i < count; ++i) {
            double a = kTwoPi * i / count;
            Eigen::VectorXd p = Eigen::VectorXd::Zero(ambient_dim);
            p[0] = radius * std::cos(a);
            p[1] = radius * std::sin(a);
            Eigen::VectorXd t = Eigen::VectorXd::Zero(ambient_dim);
            t[0] = -std::sin(a);
            t[1] = std::cos(a);
            m.params.push_back(Eigen::VectorXd::Constant(1, a));
            m.points.push_back(q * p);
            m.tangents.push_back(Subspace::from_orthonormal(q * t));
            m.neighbors.push_back({(i + 1) % count});
        }
    };

    switch (kind) {
        case ManifoldKind::circle:
            circle_like(3);
            break;
        case ManifoldKind::twisted_circle:
            circle_like(4);
            break;
        case ManifoldKind::torus2: {
            require(ambient_dim >= 6, Errc::DimensionTooSmall,
                    "torus2 needs ambient dimension >= 6");
            require(count >= 16, Errc::BadInput, "need at least 16 samples per axis");
            m.d = 2;
            for (int i = 0; i < count; ++i)
                for (int j = 0; j < count; ++j) {
                    double a = kTwoPi * i / count;
                    double b = kTwoPi * j / count;
                    Eigen::VectorXd p = Eigen::VectorXd::Zero(ambient_dim);
                    p[0] = radius * std::cos(a);
                    p[1] = radius * std::sin(a);
                    p[2] = radius * std::cos(b);
                    p[3] = radius * std::sin(b);
                    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(ambient_dim, 2);
                    t(0, 0) = -std::sin(a);
                    t(1, 0) = std::cos(a);
                    t(2, 1) = -std::sin(b);
                    t(3, 1) = std::cos(b);
                    Eigen::VectorXd par(2);
                    par << a, b;
                    m.params.push_back(par);
                    m.points.push_back(q * p);
                    m.tangents.push_back(Subspace::from_orthonormal(q * t));
                    int idx_a = ((i + 1) % count) * count + j;
                    int idx_b = i * count + (j + 1) % count;
                    m.neighbors.push_back({idx_a, idx_b});
                }
            break;
        }
        case ManifoldKind::point: {
            require(ambient_dim >= 1, Errc::DimensionTooSmall, "need ambient dimension >= 1");
            m.d = 0;
            m.params.push_back(Eigen::VectorXd(0));
            m.points.push_back(Eigen::VectorXd::Zero(ambient_dim));
            m.tangents.push_back(Subspace::zero(ambient_dim));
            m.neighbors.push_back({});
            break;
        }
    }
    return m;
}

double BundleSample::min_gap() const {
    double g = std::numeric_limits<double>::infinity();
    for (double v : gaps) g = std::min(g, v);
    return std::isfinite(g) ? g : 0.0;
}

BundleSample fiber_splitting(const SplitFunctional& f, const CriticalManifold& m,
                             double zero_tol, double nd_tol, double crit_tol, HessMode mode) {
    BundleSample b;
    b.manifold = m;
    HessMode used = (mode == HessMode::analytic && !f.has_analytic_hess())
                        ? HessMode::central_fd
                        : mode;

    for (int i = 0; i < m.count(); ++i) {
        double gnorm = f.grad(m.points[i]).norm();
        require(gnorm <= crit_tol, Errc::NotCritical,
                "sample " + std::to_string(i) + " has gradient norm " + std::to_string(gnorm));

        SymOperator hess = hessian_at(f, m.points[i], used);
        SpectralSplitting s = spectral_split(hess, zero_tol);
        require(s.x_zero.dim() == m.d, Errc::Degenerate,
                "kernel dimension " + std::to_string(s.x_zero.dim()) + " != manifold dimension " +
                    std::to_string(m.d) + " at sample " + std::to_string(i));
        double nd = gap_distance(s.x_zero, m.tangents[i]);
        require(nd <= nd_tol, Errc::Degenerate,
                "[ND] residual " + std::to_string(nd) + " at sample " + std::to_string(i));
        b.nd_residual_max = std::max(b.nd_residual_max, nd);
        b.gaps.push_back(s.gap);
        b.x_minus.push_back(std::move(s.x_minus));
        b.x_zero.push_back(std::move(s.x_zero));
        b.x_plus.push_back(std::move(s.x_plus));
    }
    for (int i = 0; i < m.count(); ++i)
        for (int j : m.neighbors[i]) {
            b.adjacent_fiber_gap = std::max(b.adjacent_fiber_gap,
                                            gap_distance(b.x_minus[i], b.x_minus[j]));
            b.adjacent_fiber_gap =
                std::max(b.adjacent_fiber_gap, gap_distance(b.x_plus[i], b.x_plus[j]));
        }
    return b;
}

OperatorField hessian_field(const SplitFunctional& f, const CriticalManifold& m, HessMode mode) {
    HessMode used = (mode == HessMode::analytic && !f.has_analytic_hess())
                        ? HessMode::central_fd
                        : mode;
    OperatorField field{f.l, {}, 0};
    for (int i = 0; i < m.count(); ++i) {
        SymOperator hess = hessian_at(f, m.points[i], used);
        field.samples.emplace_back(hess.mat() - f.l.mat(), 1.0);
    }
    // kernel_dim is a property of L + K_m; all samples must agree.
    for (int i = 0; i < m.count(); ++i) {
        SpectralSplitting s =
            spectral_split(SymOperator(f.l.mat() + field.samples[i].mat()), 1e-8);
        if (i == 0)
            field.kernel_dim = s.x_zero.dim();
        else
            require(s.x_zero.dim() == field.kernel_dim, Errc::Degenerate,
                    "kernel dimension varies across samples");
    }
    return field;
}

namespace {

double periodic_param_dist2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        double d = std::abs(a[k] - b[k]);
        d = std::min(d, kTwoPi - d);
        acc += d * d;
    }
    return acc;
}

} // namespace

OperatorField mollify_field(const OperatorField& field, const CriticalManifold& m,
                            double bandwidth, const ContourPath& contour) {
    const int count = static_cast<int>(field.samples.size());
    require(count == m.count(), Errc::DimensionMismatch,
            "field samples do not align with the manifold");
    require(count > 0, Errc::BadInput, "empty field");
    const int n = field.base_l.dim();

    double spacing = m.d > 0 ? kTwoPi / std::round(std::pow(count, 1.0 / m.d)) : 0.0;
    require(bandwidth > spacing, Errc::BadInput, "bandwidth must exceed the grid spacing");

    // Step 1: periodic Gaussian convolution of entries over the parameter grid.
    std::vector<Eigen::MatrixXd> smoothed(count, Eigen::MatrixXd::Zero(n, n));
    for (int i = 0; i < count; ++i) {
        double wsum = 0.0;
        for (int j = 0; j < count; ++j) {
            double w = std::exp(-0.5 * periodic_param_dist2(m.params[i], m.params[j]) /
                                (bandwidth * bandwidth));
            smoothed[i] += w * field.samples[j].mat();
            wsum += w;
        }
        smoothed[i] /= wsum;
    }

    // Step 2: rank correction. V_m is the Riesz spectral subspace of L + K~_m
    // around 0; replacing K~ by K~ - (L+K~) P_V forces ker(L+K') = V_m.
    OperatorField out{field.base_l, {}, field.kernel_dim};
    for (int i = 0; i < count; ++i) {
        SymOperator a(field.base_l.mat() + smoothed[i], 1e-8);
        Eigen::MatrixXd p = riesz_projector(a, contour);
        p = 0.5 * (p + p.transpose().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
        int rank = 0;
        for (int k = 0; k < n; ++k) {
            double lam = es.eigenvalues()[k];
            require(lam < 0.1 || lam > 0.9, Errc::KernelDimensionUnrecoverable,
                    "Riesz projector has an ambiguous eigenvalue " + std::to_string(lam));
            if (lam > 0.9) ++rank;
        }
        require(rank == field.kernel_dim, Errc::KernelDimensionUnrecoverable,
                "contour captured dimension " + std::to_string(rank) + " != " +
                    std::to_string(field.kernel_dim));
        // re-orthonormalized range of the quadrature projector
        Eigen::MatrixXd v = es.eigenvectors().rightCols(rank);
        Eigen::MatrixXd pv = v * v.transpose();
        Eigen::MatrixXd corrected = smoothed[i] - a.mat() * pv;
        corrected = 0.5 * (corrected + corrected.transpose().eval());
        out.samples.emplace_back(std::move(corrected), 1e-6);
    }
    return out;
}

Subspace galerkin_basis(const SymOperator& l, int n, double zero_tol) {
    const int dim = l.dim();
    require(n >= 0 && n <= dim, Errc::BadInput, "level out of range");
    double norm = operator_norm(l);
    double thr = zero_tol * (norm > 0 ? norm : 1.0);

    Eigen::MatrixXd vecs;
    Eigen::VectorXd vals;
    double offdiag = (l.mat() - Eigen::MatrixXd(l.mat().diagonal().asDiagonal()))
                         .cwiseAbs()
                         .maxCoeff();
    if (offdiag <= 1e-14 * (1.0 + norm)) {
        // diagonal L: use the coordinate axes so prefixes match the shipped basis
        vecs = Eigen::MatrixXd::Identity(dim, dim);
        vals = l.mat().diagonal();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l.mat());
        vecs = es.eigenvectors();
        vals = es.eigenvalues();
    }

    std::vector<int> kernel, minus, plus;
    for (int i = 0; i < dim; ++i) {
        if (std::abs(vals[i]) <= thr)
            kernel.push_back(i);
        else if (vals[i] < 0)
            minus.push_back(i);
        else
            plus.push_back(i);
    }
    std::vector<int> order = kernel;
    for (std::size_t k = 0; k < std::max(minus.size(), plus.size()); ++k) {
        if (k < minus.size()) order.push_back(minus[k]);
        if (k < plus.size()) order.push_back(plus[k]);
    }
    Eigen::MatrixXd basis(dim, n);
    for (int i = 0; i < n; ++i) basis.col(i) = vecs.col(order[i]);
    return Subspace::from_orthonormal(std::move(basis));
}

namespace {

Subspace flow_image(const Eigen::MatrixXd& expm, const Subspace& y) {
    return Subspace::orthonormalized(expm * y.basis);
}

} // namespace

GalerkinReduction galerkin_reduce(const SplitFunctional& f, const OperatorField& field,
                                  const BundleSample& bundle, int n,
                                  const std::vector<double>& s_grid, double gap_floor) {
    const CriticalManifold& m = bundle.manifold;
    const int dim = f.l.dim();
    const int d = field.kernel_dim;
    require(static_cast<int>(field.samples.size()) == m.count(), Errc::InconsistentScenario,
            "field does not align with the bundle manifold");
    require(n <= dim, Errc::BadInput, "level exceeds the ambient dimension");
    require(n >= d, Errc::KernelCollapse,
            "level " + std::to_string(n) + " below the kernel dimension " + std::to_string(d));

    GalerkinReduction red;
    red.level = n;
    red.ambient_dim = dim;
    red.sample_count = m.count();
    red.neighbors = m.neighbors;
    red.x_n = galerkin_basis(f.l, n);
    const Eigen::MatrixXd& bx = red.x_n.basis;

    for (int i = 0; i < m.count(); ++i) {
        SymOperator a(f.l.mat() + field.samples[i].mat(), 1e-9);
        SpectralSplitting s = spectral_split(a, 1e-8);
        require(s.x_zero.dim() == d, Errc::InconsistentScenario,
                "field sample has kernel dimension != kernel_dim");

        red.diagnostics.delta_zero =
            std::max(red.diagnostics.delta_zero, pseudodistance(s.x_zero, red.x_n));

        Subspace f0;
        try {
            f0 = project_subspace(s.x_zero, red.x_n);
        } catch (const Error& e) {
            if (e.code() == Errc::ProjectionDegenerate)
                fail(Errc::KernelCollapse, "F0 loses dimension at sample " + std::to_string(i));
            throw;
        }

        // U = orthocomplement of F0 inside X_n
        Eigen::MatrixXd u_raw = bx - projector(f0) * bx;
        Subspace u = Subspace::orthonormalized(u_raw);
        require(u.dim() == n - d, Errc::KernelCollapse, "U_{n,m} has unexpected dimension");

        // T_{n,m} = Pi_U (L+K_m) Pi_U restricted to X_n
        Eigen::MatrixXd pu = projector(u);
        Eigen::MatrixXd t_ambient = pu * a.mat() * pu;
        red.t_nm.push_back(bx.transpose() * t_ambient * bx);

        red.diagnostics.op_gap =
            std::max(red.diagnostics.op_gap, spectral_norm((t_ambient - a.mat()) * bx));

        // split T on U; its kernel there must be empty past n0
        Subspace u_minus = Subspace::zero(dim), u_plus = Subspace::zero(dim);
        double min_nz = 0.0;
        if (u.dim() > 0) {
            Eigen::MatrixXd t_u = u.basis.transpose() * a.mat() * u.basis;
            SpectralSplitting ts;
            try {
                ts = spectral_split(SymOperator(t_u, 1e-9), 1e-8);
            } catch (const Error& e) {
                if (e.code() == Errc::NoSpectralGap)
                    fail(Errc::GapLost, "T_{n,m} spectrum is ambiguous near zero at sample " +
                                            std::to_string(i));
                throw;
            }
            require(ts.x_zero.dim() == 0, Errc::GapLost,
                    "ker T_{n,m} exceeds F0 at sample " + std::to_string(i));
            min_nz = ts.gap;
            require(!(gap_floor > 0.0 && min_nz < gap_floor), Errc::GapLost,
                    "T_{n,m} gap " + std::to_string(min_nz) + " below the floor");
            u_minus = Subspace::from_orthonormal(u.basis * ts.x_minus.basis);
            u_plus = Subspace::from_orthonormal(u.basis * ts.x_plus.basis);
        }
        if (i == 0 || min_nz < red.min_nonzero_t) red.min_nonzero_t = min_nz;

        Subspace y_minus, y_plus;
        try {
            y_minus = project_subspace(u_minus, s.x_minus);
            y_plus = project_subspace(u_plus, s.x_plus);
        } catch (const Error& e) {
            if (e.code() == Errc::ProjectionDegenerate)
                fail(Errc::GapLost,
                     "U+- too far from X+-_{K_m} at sample " + std::to_string(i));
            throw;
        }
        red.diagnostics.fiber_gap =
            std::max({red.diagnostics.fiber_gap, gap_distance(u_minus, y_minus),
                      gap_distance(u_plus, y_plus)});

        Subspace y = orthogonal_sum(orthogonal_sum(y_minus, s.x_zero), y_plus);
        red.f_zero.push_back(std::move(f0));
        red.u_minus.push_back(std::move(u_minus));
        red.u_plus.push_back(std::move(u_plus));
        red.y_minus.push_back(std::move(y_minus));
        red.y_plus.push_back(std::move(y_plus));
        red.y_full.push_back(std::move(y));
    }

    for (double s : s_grid) {
        Eigen::MatrixXd expm = exp_sym(f.l, s);
        for (int i = 0; i < m.count(); ++i) {
            Subspace moved = flow_image(expm, red.y_full[i]);
            for (int j : m.neighbors[i])
                red.diagnostics.flow_drift =
                    std::max(red.diagnostics.flow_drift, gap_distance(moved, red.y_full[j]));
        }
    }
    return red;
}

ReductionLimitsReport check_reduction_limits(const std::vector<GalerkinReduction>& reductions,
                                             const SymOperator& l,
                                             const std::vector<double>& s_grid,
                                             std::uint64_t probe_seed) {
    require(!reductions.empty(), Errc::BadInput, "no reductions given");
    const int dim = reductions.front().ambient_dim;
    const int count = reductions.front().sample_count;
    for (const auto& r : reductions)
        require(r.ambient_dim == dim && r.sample_count == count, Errc::InconsistentScenario,
                "reductions come from different scenarios");
    for (std::size_t k = 1; k < reductions.size(); ++k)
        require(reductions[k].level > reductions[k - 1].level, Errc::InconsistentScenario,
                "levels must be increasing");
    for (double s : s_grid)
        require(s >= -2.0 && s <= 2.0, Errc::BadInput, "s grid must lie in [-2, 2]");

    // Probes sample a fixed compact ellipsoid: the L eigenbasis with weights
    // 2^{-j}, plus seeded random points of the same ellipsoid. This is the
    // desk surrogate for convergence uniform on compact subsets.
    Subspace eigbasis = galerkin_basis(l, dim);
    std::vector<Eigen::VectorXd> probes;
    Eigen::VectorXd weights(dim);
    for (int j = 0; j < dim; ++j) weights[j] = std::pow(2.0, -(j + 1));
    for (int j = 0; j < dim; ++j) probes.push_back(weights[j] * eigbasis.basis.col(j));
    auto gen = substream(probe_seed);
    for (int k = 0; k < 8; ++k)
        probes.push_back(eigbasis.basis * weights.cwiseProduct(random_unit_vector(gen, dim)));

    ReductionLimitsReport rep;
    for (const auto& r : reductions) {
        ReductionLimitRow row;
        row.level = r.level;
        for (double s : s_grid) {
            Eigen::MatrixXd expm = exp_sym(l, s);
            for (int i = 0; i < count; ++i) {
                Subspace moved = flow_image(expm, r.y_full[i]);
                for (int j : r.neighbors[i])
                    row.flow_drift = std::max(row.flow_drift, gap_distance(moved, r.y_full[j]));
            }
        }
        for (const auto& x : probes)
            for (int i = 0; i < count; ++i)
                row.probe_distance =
                    std::max(row.probe_distance, distance_to_subspace(x, r.y_full[i]));
        rep.rows.push_back(row);
    }
    rep.monotone = true;
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
        if (rep.rows[k].flow_drift > rep.rows[k - 1].flow_drift + 1e-10) rep.monotone = false;
        if (rep.rows[k].probe_distance > rep.rows[k - 1].probe_distance + 1e-10)
            rep.monotone = false;
    }
    return rep;
}

} // namespace critlab
