#include "critlab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace critlab {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotSymmetric: return "NotSymmetric";
        case Errc::NoSpectralGap: return "NoSpectralGap";
        case Errc::ContourHitsSpectrum: return "ContourHitsSpectrum";
        case Errc::SingularResolvent: return "SingularResolvent";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::AmbientMismatch: return "AmbientMismatch";
        case Errc::ProjectionDegenerate: return "ProjectionDegenerate";
        case Errc::NotOrthogonal: return "NotOrthogonal";
        case Errc::UnsupportedKind: return "UnsupportedKind";
        case Errc::DimensionTooSmall: return "DimensionTooSmall";
        case Errc::DomainViolation: return "DomainViolation";
        case Errc::NotCritical: return "NotCritical";
        case Errc::Degenerate: return "Degenerate";
        case Errc::KernelDimensionUnrecoverable: return "KernelDimensionUnrecoverable";
        case Errc::KernelCollapse: return "KernelCollapse";
        case Errc::GapLost: return "GapLost";
        case Errc::InconsistentScenario: return "InconsistentScenario";
        case Errc::TubularRadiusExceeded: return "TubularRadiusExceeded";
        case Errc::LevelGapViolated: return "LevelGapViolated";
        case Errc::CriticalOnSublevel: return "CriticalOnSublevel";
        case Errc::ConeViolated: return "ConeViolated";
        case Errc::BoundExceedsSigma: return "BoundExceedsSigma";
        case Errc::LeftNeighborhood: return "LeftNeighborhood";
        case Errc::StepTooLarge: return "StepTooLarge";
        case Errc::QuadratureDivergence: return "QuadratureDivergence";
        case Errc::AmplitudeExceedsBudget: return "AmplitudeExceedsBudget";
        case Errc::EpsilonOutOfRange: return "EpsilonOutOfRange";
        case Errc::UnknownScenario: return "UnknownScenario";
        case Errc::BadInput: return "BadInput";
    }
    return "UnknownError";
}

SymOperator::SymOperator(Eigen::MatrixXd a, double sym_tol) : a_(std::move(a)) {
    require(a_.rows() == a_.cols(), Errc::NotSymmetric, "matrix is not square");
    require(a_.allFinite(), Errc::NotSymmetric, "matrix has non-finite entries");
    double scale = 1.0 + (a_.size() > 0 ? a_.cwiseAbs().maxCoeff() : 0.0);
    double asym = a_.size() > 0 ? (a_ - a_.transpose()).cwiseAbs().maxCoeff() : 0.0;
    require(asym <= sym_tol * scale, Errc::NotSymmetric,
            "asymmetry " + std::to_string(asym) + " exceeds tolerance");
    // exact symmetry downstream
    a_ = 0.5 * (a_ + a_.transpose().eval());
}

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigensolve(const SymOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.mat());
    require(es.info() == Eigen::Success, Errc::BadInput, "eigendecomposition failed");
    return es;
}

} // namespace

double operator_norm(const SymOperator& op) {
    if (op.dim() == 0) return 0.0;
    auto es = eigensolve(op);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

SpectralSplitting spectral_split(const SymOperator& op, double zero_tol) {
    require(zero_tol > 0, Errc::BadInput, "zero_tol must be positive");
    auto es = eigensolve(op);
    const Eigen::VectorXd& lam = es.eigenvalues(); // ascending
    const int n = op.dim();
    double norm = n > 0 ? lam.cwiseAbs().maxCoeff() : 0.0;
    double thr = zero_tol * norm;

    for (int i = 0; i < n; ++i) {
        double a = std::abs(lam[i]);
        require(!(a > thr && a < 10.0 * thr), Errc::NoSpectralGap,
                "eigenvalue " + std::to_string(lam[i]) + " lies in the ambiguous band around " +
                    std::to_string(thr));
    }

    int n_minus = 0, n_zero = 0;
    while (n_minus < n && lam[n_minus] < -thr) ++n_minus;
    while (n_minus + n_zero < n && std::abs(lam[n_minus + n_zero]) <= thr) ++n_zero;
    int n_plus = n - n_minus - n_zero;

    SpectralSplitting s;
    s.x_minus = Subspace::from_orthonormal(es.eigenvectors().leftCols(n_minus));
    s.x_zero = Subspace::from_orthonormal(es.eigenvectors().middleCols(n_minus, n_zero));
    s.x_plus = Subspace::from_orthonormal(es.eigenvectors().rightCols(n_plus));
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        if (std::abs(lam[i]) > thr) gap = std::min(gap, std::abs(lam[i]));
    s.gap = std::isfinite(gap) ? gap : 0.0;
    return s;
}

Eigen::MatrixXd riesz_projector(const SymOperator& op, const ContourPath& contour) {
    require(contour.radius > 0, Errc::BadInput, "contour radius must be positive");
    require(contour.nodes >= 8, Errc::BadInput, "contour needs at least 8 nodes");
    const int n = op.dim();

    // Guard: the circle must stay clear of the spectrum.
    auto es = eigensolve(op);
    double min_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double d = std::abs(std::abs(std::complex<double>(es.eigenvalues()[i]) - contour.center) -
                            contour.radius);
        min_dist = std::min(min_dist, d);
    }
    require(!(n > 0 && min_dist < 1e-10), Errc::ContourHitsSpectrum,
            "circle-to-spectrum distance " + std::to_string(min_dist) + " below 1e-10");

    // Trapezoid rule on z(t) = c + r e^{it}:
    //   P = (1/2 pi i) \oint (zI-A)^{-1} dz  ~=  (1/N) sum_k r e^{it_k} (z_k I - A)^{-1}
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    const Eigen::MatrixXcd a = op.mat().cast<std::complex<double>>();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int k = 0; k < contour.nodes; ++k) {
        double t = two_pi * k / contour.nodes;
        std::complex<double> w = contour.radius * std::exp(std::complex<double>(0.0, t));
        std::complex<double> z = contour.center + w;
        for (int i = 0; i < n; ++i)
            require(std::abs(z - std::complex<double>(es.eigenvalues()[i])) > 1e-13,
                    Errc::SingularResolvent, "quadrature node hits an eigenvalue");
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(z * id - a);
        acc += w * lu.solve(id);
    }
    acc /= static_cast<double>(contour.nodes);
    return acc.real();
}

SplittingReport verify_splitting(const SymOperator& op, const SpectralSplitting& s) {
    const int n = op.dim();
    require(s.x_minus.ambient() == n && s.x_zero.ambient() == n && s.x_plus.ambient() == n,
            Errc::DimensionMismatch, "splitting ambient dimension mismatch");
    require(s.x_minus.dim() + s.x_zero.dim() + s.x_plus.dim() == n, Errc::DimensionMismatch,
            "splitting dimensions do not sum to the ambient dimension");

    SplittingReport rep;
    auto form_extrema = [&](const Subspace& v) -> std::pair<double, double> {
        if (v.dim() == 0)
            return {std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
        Eigen::MatrixXd restricted = v.basis.transpose() * op.mat() * v.basis;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(restricted);
        return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
    };
    auto [mn_minus, mx_minus] = form_extrema(s.x_minus);
    auto [mn_plus, mx_plus] = form_extrema(s.x_plus);
    rep.min_neg_ratio = s.x_minus.dim() > 0 ? -mx_minus : std::numeric_limits<double>::infinity();
    rep.min_pos_ratio = s.x_plus.dim() > 0 ? mn_plus : std::numeric_limits<double>::infinity();
    rep.kernel_residual = 0.0;
    for (int j = 0; j < s.x_zero.dim(); ++j)
        rep.kernel_residual =
            std::max(rep.kernel_residual, (op.mat() * s.x_zero.basis.col(j)).norm());
    return rep;
}

AdaptedMetric adapted_metric(const SymOperator& l, double zero_tol) {
    auto es = eigensolve(l);
    const Eigen::VectorXd& lam = es.eigenvalues();
    double norm = l.dim() > 0 ? lam.cwiseAbs().maxCoeff() : 0.0;
    double thr = zero_tol * norm;
    for (int i = 0; i < l.dim(); ++i) {
        double a = std::abs(lam[i]);
        require(!(a > thr && a < 10.0 * thr), Errc::NoSpectralGap,
                "eigenvalue in the ambiguous band; no adapted metric");
    }
    // G = f(L), f(lambda) = |lambda| off the kernel and 1 on it; the adapted
    // product is then <Gx, y>. transform = G^{1/2} (symmetric square root).
    Eigen::VectorXd weights(l.dim());
    for (int i = 0; i < l.dim(); ++i)
        weights[i] = std::abs(lam[i]) <= thr ? 1.0 : std::abs(lam[i]);
    const Eigen::MatrixXd& v = es.eigenvectors();
    AdaptedMetric m;
    m.gram = v * weights.asDiagonal() * v.transpose();
    m.transform = v * weights.cwiseSqrt().asDiagonal() * v.transpose();
    return m;
}

Eigen::MatrixXd adapted_operator(const AdaptedMetric& m, const SymOperator& l) {
    Eigen::MatrixXd tinv = m.transform.inverse();
    return tinv.transpose() * l.mat() * tinv;
}

ContourPath default_contour(const SymOperator& op, double lo, double hi, int nodes) {
    require(lo <= hi, Errc::BadInput, "empty target interval");
    auto es = eigensolve(op);
    double a = std::numeric_limits<double>::infinity();  // included range
    double b = -std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity(); // to nearest excluded
    for (int i = 0; i < op.dim(); ++i) {
        double lam = es.eigenvalues()[i];
        if (lam >= lo && lam <= hi) {
            a = std::min(a, lam);
            b = std::max(b, lam);
        } else {
            gap = std::min(gap, lam > hi ? lam - hi : lo - lam);
        }
    }
    require(std::isfinite(a), Errc::BadInput, "no eigenvalue in the target interval");
    if (!std::isfinite(gap)) gap = 1.0 + (b - a);
    ContourPath c;
    c.center = std::complex<double>(0.5 * (a + b), 0.0);
    c.radius = 0.5 * (b - a) + 0.6 * gap;
    c.nodes = nodes;
    return c;
}

Eigen::MatrixXd exp_sym(const SymOperator& l, double s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(l.mat());
    Eigen::VectorXd e = (s * es.eigenvalues().array()).exp();
    return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    os << m.rows() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << fmt17(m(i, j));
        }
        os << "\n";
    }
}

Eigen::MatrixXd read_matrix(std::istream& is) {
    int n = -1;
    is >> n;
    require(!is.fail() && n >= 0, Errc::BadInput, "matrix file: bad dimension line");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            is >> m(i, j);
            require(!is.fail(), Errc::BadInput, "matrix file: truncated entries");
        }
    return m;
}

void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream os(path);
    require(os.good(), Errc::BadInput, "cannot open " + path + " for writing");
    write_matrix(os, m);
}

Eigen::MatrixXd read_matrix_file(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), Errc::BadInput, "cannot open " + path);
    return read_matrix(is);
}

void write_subspace(std::ostream& os, const Subspace& s) {
    os << s.ambient() << ' ' << s.dim() << "\n";
    for (int i = 0; i < s.ambient(); ++i) {
        for (int j = 0; j < s.dim(); ++j) {
            if (j) os << ' ';
            os << fmt17(s.basis(i, j));
        }
        os << "\n";
    }
}

Subspace read_subspace(std::istream& is) {
    int n = -1, k = -1;
    is >> n >> k;
    require(!is.fail() && n >= 0 && k >= 0 && k <= n, Errc::BadInput,
            "subspace file: bad header");
    Eigen::MatrixXd b(n, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
            is >> b(i, j);
            require(!is.fail(), Errc::BadInput, "subspace file: truncated entries");
        }
    return Subspace::from_orthonormal(std::move(b));
}

} // namespace critlab
