#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>

#include "critlab/errors.hpp"
#include "critlab/grassmann.hpp"

namespace critlab {

// Dense symmetric real matrix standing in for a self-adjoint Fredholm
// operator on a truncated space. Immutable after construction.
class SymOperator {
public:
    explicit SymOperator(Eigen::MatrixXd a, double sym_tol = 1e-12);

    const Eigen::MatrixXd& mat() const { return a_; }
    int dim() const { return static_cast<int>(a_.rows()); }

    static SymOperator identity(int n) { return SymOperator(Eigen::MatrixXd::Identity(n, n)); }

private:
    Eigen::MatrixXd a_;
};

/// Operator norm, computed exactly as the largest |eigenvalue|.
double operator_norm(const SymOperator& op);

// Invariant splitting X = X^- + X^0 + X^+ of a symmetric operator, with the
// spectral gap r: the quadratic form is <= -r on X^- and >= r on X^+.
struct SpectralSplitting {
    Subspace x_minus;
    Subspace x_zero;
    Subspace x_plus;
    double gap = 0.0; // min |eigenvalue| over the nonzero groups; 0 if both empty
};

// Circle in the complex plane for the contour-integral projector.
struct ContourPath {
    std::complex<double> center{0.0, 0.0};
    double radius = 1.0;
    int nodes = 64;
};

// Positive-definite Gram matrix of the adapted inner product, together with
// the symmetric transform T (T^T T = gram) to adapted coordinates. In those
// coordinates the quadratic form of L is represented by T^-1 L T^-1, which is
// diagonal with entries in {-1, 0, +1} on the splitting basis.
struct AdaptedMetric {
    Eigen::MatrixXd gram;
    Eigen::MatrixXd transform;
};

struct SplittingReport {
    double min_neg_ratio = 0.0;   // min over unit v in X^- of -<Av,v>
    double min_pos_ratio = 0.0;   // min over unit v in X^+ of <Av,v>
    double kernel_residual = 0.0; // max ||A v|| over the X^0 basis
};

/// Groups eigenvalues at the relative threshold zero_tol * ||op|| into the
/// negative / kernel / positive invariant subspaces. Throws NoSpectralGap when
/// an eigenvalue falls in the ambiguous band (zero_tol, 10*zero_tol) * ||op||.
SpectralSplitting spectral_split(const SymOperator& op, double zero_tol = 1e-8);

/// Riesz projector (1/2 pi i) * contour integral of the resolvent, by
/// trapezoidal quadrature on the circle. The resolvents are computed by
/// complex LU solves, independent of the eigendecomposition path.
Eigen::MatrixXd riesz_projector(const SymOperator& op, const ContourPath& contour);

/// Exact quadratic-form extrema of op on the splitting subspaces.
SplittingReport verify_splitting(const SymOperator& op, const SpectralSplitting& s);

/// Inner product in which L becomes the canonical form x -> x^+ - x^-.
AdaptedMetric adapted_metric(const SymOperator& l, double zero_tol = 1e-8);

/// spectral norm of T^-1 L T^-1 minus its sign pattern, for tests
Eigen::MatrixXd adapted_operator(const AdaptedMetric& m, const SymOperator& l);

/// Circle enclosing exactly the eigenvalues of op in [lo, hi], placed 60% of
/// the way across the gap toward the nearest excluded eigenvalue.
ContourPath default_contour(const SymOperator& op, double lo, double hi, int nodes = 64);

/// e^{sL} for symmetric L via eigendecomposition (closed form when L is
/// canonical: block entries e^{+-s} and 1).
Eigen::MatrixXd exp_sym(const SymOperator& l, double s);

// Plain-text matrix format: first line n, then n rows of n reals at 17
// significant digits (lossless round-trip).
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(std::istream& is);
void write_matrix_file(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_file(const std::string& path);

// Subspace files carry a header line "n k" followed by the n x k basis.
void write_subspace(std::ostream& os, const Subspace& s);
Subspace read_subspace(std::istream& is);

} // namespace critlab
