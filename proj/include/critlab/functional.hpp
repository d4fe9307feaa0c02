#pragma once

#include <Eigen/Dense>
#include <functional>

#include "critlab/spectral.hpp"

namespace critlab {

// Functional of the form Phi(x) = 1/2 <Lx, x> + Psi(x), the fixed operator L
// plus a nonlinearity with bounded gradient (the desk-scale surrogate for a
// compact gradient). Callables must be re-entrant.
struct SplitFunctional {
    SymOperator l;
    std::function<double(const Eigen::VectorXd&)> psi_value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> psi_grad;
    // Optional analytic Hessian of Psi; finite differences otherwise.
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> psi_hess;
    std::function<bool(const Eigen::VectorXd&)> domain_check;

    SplitFunctional() : l(Eigen::MatrixXd::Zero(0, 0)) {}
    explicit SplitFunctional(SymOperator l_) : l(std::move(l_)) {}

    bool in_domain(const Eigen::VectorXd& x) const { return !domain_check || domain_check(x); }

    double value(const Eigen::VectorXd& x) const {
        return 0.5 * x.dot(l.mat() * x) + (psi_value ? psi_value(x) : 0.0);
    }

    Eigen::VectorXd grad(const Eigen::VectorXd& x) const {
        Eigen::VectorXd g = l.mat() * x;
        if (psi_grad) g += psi_grad(x);
        return g;
    }

    bool has_analytic_hess() const { return static_cast<bool>(psi_hess); }
};

enum class HessMode { analytic, central_fd };

/// Second derivative of Phi at x as a symmetric operator. The finite
/// difference mode uses central differences of the gradient, columnwise,
/// symmetrized by (H + H^T)/2. Default step: eps^{1/3} * (1 + ||x||).
SymOperator hessian_at(const SplitFunctional& f, const Eigen::VectorXd& x,
                       HessMode mode = HessMode::analytic, double h = 0.0);

} // namespace critlab
