#include "critlab/functional.hpp"

#include <cmath>
#include <limits>

namespace critlab {

SymOperator hessian_at(const SplitFunctional& f, const Eigen::VectorXd& x, HessMode mode,
                       double h) {
    require(f.in_domain(x), Errc::DomainViolation, "hessian requested outside the domain");
    const int n = static_cast<int>(x.size());
    require(n == f.l.dim(), Errc::DimensionMismatch, "point dimension does not match L");

    if (mode == HessMode::analytic) {
        require(f.has_analytic_hess(), Errc::BadInput,
                "functional ships no analytic Hessian; use central_fd");
        Eigen::MatrixXd h_psi = f.psi_hess(x);
        return SymOperator(f.l.mat() + 0.5 * (h_psi + h_psi.transpose()), 1e-9);
    }

    if (h <= 0.0)
        h = std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd probe = x;
    for (int j = 0; j < n; ++j) {
        probe[j] = x[j] + h;
        require(f.in_domain(probe), Errc::DomainViolation, "fd probe leaves the domain");
        Eigen::VectorXd gp = f.grad(probe);
        probe[j] = x[j] - h;
        require(f.in_domain(probe), Errc::DomainViolation, "fd probe leaves the domain");
        Eigen::VectorXd gm = f.grad(probe);
        probe[j] = x[j];
        hess.col(j) = (gp - gm) / (2.0 * h);
    }
    return SymOperator(0.5 * (hess + hess.transpose()), 1.0); // fd asymmetry absorbed
}

} // namespace critlab
