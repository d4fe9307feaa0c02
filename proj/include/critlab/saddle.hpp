#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "critlab/functional.hpp"
#include "critlab/manifold.hpp"

namespace critlab {

struct FiberDecomposition {
    int sample = -1;
    Eigen::VectorXd v_minus;
    Eigen::VectorXd v_plus;
    Eigen::VectorXd v_zero;
    double residual = 0.0;
};

// Discretized K-tubular neighborhood B(r^-, r^+) around the sampled manifold,
// with membership, boundary classification and fiber projections. c0 and
// sigma are filled in by verify_saddle_conditions.
struct SaddleNeighborhood {
    BundleSample bundle;
    double r_minus = 0.0;
    double r_plus = 0.0;
    double fiber_tol = 0.0;
    double c0 = std::numeric_limits<double>::quiet_NaN();
    double sigma = 0.0;
    double sample_spacing = 0.0; // max adjacent sample distance

    /// Nearest-sample base point, then least-squares fiber coordinates.
    FiberDecomposition decompose(const Eigen::VectorXd& x) const;

    bool in_closure(const Eigen::VectorXd& x, double slack = 1e-9) const;
    bool in_open(const Eigen::VectorXd& x, double slack = 1e-9) const;

    enum class Region { outside, interior, boundary_minus, boundary_plus, boundary_both };
    Region classify(const Eigen::VectorXd& x, double band = 1e-9) const;

    bool has_level() const { return std::isfinite(c0); }
};

/// Builds the neighborhood and probes injectivity of the decomposition at the
/// full fiber radii; conflicting probe decompositions raise
/// TubularRadiusExceeded.
SaddleNeighborhood build_neighborhood(BundleSample bundle, double r_minus, double r_plus,
                                      double fiber_tol);

// Deterministic sampling of the boundary pieces and the fiber box. The sphere
// directions come from a fixed substream; sphere_count is the refinement knob.
struct SaddleGridSpec {
    int sphere_count = 8;
    std::vector<double> radial_fractions = {0.0, 0.5, 1.0};
    std::uint64_t seed = 2026;
    double grad_floor = 1e-6;
    double cone_epsilon_factor = 1e-4;
    int cone_probes = 4;
};

struct SaddleReport {
    double sup_minus = 0.0;           // sup Phi over the sampled lower boundary
    double inf_b0 = 0.0;              // inf Phi over the sampled B^0
    double c0 = 0.0;
    double min_grad_on_sublevel = 0.0;
    double min_grad_boundary_plus = 0.0;
    bool cone_ok = false;
    double sigma = 0.0;
    double margin = 0.0; // min(level gap, sublevel gradient floor)
};

/// Checks the two fibered-saddle conditions on sample grids: the level gap
/// sup_{d-B} Phi < inf_{B0} Phi with a critical-point-free sublevel at c0,
/// and the entry cone at (d+B)\(d-B). Stores c0 and sigma into the
/// neighborhood on success.
SaddleReport verify_saddle_conditions(SaddleNeighborhood& nbhd, const SplitFunctional& f,
                                      const SaddleGridSpec& grid = {},
                                      std::optional<double> c0_override = std::nullopt,
                                      std::optional<double> sigma_override = std::nullopt);

/// Sample points of (d+B)\(d-B), shared by the cone test and the
/// finite-rank pseudogradient bound.
std::vector<Eigen::VectorXd> boundary_plus_grid(const SaddleNeighborhood& nbhd,
                                                const SaddleGridSpec& grid = {});

enum class PseudoMode { exact, finite_rank };

struct Pseudogradient {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> z;
    double bound = 0.0; // sup ||Z - grad Psi|| over the boundary grid
    int rank = -1;      // -1 = full
};

/// Z = grad Psi (exact) or Pi_k grad Psi (projection onto the first k
/// L-eigenvectors, exercising the compact-range requirement). The finite-rank
/// bound is evaluated on the boundary grid and checked against sigma.
Pseudogradient pseudogradient(const SplitFunctional& f, PseudoMode mode, int k = -1,
                              const SaddleNeighborhood* nbhd = nullptr,
                              std::optional<double> sigma = std::nullopt,
                              const SaddleGridSpec& grid = {});

enum class ExitKind { hit_sublevel, time_out };

struct FlowTrajectory {
    std::vector<double> times;          // ODE times, increasing from 0
    std::vector<Eigen::VectorXd> states;
    double tau = 1.0;                   // first sublevel hit, or 1
    ExitKind exit_kind = ExitKind::time_out;
};

/// Classical fixed-step 4th order integration of x' = -(Lx + Z(x)) on [0,1],
/// stopping at the first crossing of Phi_{c0} (bisected to time tolerance
/// 1e-10). Default step 1e-2 * r_minus.
FlowTrajectory integrate_flow(const Eigen::VectorXd& x0, const SplitFunctional& f,
                              const Pseudogradient& z, const SaddleNeighborhood& nbhd,
                              double step_h = 0.0);

// One trajectory written in the admissible-deformation form
// eta(t, x0) = e^{theta(t) L} x0 + C(t), theta(t) = -tau t.
struct DeformationRecord {
    std::vector<double> t_grid; // deformation times in [0,1]
    std::vector<double> theta;
    std::vector<Eigen::VectorXd> c_term;
    double tau = 0.0;
    double reconstruction_error = 0.0;

    double theta_at(double t) const;
    Eigen::VectorXd c_at(double t) const;
};

/// Variation-of-constants split of a stored trajectory:
/// C(t) = integral of e^{-(tau t - s) L} (-Z(x(s))) ds by composite Simpson
/// quadrature on the stored nodes.
DeformationRecord decompose_deformation(const FlowTrajectory& traj, const Pseudogradient& z,
                                        const SymOperator& l);

/// Composition eta1 * eta2 in the same e^{theta L} x + C form (first eta1 on
/// [0,1/2], then eta2 from eta1's endpoint). reconstruction_error is the
/// propagated bound; tests measure the true error against the trajectories.
DeformationRecord juxtapose(const DeformationRecord& a, const DeformationRecord& b,
                            const SymOperator& l);

struct DeformSetResult {
    std::vector<Eigen::VectorXd> image;
    std::vector<double> taus;
    std::vector<double> final_levels;
    std::vector<DeformationRecord> records;
    double max_reconstruction_error = 0.0;
    double c_range_max = 0.0; // envelope of ||C(1, x)||
    int c_affine_dim = 0;     // affine hull dimension of the C(1, x) values
};

/// Applies eta(1, .) pointwise to a set in the closed neighborhood.
DeformSetResult deform_set(const std::vector<Eigen::VectorXd>& points, const SplitFunctional& f,
                           const Pseudogradient& z, const SaddleNeighborhood& nbhd,
                           double step_h = 0.0);

} // namespace critlab
