#include "doctest.h"

#include <Eigen/Dense>
#include <sstream>

#include "critlab/spectral.hpp"
#include "oracles.hpp"

using namespace critlab;

namespace {

Eigen::MatrixXd diag3(double a, double b, double c) {
    Eigen::Vector3d d(a, b, c);
    return d.asDiagonal();
}

} // namespace

TEST_CASE("spectral_split on a diagonal operator") {
    SymOperator op(diag3(-2.0, 0.0, 3.0));
    SpectralSplitting s = spectral_split(op, 1e-8);
    CHECK(s.x_minus.dim() == 1);
    CHECK(s.x_zero.dim() == 1);
    CHECK(s.x_plus.dim() == 1);
    CHECK(s.gap == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(s.x_minus.basis(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(s.x_zero.basis(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(s.x_plus.basis(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("spectral_split of the identity has no negative or kernel part") {
    SpectralSplitting s = spectral_split(SymOperator::identity(3));
    CHECK(s.x_minus.dim() == 0);
    CHECK(s.x_zero.dim() == 0);
    CHECK(s.x_plus.dim() == 3);
    CHECK(s.gap == doctest::Approx(1.0));
}

TEST_CASE("spectral_split recovers a known conjugated eigendecomposition") {
    auto gen = substream(101);
    Eigen::VectorXd eigs(8);
    eigs << -3, -1, 0, 0, 2, 2, 5, 7;
    Eigen::MatrixXd q = random_orthogonal(gen, 8);
    SymOperator op(q * eigs.asDiagonal() * q.transpose());
    SpectralSplitting s = spectral_split(op);
    CHECK(s.x_minus.dim() == 2);
    CHECK(s.x_zero.dim() == 2);
    CHECK(s.x_plus.dim() == 4);
    CHECK(s.gap == doctest::Approx(1.0).epsilon(1e-10));

    auto span_of = [&](std::initializer_list<int> cols) {
        Eigen::MatrixXd b(8, static_cast<Eigen::Index>(cols.size()));
        int j = 0;
        for (int c : cols) b.col(j++) = q.col(c);
        return Subspace::from_orthonormal(b);
    };
    CHECK(gap_distance(s.x_minus, span_of({0, 1})) <= 1e-8);
    CHECK(gap_distance(s.x_zero, span_of({2, 3})) <= 1e-8);
    CHECK(gap_distance(s.x_plus, span_of({4, 5, 6, 7})) <= 1e-8);
}

TEST_CASE("spectral_split rejects eigenvalues in the ambiguous band") {
    Eigen::MatrixXd a = diag3(1.0, 5e-8, -1.0);
    CHECK_THROWS_AS(spectral_split(SymOperator(a), 1e-8), Error);
    try {
        spectral_split(SymOperator(a), 1e-8);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoSpectralGap);
    }
}

TEST_CASE("asymmetric input is rejected") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(SymOperator{a}, Error);
}

TEST_CASE("splitting completeness and uniqueness under tolerance changes") {
    auto gen = substream(202);
    SymOperator op(oracles::random_gapped_symmetric(gen, 12, 0.5));
    SpectralSplitting s1 = spectral_split(op, 1e-8);
    SpectralSplitting s2 = spectral_split(op, 1e-6);
    CHECK(gap_distance(s1.x_minus, s2.x_minus) <= 1e-10);
    CHECK(gap_distance(s1.x_plus, s2.x_plus) <= 1e-10);

    Eigen::MatrixXd total =
        projector(s1.x_minus) + projector(s1.x_zero) + projector(s1.x_plus);
    CHECK((total - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("riesz projector on diagonal operators") {
    SymOperator op(diag3(-1.0, 0.0, 1.0));
    Eigen::MatrixXd p1 = riesz_projector(op, {{1.0, 0.0}, 0.5, 64});
    CHECK((p1 - diag3(0, 0, 1)).cwiseAbs().maxCoeff() <= 1e-10);
    Eigen::MatrixXd p0 = riesz_projector(op, {{0.0, 0.0}, 0.5, 64});
    CHECK((p0 - diag3(0, 1, 0)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("riesz projector matches the eigendecomposition oracle") {
    auto gen = substream(303);
    for (int trial = 0; trial < 10; ++trial) {
        SymOperator op(oracles::random_gapped_symmetric(gen, 16, 0.5));
        ContourPath c = default_contour(op, 0.1, 10.0, 128);
        Eigen::MatrixXd p = riesz_projector(op, c);
        Eigen::MatrixXd oracle = oracles::eig_projector(op.mat(), c);
        CHECK(spectral_norm(p - oracle) <= 1e-8);
        // projector laws
        CHECK(spectral_norm(p * p - p) <= 1e-8);
        CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("doubling quadrature nodes gains at least a factor 10") {
    auto gen = substream(404);
    int checked = 0;
    for (int trial = 0; trial < 10; ++trial) {
        SymOperator op(oracles::random_gapped_symmetric(gen, 12, 0.5));
        ContourPath c32 = default_contour(op, 0.1, 10.0, 32);
        ContourPath c64 = c32;
        c64.nodes = 64;
        Eigen::MatrixXd oracle = oracles::eig_projector(op.mat(), c32);
        double e32 = spectral_norm(riesz_projector(op, c32) - oracle);
        double e64 = spectral_norm(riesz_projector(op, c64) - oracle);
        if (e32 > 1e-12) {
            CHECK(e32 / e64 >= 10.0);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("contour through the spectrum is rejected") {
    SymOperator op(diag3(-1.0, 0.0, 1.0));
    CHECK_THROWS_AS(riesz_projector(op, {{0.5, 0.0}, 0.5, 64}), Error);
}

TEST_CASE("verify_splitting reports the quadratic-form margins") {
    SymOperator op(diag3(-2.0, 0.0, 3.0));
    SpectralSplitting s = spectral_split(op);
    SplittingReport rep = verify_splitting(op, s);
    CHECK(rep.min_neg_ratio == doctest::Approx(2.0));
    CHECK(rep.min_pos_ratio == doctest::Approx(3.0));
    CHECK(rep.kernel_residual <= 1e-14);

    SpectralSplitting swapped = s;
    std::swap(swapped.x_minus, swapped.x_plus);
    SplittingReport bad = verify_splitting(op, swapped);
    CHECK(bad.min_pos_ratio < 0.0);

    auto gen = substream(505);
    SymOperator rnd(oracles::random_gapped_symmetric(gen, 12, 0.4));
    SpectralSplitting rs = spectral_split(rnd);
    SplittingReport rrep = verify_splitting(rnd, rs);
    CHECK(rrep.min_neg_ratio >= rs.gap - 1e-10);
    CHECK(rrep.min_pos_ratio >= rs.gap - 1e-10);
}

TEST_CASE("verify_splitting rejects mismatched dimensions") {
    SymOperator op(diag3(-2.0, 0.0, 3.0));
    SpectralSplitting s = spectral_split(op);
    s.x_zero = Subspace::zero(3);
    CHECK_THROWS_AS(verify_splitting(op, s), Error);
}

TEST_CASE("adapted metric normalizes L to canonical form") {
    SUBCASE("already canonical") {
        AdaptedMetric m = adapted_metric(SymOperator(diag3(-1.0, 0.0, 1.0)));
        CHECK((m.gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((m.transform - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("diagonal") {
        SymOperator l(diag3(-2.0, 0.0, 3.0));
        AdaptedMetric m = adapted_metric(l);
        CHECK((m.gram - diag3(2, 1, 3)).cwiseAbs().maxCoeff() <= 1e-12);
        Eigen::MatrixXd canon = adapted_operator(m, l);
        CHECK((canon - diag3(-1, 0, 1)).cwiseAbs().maxCoeff() <= 1e-10);
    }
    SUBCASE("conjugated") {
        auto gen = substream(606);
        Eigen::MatrixXd q = random_orthogonal(gen, 3);
        SymOperator l(q * diag3(-2.0, 0.0, 3.0) * q.transpose());
        AdaptedMetric m = adapted_metric(l);
        Eigen::MatrixXd canon = adapted_operator(m, l);
        // canonical on the adapted basis: diagonal +-1/0 in the eigenbasis
        SpectralSplitting s = spectral_split(l);
        Eigen::MatrixXd b(3, 3);
        b << s.x_minus.basis, s.x_zero.basis, s.x_plus.basis;
        Eigen::MatrixXd in_basis = b.transpose() * canon * b;
        CHECK((in_basis - diag3(-1, 0, 1)).cwiseAbs().maxCoeff() <= 1e-10);
        // gram reproduces the adapted product: (x|y) = <Lx+,y+> + <x0,y0> - <Lx-,y->
        Eigen::VectorXd x = random_unit_vector(gen, 3), y = random_unit_vector(gen, 3);
        auto part = [&](const Subspace& v, const Eigen::VectorXd& w) {
            return (projector(v) * w).eval();
        };
        double expected = (l.mat() * part(s.x_plus, x)).dot(part(s.x_plus, y)) +
                          part(s.x_zero, x).dot(part(s.x_zero, y)) -
                          (l.mat() * part(s.x_minus, x)).dot(part(s.x_minus, y));
        CHECK(x.dot(m.gram * y) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("matrix file round-trip is lossless") {
    auto gen = substream(707);
    Eigen::MatrixXd a = oracles::random_gapped_symmetric(gen, 5, 0.1);
    std::stringstream ss;
    write_matrix(ss, a);
    Eigen::MatrixXd back = read_matrix(ss);
    CHECK((a - back).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("subspace file round-trip") {
    auto gen = substream(808);
    Subspace s = oracles::random_subspace(gen, 6, 3);
    std::stringstream ss;
    write_subspace(ss, s);
    Subspace back = read_subspace(ss);
    CHECK(gap_distance(s, back) == 0.0);
}
