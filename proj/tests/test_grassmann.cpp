#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "critlab/grassmann.hpp"
#include "critlab/rng.hpp"
#include "oracles.hpp"

using namespace critlab;

namespace {

Subspace line2(double angle) {
    Eigen::MatrixXd b(2, 1);
    b << std::cos(angle), std::sin(angle);
    return Subspace::from_orthonormal(b);
}

Subspace axis(int n, int i) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 1);
    b(i, 0) = 1.0;
    return Subspace::from_orthonormal(b);
}

} // namespace

TEST_CASE("projector basics") {
    Eigen::MatrixXd p = projector(axis(2, 0));
    CHECK(p(0, 0) == doctest::Approx(1.0));
    CHECK(p(1, 1) == doctest::Approx(0.0));
    CHECK(p(0, 1) == doctest::Approx(0.0));

    CHECK(projector(Subspace::zero(4)).cwiseAbs().maxCoeff() == 0.0);

    auto gen = substream(11);
    Subspace v = oracles::random_subspace(gen, 9, 5);
    Eigen::MatrixXd pv = projector(v);
    CHECK(pv.trace() == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(spectral_norm(pv * pv - pv) <= 1e-10);
}

TEST_CASE("gap distance equals the sine of the principal angle") {
    CHECK(gap_distance(axis(3, 0), axis(3, 1)) == doctest::Approx(1.0));
    double theta = std::numbers::pi / 6.0;
    Subspace v = axis(2, 0), w = line2(theta);
    CHECK(gap_distance(v, w) == doctest::Approx(std::sin(theta)).epsilon(1e-12));
    CHECK(gap_distance(v, w) ==
          doctest::Approx(oracles::brute_force_norm_2d(projector(w) - projector(v)))
              .epsilon(1e-6));
    CHECK(gap_distance(v, v) == doctest::Approx(0.0));
}

TEST_CASE("pseudodistance is asymmetric and detects containment") {
    Subspace whole = Subspace::from_orthonormal(Eigen::MatrixXd::Identity(2, 2));
    CHECK(pseudodistance(axis(2, 0), whole) == doctest::Approx(0.0));
    CHECK(pseudodistance(whole, axis(2, 0)) == doctest::Approx(1.0));
    double theta = std::numbers::pi / 6.0;
    CHECK(pseudodistance(axis(2, 0), line2(theta)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pseudodistance(line2(theta), axis(2, 0)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("project_subspace and the dxv3 bound") {
    auto gen = substream(22);
    Subspace w = oracles::random_subspace(gen, 7, 4);
    Subspace v = Subspace::from_orthonormal(w.basis.leftCols(2));
    CHECK(gap_distance(project_subspace(v, w), v) <= 1e-10);

    CHECK_THROWS_AS(project_subspace(axis(2, 0), axis(2, 1)), Error);

    double theta = std::numbers::pi / 6.0;
    Subspace tilted = line2(theta), horizontal = axis(2, 0);
    Subspace proj = project_subspace(tilted, horizontal);
    CHECK(gap_distance(proj, horizontal) <= 1e-12);
    double delta = pseudodistance(tilted, horizontal);
    double bound = 2.0 * delta / std::sqrt(1.0 - delta * delta);
    CHECK(gap_distance(tilted, proj) <= bound + 1e-12);
    CHECK(gap_distance(tilted, proj) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("orthogonal sums") {
    Subspace s = orthogonal_sum(axis(3, 0), axis(3, 1));
    CHECK(s.dim() == 2);
    CHECK(gap_distance(orthogonal_sum(axis(3, 0), Subspace::zero(3)), axis(3, 0)) == 0.0);
    CHECK_THROWS_AS(orthogonal_sum(axis(2, 0), line2(1e-3)), Error);
}

TEST_CASE("pseudodistance triangle inequality on random triples") {
    auto gen = substream(33);
    for (int i = 0; i < 500; ++i) {
        int n = 4 + static_cast<int>(gen() % 5);
        Subspace v1 = oracles::random_subspace(gen, n, 1 + static_cast<int>(gen() % 3));
        Subspace v2 = oracles::random_subspace(gen, n, 1 + static_cast<int>(gen() % 3));
        Subspace v3 = oracles::random_subspace(gen, n, 1 + static_cast<int>(gen() % 3));
        CHECK(pseudodistance(v1, v3) <=
              pseudodistance(v1, v2) + pseudodistance(v2, v3) + 1e-10);
    }
}

TEST_CASE("sandwich inequality d <= delta+delta <= 2d on equal dimensions") {
    auto gen = substream(44);
    for (int i = 0; i < 500; ++i) {
        int n = 4 + static_cast<int>(gen() % 5);
        int k = 1 + static_cast<int>(gen() % (n - 1));
        Subspace v = oracles::random_subspace(gen, n, k);
        Subspace w = oracles::random_subspace(gen, n, k);
        double d = gap_distance(v, w);
        double dd = pseudodistance(v, w) + pseudodistance(w, v);
        CHECK(d <= dd + 1e-10);
        CHECK(dd <= 2.0 * d + 1e-10);
    }
}

TEST_CASE("direct-sum subadditivity of the gap distance") {
    auto gen = substream(55);
    for (int i = 0; i < 500; ++i) {
        int n = 6 + static_cast<int>(gen() % 4);
        Subspace big1 = oracles::random_subspace(gen, n, 4);
        Subspace big2 = oracles::random_subspace(gen, n, 4);
        Subspace v1 = Subspace::from_orthonormal(big1.basis.leftCols(2));
        Subspace v2 = Subspace::from_orthonormal(big1.basis.rightCols(2));
        Subspace w1 = Subspace::from_orthonormal(big2.basis.leftCols(2));
        Subspace w2 = Subspace::from_orthonormal(big2.basis.rightCols(2));
        double lhs = gap_distance(orthogonal_sum(v1, v2), orthogonal_sum(w1, w2));
        CHECK(lhs <= gap_distance(v1, w1) + gap_distance(v2, w2) + 1e-10);
    }
}

TEST_CASE("restricted projection is an isomorphism when d < 1") {
    auto gen = substream(66);
    int done = 0;
    for (int i = 0; i < 800 && done < 500; ++i) {
        int n = 5 + static_cast<int>(gen() % 4);
        int k = 1 + static_cast<int>(gen() % 3);
        Subspace v = oracles::random_subspace(gen, n, k);
        Subspace w = oracles::random_subspace(gen, n, k);
        double d = gap_distance(v, w);
        if (d >= 1.0 - 1e-9) continue;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(w.basis.transpose() * v.basis);
        double smin = svd.singularValues().minCoeff();
        CHECK(smin >= std::sqrt(1.0 - d * d) - 1e-10);
        ++done;
    }
    CHECK(done == 500);
}

TEST_CASE("projection map is continuous in both arguments") {
    auto gen = substream(77);
    int done = 0;
    while (done < 200) {
        int n = 6;
        Subspace v = oracles::random_subspace(gen, n, 2);
        Subspace w = oracles::random_subspace(gen, n, 3);
        if (pseudodistance(v, w) > 0.9) continue;
        double t = 1e-4;
        Subspace vp = Subspace::orthonormalized(v.basis + t * gaussian_matrix(gen, n, 2));
        Subspace wp = Subspace::orthonormalized(w.basis + t * gaussian_matrix(gen, n, 3));
        if (pseudodistance(vp, wp) > 0.9) continue;
        double lhs = gap_distance(project_subspace(vp, wp), project_subspace(v, w));
        double rhs = gap_distance(vp, v) + gap_distance(wp, w);
        CHECK(lhs <= 10.0 * rhs + 1e-12);
        ++done;
    }
}

TEST_CASE("ambient mismatch is rejected") {
    CHECK_THROWS_AS(gap_distance(axis(2, 0), axis(3, 0)), Error);
    CHECK_THROWS_AS(pseudodistance(axis(2, 0), axis(3, 0)), Error);
}
