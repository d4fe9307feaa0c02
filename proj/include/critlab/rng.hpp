#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace critlab {

// All randomness flows from one 64-bit seed through named substreams so
// parallel sweeps stay reproducible regardless of scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (0x1000003ULL * a + 1));
    s = splitmix64(s ^ (0x1000033ULL * b + 2));
    s = splitmix64(s ^ (0x10000c3ULL * c + 3));
    return std::mt19937_64(s);
}

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& gen, int n) {
    std::normal_distribution<double> dist;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(gen);
    return v;
}

inline Eigen::VectorXd random_unit_vector(std::mt19937_64& gen, int n) {
    Eigen::VectorXd v = gaussian_vector(gen, n);
    while (v.norm() < 1e-12) v = gaussian_vector(gen, n);
    return v / v.norm();
}

inline Eigen::MatrixXd gaussian_matrix(std::mt19937_64& gen, int rows, int cols) {
    std::normal_distribution<double> dist;
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = dist(gen);
    return m;
}

// Q factor of a random Gaussian matrix: Haar-ish orthogonal, good enough here.
inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& gen, int n) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(gen, n, n));
    return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

} // namespace critlab
