#pragma once

#include <cstdint>
#include <random>

#include "linalg.hpp"

namespace distillcert::random {

using Engine = std::mt19937_64;

inline Engine engine(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Engine(seq);
}

inline Complex gaussian(Engine& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

inline Matrix gaussian_matrix(Engine& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = gaussian(rng);
    return m;
}

inline Vector unit_vector(Engine& rng, Eigen::Index n) {
    Vector v = gaussian_matrix(rng, n, 1).col(0);
    return v / v.norm();
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
inline Matrix unitary(Engine& rng, Eigen::Index n) {
    return linalg::orthonormalize(gaussian_matrix(rng, n, n));
}

/// Well-conditioned random invertible matrix: unitary * diag(s) * unitary, s in [0.5, 2].
inline Matrix invertible(Engine& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> uniform(0.5, 2.0);
    RealVector s(n);
    for (Eigen::Index k = 0; k < n; ++k) s(k) = uniform(rng);
    return unitary(rng, n) * s.cast<Complex>().asDiagonal() * unitary(rng, n);
}

}  // namespace distillcert::random
