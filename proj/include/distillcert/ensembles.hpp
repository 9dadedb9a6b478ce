#pragma once

// Deterministic state generators: Werner states, the tiles UPB state, seeded random
// low-rank mixtures and the structured families used by the distillation protocols.

#include <array>
#include <cstdint>
#include <vector>

#include "canonical.hpp"
#include "criteria.hpp"
#include "random.hpp"
#include "statecore.hpp"

namespace distillcert {

struct WernerParams {
    int n = 2;
    double a = 1.0;
    double b = -0.5;
};

/// (a+b) sum_ij |ij><ij| - 2b sum_{i<j} |psi-_ij><psi-_ij|, i.e. a I + b F, normalized.
inline BipartiteState werner(const WernerParams& p) {
    if (p.n < 2 || !(p.a > 0.0) || !(p.b < 0.0) || !(p.a + p.b >= 0.0))
        throw Error(ErrorKind::BadParams, "require n >= 2, a > 0, b < 0, a + b >= 0");
    const int n = p.n;
    Matrix m = Matrix::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            m(i * n + j, i * n + j) += p.a;
            m(i * n + j, j * n + i) += p.b;  // swap operator
        }
    return BipartiteState::from_unnormalized(Dims{n, n}, m);
}

/// Complement of the five tiles product vectors in 3x3, normalized: rank 4, PPT, entangled.
inline BipartiteState tiles_upb_state() {
    auto ket = [](std::array<double, 3> c) {
        Vector v(3);
        v << c[0], c[1], c[2];
        return Vector(v / v.norm());
    };
    const std::array<std::pair<Vector, Vector>, 5> tiles{{
        {ket({1, 0, 0}), ket({1, -1, 0})},
        {ket({1, -1, 0}), ket({0, 0, 1})},
        {ket({0, 0, 1}), ket({0, 1, -1})},
        {ket({0, 1, -1}), ket({1, 0, 0})},
        {ket({1, 1, 1}), ket({1, 1, 1})},
    }};
    Matrix m = Matrix::Identity(9, 9);
    for (const auto& [a, b] : tiles) {
        const Vector v = linalg::kron(a, b);
        m -= v * v.adjoint();
    }
    return BipartiteState::from_unnormalized(Dims{3, 3}, m);
}

namespace detail {

/// Dirichlet(1,...,1) weights, floored at `floor` and renormalized.
inline RealVector floored_dirichlet(random::Engine& rng, int r, double floor = 0.02) {
    std::exponential_distribution<double> expo(1.0);
    RealVector w(r);
    for (int k = 0; k < r; ++k) w(k) = expo(rng);
    w /= w.sum();
    for (int k = 0; k < r; ++k) w(k) = std::max(w(k), floor);
    return w / w.sum();
}

inline BipartiteState mix(Dims dims, const Matrix& orthonormal_cols, const RealVector& weights) {
    return BipartiteState::from_unnormalized(
        dims, orthonormal_cols * weights.cast<Complex>().asDiagonal() * orthonormal_cols.adjoint());
}

/// Filters a subspace on B until the equal-weight state on it has a maximally mixed
/// B marginal. Returns orthonormal columns.
inline Matrix balance_subspace_b(Matrix cols, Dims dims, int max_iterations = 5000) {
    const int r = static_cast<int>(cols.cols());
    for (int it = 0; it < max_iterations; ++it) {
        const Matrix q = linalg::orthonormalize(cols);
        const Matrix marginal = linalg::partial_trace(q * q.adjoint(), dims, Side::B) * (double(dims.b) / r);
        if (linalg::max_abs(marginal - Matrix::Identity(dims.b, dims.b)) < 1e-14) return q;
        cols = linalg::kron(Matrix::Identity(dims.a, dims.a), linalg::inverse_sqrt_pd(marginal)) * q;
    }
    return linalg::orthonormalize(cols);
}

/// Embeds vectors of C^{da} (x) C^{db-1} into C^{da} (x) C^{db} avoiding B index 0.
inline Matrix embed_away_from_b0(const Matrix& cols, int da, int db) {
    Matrix out = Matrix::Zero(da * db, cols.cols());
    for (Eigen::Index k = 0; k < cols.cols(); ++k)
        for (int i = 0; i < da; ++i)
            for (int j = 1; j < db; ++j) out(i * db + j, k) = cols(i * (db - 1) + (j - 1), k);
    return out;
}

inline BipartiteState dress_with_local_unitaries(const BipartiteState& s, random::Engine& rng) {
    const Matrix k = linalg::kron(random::unitary(rng, s.dim_a()), random::unitary(rng, s.dim_b()));
    return BipartiteState::from_unnormalized(s.dims(), k * s.matrix() * k.adjoint());
}

}  // namespace detail

/// Mixture of r seeded Haar-like orthonormal pure states with floored Dirichlet weights.
inline BipartiteState random_rank_r(Dims dims, int r, std::uint64_t seed) {
    if (dims.a < 1 || dims.b < 1) throw Error(ErrorKind::BadDims, "dimensions must be positive");
    if (r < 1 || r > dims.total()) throw Error(ErrorKind::BadRank, "rank must lie in [1, dim_a*dim_b]");
    random::Engine rng = random::engine(seed, 1);
    const Matrix q = linalg::orthonormalize(random::gaussian_matrix(rng, dims.total(), r));
    return detail::mix(dims, q, detail::floored_dirichlet(rng, r));
}

struct SampledState {
    BipartiteState state;
    int rejections = 0;
};

inline SampledState random_rank3_npt(std::uint64_t seed) {
    for (int attempt = 0;; ++attempt) {
        const std::uint64_t sub = seed * 1000003ULL + static_cast<std::uint64_t>(attempt);
        BipartiteState s = random_rank_r(Dims{3, 3}, 3, sub);
        if (min_pt_eig(s, Side::A).value < -1e-6) return {std::move(s), attempt};
    }
}

/// Normalized sum_i |p_i><p_i| over the three canonical vectors.
inline BipartiteState sigma3_state(const Sigma3Params& p) {
    const Matrix w = sigma3_vectors(p);
    if (!w.allFinite()) throw Error(ErrorKind::DegenerateParams, "non-finite parameters");
    const RealVector s = linalg::singular_values(w);
    if (!(s(2) > 1e-10 * s(0))) throw Error(ErrorKind::DegenerateParams, "canonical vectors are dependent");
    return BipartiteState::from_unnormalized(Dims{3, 3}, w * w.adjoint());
}

inline Sigma3Params random_sigma3_params(std::uint64_t seed) {
    random::Engine rng = random::engine(seed, 3);
    Sigma3Params p;
    p.x = random::gaussian_matrix(rng, 3, 1).col(0);
    p.y = random::gaussian_matrix(rng, 3, 1).col(0);
    p.alpha = random::gaussian(rng);
    p.beta = random::gaussian(rng);
    return p;
}

struct Eq15Params {
    std::array<double, 4> lambdas{0.25, 0.25, 0.25, 0.25};
    Matrix c = Matrix::Zero(3, 3);  // amplitudes c_ij of |psi_2>
    Matrix d = Matrix::Zero(3, 3);  // amplitudes d_ij of |psi_3>
};

/// lambda0 |00><00| + lambda1 |01><01| + lambda2 |psi2><psi2| + lambda3 |psi3><psi3|.
inline BipartiteState eq15_state(const Eq15Params& p) {
    double total = 0.0;
    for (double l : p.lambdas) {
        if (!(l > 0.0)) throw Error(ErrorKind::BadParams, "weights must be positive");
        total += l;
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::BadParams, "weights must sum to 1");
    if (p.c.rows() != 3 || p.c.cols() != 3 || p.d.rows() != 3 || p.d.cols() != 3)
        throw Error(ErrorKind::BadParams, "coefficient arrays must be 3x3");
    Matrix e(9, 4);
    e.setZero();
    e(0, 0) = 1.0;
    e(1, 1) = 1.0;
    e.col(2) = linalg::flatten(p.c);
    e.col(3) = linalg::flatten(p.d);
    if (linalg::max_abs(e.adjoint() * e - Matrix::Identity(4, 4)) > 1e-10)
        throw Error(ErrorKind::BadParams, "eigenvectors are not orthonormal");
    RealVector w(4);
    for (int k = 0; k < 4; ++k) w(k) = p.lambdas[k];
    return detail::mix(Dims{3, 3}, e, w);
}

inline Eq15Params random_eq15_params(std::uint64_t seed) {
    random::Engine rng = random::engine(seed, 4);
    Eq15Params p;
    const RealVector w = detail::floored_dirichlet(rng, 4);
    for (int k = 0; k < 4; ++k) p.lambdas[k] = w(k);
    Matrix g = random::gaussian_matrix(rng, 9, 2);
    g.row(0).setZero();
    g.row(1).setZero();
    const Matrix q = linalg::orthonormalize(g);
    p.c = linalg::reshape(q.col(0), Dims{3, 3});
    p.d = linalg::reshape(q.col(1), Dims{3, 3});
    return p;
}

inline SampledState random_eq15_npt(std::uint64_t seed) {
    for (int attempt = 0;; ++attempt) {
        BipartiteState s = eq15_state(random_eq15_params(seed * 1000003ULL + static_cast<std::uint64_t>(attempt)));
        if (min_pt_eig(s, Side::A).value < -1e-6) return {std::move(s), attempt};
    }
}

/// Rank-three 3x3 state with maximally mixed B marginal and three equal eigenvalues,
/// dressed by seeded local unitaries. With `plant_product` the range contains a
/// product vector (orthogonal B factor to the rest of the support). NPT by rejection.
inline SampledState equal_weight_rank3_npt(std::uint64_t seed, bool plant_product) {
    for (int attempt = 0;; ++attempt) {
        random::Engine rng = random::engine(seed * 1000003ULL + static_cast<std::uint64_t>(attempt), 5);
        Matrix q;
        if (plant_product) {
            const Matrix rest = detail::balance_subspace_b(random::gaussian_matrix(rng, 6, 2), Dims{3, 2});
            q = Matrix::Zero(9, 3);
            q(0, 0) = 1.0;
            q.rightCols(2) = detail::embed_away_from_b0(rest, 3, 3);
        } else {
            q = detail::balance_subspace_b(random::gaussian_matrix(rng, 9, 3), Dims{3, 3});
        }
        const BipartiteState s =
            detail::dress_with_local_unitaries(BipartiteState::from_unnormalized(Dims{3, 3}, q * q.adjoint()), rng);
        if (min_pt_eig(s, Side::A).value < -1e-6) return {s, attempt};
    }
}

/// Rank-four state in dim_a x 4 (dim_a in {3, 4}) of the form (|00><00| + P)/4 with
/// maximally mixed B marginal, dressed by local unitaries. NPT by rejection.
inline SampledState planted_rank4_npt(int dim_a, std::uint64_t seed) {
    if (dim_a != 3 && dim_a != 4) throw Error(ErrorKind::BadDims, "dim_a must be 3 or 4");
    const Dims dims{dim_a, 4};
    for (int attempt = 0;; ++attempt) {
        random::Engine rng = random::engine(seed * 1000003ULL + static_cast<std::uint64_t>(attempt), 6);
        const Matrix rest =
            detail::balance_subspace_b(random::gaussian_matrix(rng, dim_a * 3, 3), Dims{dim_a, 3});
        Matrix q = Matrix::Zero(dims.total(), 4);
        q(0, 0) = 1.0;
        q.rightCols(3) = detail::embed_away_from_b0(rest, dim_a, 4);
        const BipartiteState s =
            detail::dress_with_local_unitaries(BipartiteState::from_unnormalized(dims, q * q.adjoint()), rng);
        if (min_pt_eig(s, Side::A).value < -1e-6) return {s, attempt};
    }
}

/// Rank-two NPT state in one of 2x2, 2x3, 3x2, 3x3 (chosen by seed).
inline SampledState random_rank2_npt(std::uint64_t seed) {
    static constexpr std::array<Dims, 4> shapes{{{2, 2}, {2, 3}, {3, 2}, {3, 3}}};
    const Dims dims = shapes[seed % shapes.size()];
    for (int attempt = 0;; ++attempt) {
        BipartiteState s = random_rank_r(dims, 2, seed * 1000003ULL + static_cast<std::uint64_t>(attempt) + 17);
        if (min_pt_eig(s, Side::A).value < -1e-6) return {std::move(s), attempt};
    }
}

}  // namespace distillcert
