#pragma once

// Range analysis: product vectors and Schmidt-rank-two combinations inside the
// support of a low-rank state, and the filtering that brings a rank-three state
// with a separable 2x3 projection to its canonical form.

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <vector>

#include "canonical.hpp"
#include "criteria.hpp"
#include "random.hpp"
#include "statecore.hpp"

namespace distillcert {

namespace tolerance {
inline constexpr double product_found = 1e-7;
inline constexpr double product_absent = 1e-4;
inline constexpr double schmidt_rank2_det = 1e-9;
inline constexpr double schmidt_rank2_sigma2 = 1e-7;
}  // namespace tolerance

inline std::vector<PureVector> range_basis(const BipartiteState& state, double tol = tolerance::rank) {
    const linalg::Eigh eig = linalg::eigh_desc(state.matrix());
    const int r = linalg::numerical_rank(eig.values, tol);
    std::vector<PureVector> out;
    out.reserve(r);
    for (int k = 0; k < r; ++k) out.push_back(PureVector::normalized(state.dims(), eig.vectors.col(k)));
    return out;
}

inline Matrix basis_matrix(const std::vector<PureVector>& basis) {
    Matrix m(basis.front().amplitudes().size(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = basis[k].amplitudes();
    return m;
}

enum class ProductVerdict { Found, NotFound, Ambiguous };

inline const char* to_string(ProductVerdict v) {
    switch (v) {
    case ProductVerdict::Found: return "found";
    case ProductVerdict::NotFound: return "not-found";
    case ProductVerdict::Ambiguous: return "ambiguous";
    }
    return "ambiguous";
}

struct ProductFinding {
    bool found = false;
    ProductVerdict verdict = ProductVerdict::NotFound;
    std::optional<PureVector> vector;
    std::optional<Vector> factor_a;
    std::optional<Vector> factor_b;
    /// Second Schmidt coefficient of the best combination seen.
    double residual = 1.0;
    /// Coefficients over the supplied basis; the best combination even when not found.
    Vector combination;
};

struct ProductSearchOptions {
    int starts = 256;
    int max_iterations = 500;
    int slice_directions = 64;
    std::uint64_t seed = 0x5eed;
};

namespace detail {

inline double second_schmidt(const Vector& v, Dims dims) {
    const RealVector s = linalg::singular_values(linalg::reshape(v, dims));
    return s.size() > 1 ? s(1) / s.norm() : 0.0;
}

/// Alternating ascent of |<a b|P_S|a b>|: project the best rank-one approximation of
/// the current combination back onto the subspace. Returns the polished coefficients.
inline Vector polish_product(const Matrix& q, Dims dims, Vector c, int max_iterations, double& residual) {
    c.normalize();
    residual = second_schmidt(q * c, dims);
    for (int it = 0; it < max_iterations && residual > 1e-14; ++it) {
        Eigen::JacobiSVD<Matrix> svd(linalg::reshape(q * c, dims), Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Vector p = linalg::kron(Vector(svd.matrixU().col(0)), Vector(svd.matrixV().col(0).conjugate()));
        Vector next = q.adjoint() * p;
        const double n = next.norm();
        if (!(n > 0.0)) break;
        next /= n;
        const double r = second_schmidt(q * next, dims);
        const double improvement = residual - r;
        c = next;
        residual = r;
        if (improvement < 1e-13 * std::max(residual, 1e-3)) break;
    }
    return c;
}

/// Roots of det(M(u) + t M(w)) along random projective lines in coefficient space
/// (square reshapes only). Each root is returned as a unit coefficient vector.
inline std::vector<Vector> determinant_slice_roots(const Matrix& q, Dims dims, int directions,
                                                   random::Engine& rng) {
    std::vector<Vector> out;
    if (dims.a != dims.b || q.cols() < 2) return out;
    for (int d = 0; d < directions; ++d) {
        const Vector u = random::unit_vector(rng, q.cols());
        const Vector w = random::unit_vector(rng, q.cols());
        const Matrix mu = linalg::reshape(q * u, dims);
        const Matrix mw = linalg::reshape(q * w, dims);
        for (const Complex& t : linalg::polynomial_roots(linalg::pencil_determinant(mu, mw))) {
            if (!std::isfinite(std::abs(t))) continue;
            Vector c = u + t * w;
            const double n = c.norm();
            if (n > 0.0) out.push_back(c / n);
        }
    }
    return out;
}

inline Vector to_supplied_coefficients(const Matrix& supplied, const Vector& v) {
    return supplied.completeOrthogonalDecomposition().solve(v);
}

}  // namespace detail

/// Searches span(basis) for a product vector: determinant-slice roots seed a local
/// polish, followed by seeded multi-start polishing; the best residual wins
/// (ties go to the earliest start).
inline ProductFinding find_product_vector(const std::vector<PureVector>& basis, Dims dims,
                                          const ProductSearchOptions& opts = {}) {
    if (basis.empty() || basis.size() > 4)
        throw Error(ErrorKind::PreconditionViolated, "basis must contain between 1 and 4 vectors");
    for (const auto& v : basis)
        if (v.amplitudes().size() != dims.total())
            throw Error(ErrorKind::BadDims, "vector length differs from dim_a*dim_b");

    const Matrix supplied = basis_matrix(basis);
    const Matrix q = linalg::orthonormalize(supplied);
    random::Engine rng = random::engine(opts.seed);

    Vector best_c = Vector::Zero(q.cols());
    best_c(0) = 1.0;
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vector& start) {
        double r = 1.0;
        const Vector c = detail::polish_product(q, dims, start, opts.max_iterations, r);
        if (r < best) {
            best = r;
            best_c = c;
        }
    };

    if (q.cols() <= 3)
        for (const Vector& seed : detail::determinant_slice_roots(q, dims, opts.slice_directions, rng)) {
            consider(seed);
            if (best < 1e-13) break;
        }
    for (int s = 0; s < opts.starts && best >= 1e-13; ++s) consider(random::unit_vector(rng, q.cols()));

    ProductFinding out;
    out.residual = best;
    const Vector v = q * best_c;
    out.combination = detail::to_supplied_coefficients(supplied, v);
    if (best <= tolerance::product_found) {
        out.found = true;
        out.verdict = ProductVerdict::Found;
        out.vector = PureVector::normalized(dims, v);
        Eigen::JacobiSVD<Matrix> svd(linalg::reshape(v, dims), Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.factor_a = Vector(svd.matrixU().col(0));
        out.factor_b = Vector(svd.matrixV().col(0).conjugate());
    } else {
        out.verdict = best >= tolerance::product_absent ? ProductVerdict::NotFound : ProductVerdict::Ambiguous;
    }
    return out;
}

inline ProductFinding find_product_in_range(const BipartiteState& state, const ProductSearchOptions& opts = {}) {
    return find_product_vector(range_basis(state), state.dims(), opts);
}

struct SchmidtRank2Combo {
    PureVector vector;
    Vector coefficients;  // over the supplied basis
    double sigma2 = 0.0;  // second Schmidt coefficient
};

namespace detail {

/// All determinant-slice roots that are genuinely Schmidt rank two, best first.
inline std::vector<SchmidtRank2Combo> schmidt_rank2_candidates(const std::vector<PureVector>& basis,
                                                               int directions = 64, std::uint64_t seed = 0x5eed) {
    const Dims dims{3, 3};
    if (basis.size() != 3) throw Error(ErrorKind::PreconditionViolated, "basis must contain three vectors");
    for (const auto& v : basis)
        if (v.dims() != dims) throw Error(ErrorKind::BadDims, "basis vectors must live in 3x3");
    const Matrix supplied = basis_matrix(basis);
    const Matrix q = linalg::orthonormalize(supplied);
    random::Engine rng = random::engine(seed, 2);

    std::vector<SchmidtRank2Combo> out;
    for (const Vector& c : determinant_slice_roots(q, dims, directions, rng)) {
        const Vector v = q * c;
        const Matrix m = linalg::reshape(v, dims);
        const RealVector s = linalg::singular_values(m);
        if (std::abs(m.determinant()) > tolerance::schmidt_rank2_det) continue;
        if (!(s(1) > tolerance::schmidt_rank2_sigma2)) continue;
        out.push_back({PureVector::normalized(dims, v), to_supplied_coefficients(supplied, v), s(1)});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SchmidtRank2Combo& l, const SchmidtRank2Combo& r) { return l.sigma2 > r.sigma2; });
    return out;
}

}  // namespace detail

/// A combination of three 3x3 range vectors with Schmidt rank exactly two.
inline SchmidtRank2Combo find_schmidt_rank2_combo(const std::vector<PureVector>& basis) {
    auto candidates = detail::schmidt_rank2_candidates(basis);
    if (candidates.empty())
        throw Error(ErrorKind::AllRootsRankOne, "every determinant root is a product vector");
    return candidates.front();
}

/// A-side plane (orthonormal 3x2 columns) spanned by the local A-support of a Schmidt-rank-two vector.
inline Matrix a_support_plane(const PureVector& v) {
    return schmidt_decompose(v).a_basis.leftCols(2);
}

/// Unitary on A whose first two rows project onto `plane` (3x2, orthonormal columns).
inline Matrix plane_alignment(const Matrix& plane) {
    Matrix u(3, 3);
    u.leftCols(2) = plane;
    u.col(2) = linalg::orthonormal_complement(plane).col(0);
    return u.adjoint();
}

struct CanonicalForm {
    Sigma3Params params;
    /// Reconstruction error of the unnormalized canonical state against the filtered input.
    double reconstruction_error = 0.0;
};

namespace detail {

inline bool nearly_diagonal(const Matrix& gram, double tol) {
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index j = 0; j < gram.cols(); ++j)
            if (i != j && std::abs(gram(i, j)) > tol * std::sqrt(std::abs(gram(i, i) * gram(j, j)))) return false;
    return true;
}

}  // namespace detail

/// Filters a 3x3 rank-three state whose projection onto `plane` (x) C^3 is separable
/// to the canonical form of canonical.hpp. `plane` is 3x2 with orthonormal columns.
inline CanonicalForm canonicalize_sigma3(const BipartiteState& state, const Matrix& plane) {
    const Dims dims{3, 3};
    if (state.dims() != dims) throw Error(ErrorKind::PreconditionViolated, "state must be 3x3");
    if (rank_of(state) != 3) throw Error(ErrorKind::PreconditionViolated, "state must have rank 3");
    if (plane.rows() != 3 || plane.cols() != 2)
        throw Error(ErrorKind::PreconditionViolated, "plane must be a 3x2 isometry");
    if (const ProductFinding p = find_product_in_range(state); p.found)
        throw Error(ErrorKind::ProductInRange, "range contains a product vector");

    const Matrix align = plane_alignment(plane);
    const Matrix k0 = linalg::kron(align, Matrix::Identity(3, 3));
    const Matrix rotated = k0 * state.matrix() * k0.adjoint();

    // sqrt-weighted eigenvectors: rotated = v v^dagger.
    const linalg::Eigh eig = linalg::eigh_desc(rotated);
    Matrix v(9, 3);
    for (int k = 0; k < 3; ++k) v.col(k) = eig.vectors.col(k) * std::sqrt(std::max(eig.values(k), 0.0));

    // Product vectors in the projected range: u^T T(c) = 0 for some u in C^2, i.e.
    // det(N0 + t N1) = 0 where column k of N_r is row r of the upper 2x3 block of v_k.
    Matrix n0(3, 3), n1(3, 3);
    for (int k = 0; k < 3; ++k) {
        const Matrix r = linalg::reshape(v.col(k), dims);
        n0.col(k) = r.row(0).transpose();
        n1.col(k) = r.row(1).transpose();
    }
    std::vector<Vector> us;
    const auto coeffs = linalg::pencil_determinant(n0, n1);
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale < 1e-14) throw Error(ErrorKind::PreconditionViolated, "projected range is degenerate");
    for (const Complex& t : linalg::polynomial_roots(coeffs)) {
        Vector u(2);
        u << 1.0, t;
        us.push_back(u / u.norm());
    }
    if (std::abs(coeffs[3]) <= 1e-10 * scale) {  // root at infinity: u = (0, 1)
        Vector u(2);
        u << 0.0, 1.0;
        us.push_back(u);
    }
    if (us.size() != 3)
        throw Error(ErrorKind::PreconditionViolated, "projected range does not contain exactly three products");

    Matrix c(3, 3);
    for (int i = 0; i < 3; ++i) {
        const Matrix n = n0 * us[i](0) + n1 * us[i](1);
        Eigen::JacobiSVD<Matrix> svd(n, Eigen::ComputeFullV);
        c.col(i) = svd.matrixV().col(2);
    }
    // A separable decomposition into these three products needs orthogonal coefficients.
    if (!detail::nearly_diagonal(c.adjoint() * c, 1e-6))
        throw Error(ErrorKind::PreconditionViolated, "projection onto the plane is not separable");
    const Matrix mix = linalg::orthonormalize(c);  // unitary, columns parallel to c_i

    const Matrix psi = v * mix;
    Matrix a(2, 3), f(3, 3), tails(3, 3);
    for (int i = 0; i < 3; ++i) {
        const Matrix r = linalg::reshape(psi.col(i), dims);
        Eigen::JacobiSVD<Matrix> svd(r.topRows(2), Eigen::ComputeThinU | Eigen::ComputeThinV);
        a.col(i) = svd.matrixU().col(0) * svd.singularValues()(0);
        f.col(i) = svd.matrixV().col(0).conjugate();
        tails.col(i) = r.row(2).transpose();
    }

    // Map the A factors to |0>, |1>, |0>+|1>.
    const Matrix a01 = a.leftCols(2);
    if (std::abs(a01.determinant()) <= 1e-9 * a.col(0).norm() * a.col(1).norm())
        throw Error(ErrorKind::ProductInRange, "two projected products share an A factor");
    const Vector mu = a01.partialPivLu().solve(a.col(2));
    if (std::abs(mu(0)) <= 1e-9 * mu.norm() || std::abs(mu(1)) <= 1e-9 * mu.norm())
        throw Error(ErrorKind::ProductInRange, "degenerate A factors (a20 a21 = 0)");
    Vector t(3);
    t << 1.0 / mu(0), 1.0 / mu(1), 1.0;
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = t(0);
    g(1, 1) = t(1);
    g = g * a01.inverse();

    Eigen::FullPivLU<Matrix> f_lu(f);
    if (!f_lu.isInvertible() || linalg::singular_values(f).minCoeff() < 1e-9 * f.norm())
        throw Error(ErrorKind::PreconditionViolated, "B factors of the projected products are dependent");
    Matrix gb = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i) gb(i, i) = 1.0 / t(i);
    gb = gb * f_lu.inverse();

    // |2>-parts: make them linearly dependent with a lower-triangular A filter row (h, 1).
    const Matrix phi = gb * tails;
    Vector h = Vector::Zero(2);
    const double col_scale = phi.col(0).norm() * phi.col(1).norm() * phi.col(2).norm();
    if (std::abs(phi.determinant()) > 1e-10 * std::max(col_scale, 1e-300)) {
        const std::array<std::array<Complex, 2>, 5> dirs{{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, -1.0},
                                                           {1.0, Complex(0.0, 1.0)}}};
        Vector best_dir(2);
        double best_min = -1.0;
        for (const auto& d : dirs) {
            Vector hd(2);
            hd << d[0], d[1];
            double m = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 3; ++i) m = std::min(m, std::abs(hd.cwiseProduct(a.col(i)).sum()) / std::abs(t(i)));
            if (m > best_min) {
                best_min = m;
                best_dir = hd;
            }
        }
        Matrix delta = Matrix::Zero(3, 3);
        for (int i = 0; i < 3; ++i) delta(i, i) = Complex(best_dir.transpose() * a.col(i)) / t(i);
        const auto roots = linalg::polynomial_roots(linalg::pencil_determinant(phi, delta));
        if (roots.empty()) throw Error(ErrorKind::DegenerateParams, "no filter aligns the |2> components");
        const Complex tau = *std::min_element(roots.begin(), roots.end(),
                                              [](Complex l, Complex r) { return std::abs(l) < std::abs(r); });
        h = tau * best_dir;
    }
    Matrix w(3, 3);
    for (int i = 0; i < 3; ++i) w.col(i) = phi.col(i) + Complex(h.transpose() * a.col(i)) / t(i) * Matrix::Identity(3, 3).col(i);

    Sigma3Params params;
    params.x = w.col(0);
    params.y = w.col(1);
    const Matrix xy = w.leftCols(2);
    const Vector ab = xy.completeOrthogonalDecomposition().solve(w.col(2));
    if ((xy * ab - w.col(2)).norm() > 1e-6 * std::max(w.col(2).norm(), 1.0))
        throw Error(ErrorKind::DegenerateParams, "|2> components could not be made dependent");
    params.alpha = ab(0);
    params.beta = ab(1);

    Matrix ga = Matrix::Zero(3, 3);
    ga.topLeftCorner(2, 2) = g;
    ga(2, 0) = h(0);
    ga(2, 1) = h(1);
    ga(2, 2) = 1.0;
    params.ilos.push_back(make_operator(Side::A, ga * align, OpKind::ILO));
    params.ilos.push_back(make_operator(Side::B, gb, OpKind::ILO));

    const Matrix k = linalg::kron(params.ilos[0].matrix, params.ilos[1].matrix);
    const Matrix filtered = k * state.matrix() * k.adjoint();
    const Matrix rebuilt = sigma3_matrix(params);
    const double err = linalg::max_abs(filtered / filtered.trace().real() - rebuilt / rebuilt.trace().real());
    return {params, err};
}

/// Convenience overload: the plane is the A-support of the best Schmidt-rank-two combination.
inline CanonicalForm canonicalize_sigma3(const BipartiteState& state) {
    const auto combo = find_schmidt_rank2_combo(range_basis(state));
    return canonicalize_sigma3(state, a_support_plane(combo.vector));
}

}  // namespace distillcert
