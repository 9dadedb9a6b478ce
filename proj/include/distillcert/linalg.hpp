#pragma once

// Small dense complex linear-algebra helpers shared by every module.
// Composite index convention: |i>_A |j>_B  <->  i * dim_b + j.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "error.hpp"

namespace distillcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Side { A, B };

inline const char* to_string(Side side) { return side == Side::A ? "A" : "B"; }
inline Side other(Side side) { return side == Side::A ? Side::B : Side::A; }

struct Dims {
    int a = 0;
    int b = 0;

    int total() const { return a * b; }
    int of(Side side) const { return side == Side::A ? a : b; }
    friend bool operator==(const Dims&, const Dims&) = default;
};

namespace linalg {

inline Matrix kron(const Matrix& lhs, const Matrix& rhs) {
    Matrix out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
    for (Eigen::Index i = 0; i < lhs.rows(); ++i)
        for (Eigen::Index j = 0; j < lhs.cols(); ++j)
            out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
    return out;
}

inline Vector kron(const Vector& lhs, const Vector& rhs) {
    Vector out(lhs.size() * rhs.size());
    for (Eigen::Index i = 0; i < lhs.size(); ++i)
        out.segment(i * rhs.size(), rhs.size()) = lhs(i) * rhs;
    return out;
}

inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Reduced operator on `keep` of a (possibly unnormalized) bipartite matrix.
inline Matrix partial_trace(const Matrix& m, Dims dims, Side keep) {
    const int da = dims.a, db = dims.b;
    if (keep == Side::A) {
        Matrix out = Matrix::Zero(da, da);
        for (int i = 0; i < da; ++i)
            for (int k = 0; k < da; ++k)
                for (int j = 0; j < db; ++j) out(i, k) += m(i * db + j, k * db + j);
        return out;
    }
    Matrix out = Matrix::Zero(db, db);
    for (int j = 0; j < db; ++j)
        for (int l = 0; l < db; ++l)
            for (int i = 0; i < da; ++i) out(j, l) += m(i * db + j, i * db + l);
    return out;
}

inline Matrix partial_transpose(const Matrix& m, Dims dims, Side side) {
    const int da = dims.a, db = dims.b;
    Matrix out(m.rows(), m.cols());
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j)
            for (int k = 0; k < da; ++k)
                for (int l = 0; l < db; ++l) {
                    const Complex v = m(i * db + j, k * db + l);
                    if (side == Side::A)
                        out(k * db + j, i * db + l) = v;
                    else
                        out(i * db + l, k * db + j) = v;
                }
    return out;
}

struct Eigh {
    RealVector values;  // descending
    Matrix vectors;     // columns match values
};

/// Hermitian eigendecomposition with eigenvalues sorted in descending order.
inline Eigh eigh_desc(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
    const Eigen::Index n = m.rows();
    Eigh out{RealVector(n), Matrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = solver.eigenvalues()(n - 1 - k);
        out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    return out;
}

inline double min_eigenvalue(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

/// Count of entries above tol * max(values). Values need not be sorted.
inline int numerical_rank(const RealVector& values, double tol) {
    if (values.size() == 0) return 0;
    const double top = values.maxCoeff();
    if (top <= 0.0) return 0;
    return static_cast<int>((values.array() > tol * top).count());
}

inline int hermitian_rank(const Matrix& m, double tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
    return numerical_rank(solver.eigenvalues(), tol);
}

inline double operator_norm(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

inline RealVector singular_values(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

/// m^{-1/2} for a Hermitian positive definite matrix.
inline Matrix inverse_sqrt_pd(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
    RealVector w = solver.eigenvalues();
    for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = 1.0 / std::sqrt(w(k));
    return solver.eigenvectors() * w.asDiagonal() * solver.eigenvectors().adjoint();
}

inline Matrix reshape(const Vector& v, Dims dims) {
    Matrix out(dims.a, dims.b);
    for (int i = 0; i < dims.a; ++i)
        for (int j = 0; j < dims.b; ++j) out(i, j) = v(i * dims.b + j);
    return out;
}

inline Vector flatten(const Matrix& m) {
    Vector out(m.rows() * m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i * m.cols() + j) = m(i, j);
    return out;
}

/// Orthonormal basis (as columns) of the orthogonal complement of span(cols).
inline Matrix orthonormal_complement(const Matrix& cols, double tol = 1e-10) {
    const Eigen::Index n = cols.rows();
    if (cols.cols() == 0) return Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeFullU);
    const RealVector& s = svd.singularValues();
    const double top = s.size() ? s(0) : 0.0;
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > tol * std::max(top, 1e-300)) ++r;
    return svd.matrixU().rightCols(n - r);
}

/// Orthonormalize columns (thin QR); column order is preserved as in Gram-Schmidt.
inline Matrix orthonormalize(const Matrix& cols) {
    Eigen::HouseholderQR<Matrix> qr(cols);
    Matrix q = qr.householderQ() * Matrix::Identity(cols.rows(), cols.cols());
    // Fix the phase so that diag(R) is real positive, giving a canonical result.
    const Matrix r = qr.matrixQR().topRows(cols.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < cols.cols(); ++k) {
        const Complex d = r(k, k);
        if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
    }
    return q;
}

/// Roots of sum_k coeffs[k] t^k via the companion matrix. Leading zeros are trimmed.
inline std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs, double tol = 1e-13) {
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return {};
    while (!coeffs.empty() && std::abs(coeffs.back()) <= tol * scale) coeffs.pop_back();
    const int degree = static_cast<int>(coeffs.size()) - 1;
    if (degree < 1) return {};
    Matrix companion = Matrix::Zero(degree, degree);
    for (int k = 1; k < degree; ++k) companion(k, k - 1) = 1.0;
    for (int k = 0; k < degree; ++k) companion(k, degree - 1) = -coeffs[k] / coeffs[degree];
    Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
    std::vector<Complex> roots(degree);
    for (int k = 0; k < degree; ++k) roots[k] = solver.eigenvalues()(k);
    return roots;
}

/// Coefficients of the polynomial t -> det(base + t * dir), recovered by
/// evaluating at the roots of unity (an exact DFT interpolation).
inline std::vector<Complex> pencil_determinant(const Matrix& base, const Matrix& dir) {
    const int n = static_cast<int>(base.rows());
    const int samples = n + 1;
    std::vector<Complex> values(samples);
    for (int s = 0; s < samples; ++s) {
        const Complex t = std::polar(1.0, 2.0 * std::numbers::pi * s / samples);
        values[s] = (base + t * dir).determinant();
    }
    std::vector<Complex> coeffs(samples);
    for (int k = 0; k < samples; ++k) {
        Complex acc = 0.0;
        for (int s = 0; s < samples; ++s)
            acc += values[s] * std::polar(1.0, -2.0 * std::numbers::pi * k * s / samples);
        coeffs[k] = acc / static_cast<double>(samples);
    }
    return coeffs;
}

}  // namespace linalg
}  // namespace distillcert
