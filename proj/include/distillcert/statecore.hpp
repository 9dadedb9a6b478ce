#pragma once

// Bipartite states, local operators and the tensor-structured primitives on them.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace distillcert {

namespace tolerance {
inline constexpr double hermitian = 1e-12;
inline constexpr double psd = 1e-10;
inline constexpr double trace = 1e-12;
inline constexpr double unit_norm = 1e-12;
inline constexpr double rank = 1e-9;
inline constexpr double operator_check = 1e-10;
inline constexpr double null_outcome = 1e-14;
}  // namespace tolerance

/// Normalized density matrix on C^{dim_a} (x) C^{dim_b}.
class BipartiteState {
public:
    BipartiteState(Dims dims, Matrix matrix) : dims_(dims), matrix_(std::move(matrix)) {
        if (dims_.a < 1 || dims_.b < 1)
            throw Error(ErrorKind::InvariantViolation, "dims: both factors must be positive");
        if (matrix_.rows() != dims_.total() || matrix_.cols() != dims_.total())
            throw Error(ErrorKind::InvariantViolation, "dims: matrix size does not match dim_a*dim_b");
        if (linalg::max_abs(matrix_ - matrix_.adjoint()) > tolerance::hermitian)
            throw Error(ErrorKind::InvariantViolation, "hermitian");
        if (std::abs(matrix_.trace() - 1.0) > tolerance::trace)
            throw Error(ErrorKind::InvariantViolation, "trace");
        if (linalg::min_eigenvalue(matrix_) < -tolerance::psd)
            throw Error(ErrorKind::InvariantViolation, "psd");
    }

    /// Symmetrizes and rescales to unit trace before checking the invariants.
    static BipartiteState from_unnormalized(Dims dims, const Matrix& matrix) {
        Matrix h = linalg::hermitian_part(matrix);
        const double tr = h.trace().real();
        if (!(tr > tolerance::null_outcome))
            throw Error(ErrorKind::InvariantViolation, "trace: non-positive trace cannot be normalized");
        h /= tr;
        return BipartiteState(dims, linalg::hermitian_part(h));
    }

    Dims dims() const { return dims_; }
    int dim_a() const { return dims_.a; }
    int dim_b() const { return dims_.b; }
    const Matrix& matrix() const { return matrix_; }

private:
    Dims dims_;
    Matrix matrix_;
};

/// Unit vector in C^{dim_a} (x) C^{dim_b}.
class PureVector {
public:
    PureVector(Dims dims, Vector amplitudes) : dims_(dims), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != dims_.total())
            throw Error(ErrorKind::BadDims, "amplitude length does not match dim_a*dim_b");
        if (std::abs(amplitudes_.norm() - 1.0) > tolerance::unit_norm)
            throw Error(ErrorKind::InvariantViolation, "unit norm");
    }

    static PureVector normalized(Dims dims, const Vector& amplitudes) {
        const double n = amplitudes.norm();
        if (!(n > 0.0)) throw Error(ErrorKind::InvariantViolation, "unit norm: zero vector");
        return PureVector(dims, amplitudes / n);
    }

    static PureVector product(const Vector& a, const Vector& b) {
        return normalized(Dims{static_cast<int>(a.size()), static_cast<int>(b.size())},
                          linalg::kron(a, b));
    }

    Dims dims() const { return dims_; }
    const Vector& amplitudes() const { return amplitudes_; }
    Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

private:
    Dims dims_;
    Vector amplitudes_;
};

inline BipartiteState pure_state(const PureVector& v) {
    return BipartiteState::from_unnormalized(v.dims(), v.projector());
}

enum class OpKind { ILO, Projector, Unitary, General };

inline const char* to_string(OpKind kind) {
    switch (kind) {
    case OpKind::ILO: return "ILO";
    case OpKind::Projector: return "Projector";
    case OpKind::Unitary: return "Unitary";
    case OpKind::General: return "General";
    }
    return "General";
}

/// One-sided operator, d_out x d_in. Fields are public so that deserialized
/// or tampered operators can exist; `violation()` reports the broken invariant.
struct LocalOperator {
    Side side = Side::A;
    Matrix matrix;
    OpKind kind = OpKind::General;

    int dim_in() const { return static_cast<int>(matrix.cols()); }
    int dim_out() const { return static_cast<int>(matrix.rows()); }

    std::optional<std::string> violation() const {
        if (matrix.size() == 0 || linalg::max_abs(matrix) == 0.0) return "operator is zero";
        if (!matrix.allFinite()) return "operator has non-finite entries";
        const double tol = tolerance::operator_check;
        switch (kind) {
        case OpKind::ILO: {
            if (matrix.rows() != matrix.cols()) return "ILO must be square";
            const RealVector s = linalg::singular_values(matrix);
            if (s(s.size() - 1) <= tol) return "ILO is singular";
            break;
        }
        case OpKind::Unitary: {
            if (matrix.rows() != matrix.cols()) return "unitary must be square";
            const Matrix id = Matrix::Identity(matrix.cols(), matrix.cols());
            if (linalg::max_abs(matrix.adjoint() * matrix - id) > tol) return "operator is not unitary";
            break;
        }
        case OpKind::Projector: {
            // Either orthonormal rows (dimension reducing) or a square orthogonal projector.
            const Matrix id = Matrix::Identity(matrix.rows(), matrix.rows());
            const bool isometric_rows =
                matrix.rows() <= matrix.cols() && linalg::max_abs(matrix * matrix.adjoint() - id) <= tol;
            const bool square_projector = matrix.rows() == matrix.cols() &&
                                          linalg::max_abs(matrix - matrix.adjoint()) <= tol &&
                                          linalg::max_abs(matrix * matrix - matrix) <= tol;
            if (!isometric_rows && !square_projector) return "projector rows are not orthonormal";
            break;
        }
        case OpKind::General: break;
        }
        return std::nullopt;
    }

    void validate() const {
        if (auto why = violation()) throw Error(ErrorKind::InvalidOperator, *why);
    }
};

inline LocalOperator make_operator(Side side, Matrix matrix, OpKind kind) {
    LocalOperator op{side, std::move(matrix), kind};
    op.validate();
    return op;
}

/// Projector whose rows are the conjugated columns of `basis` (orthonormal columns).
inline LocalOperator projector_onto(Side side, const Matrix& basis) {
    return make_operator(side, basis.adjoint(), OpKind::Projector);
}

struct Outcome {
    BipartiteState state;
    double probability = 1.0;
};

/// (A (x) B) rho (A (x) B)^dagger, renormalized. The probability is reported for the
/// operators rescaled to operator norm <= 1.
inline Outcome apply_local(const BipartiteState& state, const std::optional<LocalOperator>& op_a,
                           const std::optional<LocalOperator>& op_b) {
    const Dims in = state.dims();
    if (op_a && op_a->side != Side::A)
        throw Error(ErrorKind::DimensionMismatch, "operator in the A slot acts on side B");
    if (op_b && op_b->side != Side::B)
        throw Error(ErrorKind::DimensionMismatch, "operator in the B slot acts on side A");
    if (op_a && op_a->dim_in() != in.a)
        throw Error(ErrorKind::DimensionMismatch, "A operator input dimension differs from dim_a");
    if (op_b && op_b->dim_in() != in.b)
        throw Error(ErrorKind::DimensionMismatch, "B operator input dimension differs from dim_b");

    const Matrix a = op_a ? op_a->matrix : Matrix::Identity(in.a, in.a);
    const Matrix b = op_b ? op_b->matrix : Matrix::Identity(in.b, in.b);
    const Matrix k = linalg::kron(a, b);
    const Matrix out = k * state.matrix() * k.adjoint();
    const double tr = out.trace().real();
    if (!(tr > tolerance::null_outcome)) throw Error(ErrorKind::NullOutcome, "outcome has zero trace");

    const double scale_a = std::max(1.0, op_a ? linalg::operator_norm(a) : 1.0);
    const double scale_b = std::max(1.0, op_b ? linalg::operator_norm(b) : 1.0);
    const double probability = tr / (scale_a * scale_a * scale_b * scale_b);
    return {BipartiteState::from_unnormalized(Dims{static_cast<int>(a.rows()), static_cast<int>(b.rows())}, out),
            probability};
}

inline Outcome apply_local(const BipartiteState& state, const LocalOperator& op) {
    return op.side == Side::A ? apply_local(state, op, std::nullopt) : apply_local(state, std::nullopt, op);
}

inline Matrix partial_trace(const BipartiteState& state, Side keep) {
    return linalg::hermitian_part(linalg::partial_trace(state.matrix(), state.dims(), keep));
}

inline Matrix partial_transpose(const BipartiteState& state, Side side) {
    return linalg::partial_transpose(state.matrix(), state.dims(), side);
}

struct SchmidtDecomposition {
    RealVector coefficients;  // descending, nonnegative
    Matrix a_basis;           // columns |a_k>
    Matrix b_basis;           // columns |b_k>, v = sum_k c_k |a_k>|b_k>
};

inline SchmidtDecomposition schmidt_decompose(const PureVector& v) {
    Eigen::JacobiSVD<Matrix> svd(linalg::reshape(v.amplitudes(), v.dims()),
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
}

inline int rank_of(const BipartiteState& state, double tol = tolerance::rank) {
    if (!(tol > 0.0)) throw Error(ErrorKind::PreconditionViolated, "rank tolerance must be positive");
    return linalg::hermitian_rank(state.matrix(), tol);
}

inline int reduced_rank(const BipartiteState& state, Side side, double tol = tolerance::rank) {
    return linalg::hermitian_rank(partial_trace(state, side), tol);
}

struct SpectralDecomposition {
    RealVector eigenvalues;                // descending
    std::vector<PureVector> eigenvectors;  // eigenvectors[k] pairs with eigenvalues(k)
};

inline SpectralDecomposition spectral_decompose(const BipartiteState& state) {
    const linalg::Eigh eig = linalg::eigh_desc(state.matrix());
    SpectralDecomposition out{eig.values, {}};
    out.eigenvectors.reserve(eig.values.size());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
        out.eigenvectors.push_back(PureVector::normalized(state.dims(), eig.vectors.col(k)));
    return out;
}

}  // namespace distillcert
