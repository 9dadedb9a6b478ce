#pragma once

// Partial-transpose and reduction-criterion tests with explicit witnesses.

#include <optional>

#include "statecore.hpp"

namespace distillcert {

namespace tolerance {
inline constexpr double npt = 1e-10;
}

/// Negative eigenvector of the partial transpose on `side`.
struct NptWitness {
    Side side = Side::A;
    double eigenvalue = 0.0;
    PureVector eigenvector;
};

/// Vector with <v|(I (x) rho_B - rho)|v> < 0 (side B) or <v|(rho_A (x) I - rho)|v> < 0 (side A).
struct ReductionWitness {
    Side side = Side::B;
    PureVector vector;
    double value = 0.0;
};

struct PtResult {
    double value = 0.0;
    std::optional<NptWitness> witness;
};

inline PtResult min_pt_eig(const BipartiteState& state, Side side, double tol = tolerance::npt) {
    const linalg::Eigh eig = linalg::eigh_desc(partial_transpose(state, side));
    const Eigen::Index last = eig.values.size() - 1;
    PtResult out{eig.values(last), std::nullopt};
    if (out.value < -tol)
        out.witness = NptWitness{side, out.value, PureVector::normalized(state.dims(), eig.vectors.col(last))};
    return out;
}

inline bool is_npt(const BipartiteState& state, double tol = tolerance::npt) {
    return min_pt_eig(state, Side::A, tol).value < -tol;
}

inline double evaluate_npt_witness(const BipartiteState& state, Side side, const PureVector& v) {
    return v.amplitudes().dot(partial_transpose(state, side) * v.amplitudes()).real();
}

/// The reduction operator I (x) rho_B - rho (side B) or rho_A (x) I - rho (side A).
inline Matrix reduction_operator(const BipartiteState& state, Side side) {
    const Dims d = state.dims();
    if (side == Side::B)
        return linalg::kron(Matrix::Identity(d.a, d.a), partial_trace(state, Side::B)) - state.matrix();
    return linalg::kron(partial_trace(state, Side::A), Matrix::Identity(d.b, d.b)) - state.matrix();
}

inline double evaluate_reduction_witness(const BipartiteState& state, Side side, const PureVector& v) {
    return v.amplitudes().dot(reduction_operator(state, side) * v.amplitudes()).real();
}

inline std::optional<ReductionWitness> reduction_witness_on(const BipartiteState& state, Side side,
                                                            double tol = tolerance::npt) {
    const linalg::Eigh eig = linalg::eigh_desc(reduction_operator(state, side));
    const Eigen::Index last = eig.values.size() - 1;
    if (!(eig.values(last) < -tol)) return std::nullopt;
    return ReductionWitness{side, PureVector::normalized(state.dims(), eig.vectors.col(last)), eig.values(last)};
}

/// Checks both sides and keeps the more negative witness.
inline std::optional<ReductionWitness> reduction_witness(const BipartiteState& state,
                                                         double tol = tolerance::npt) {
    auto on_a = reduction_witness_on(state, Side::A, tol);
    auto on_b = reduction_witness_on(state, Side::B, tol);
    if (on_a && on_b) return on_a->value <= on_b->value ? on_a : on_b;
    return on_a ? on_a : on_b;
}

inline bool lemma1_check(const BipartiteState& state, double tol = tolerance::rank) {
    return rank_of(state, tol) < std::max(reduced_rank(state, Side::A, tol), reduced_rank(state, Side::B, tol));
}

enum class PeresVerdict { SeparableCertified, EntangledCertified, NptEntangled, Inconclusive };

inline const char* to_string(PeresVerdict v) {
    switch (v) {
    case PeresVerdict::SeparableCertified: return "SeparableCertified";
    case PeresVerdict::EntangledCertified: return "EntangledCertified";
    case PeresVerdict::NptEntangled: return "NptEntangled";
    case PeresVerdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

/// Peres-Horodecki in 2x2 and 2x3 is exact; in 2xN (N >= 4) only NPT is conclusive.
inline PeresVerdict peres_2xn_verdict(const BipartiteState& state, double tol = tolerance::npt) {
    const int small = std::min(state.dim_a(), state.dim_b());
    const int large = std::max(state.dim_a(), state.dim_b());
    if (small != 2 && small != 1) throw Error(ErrorKind::UnsupportedDims, "one factor must have dimension 2");
    const bool npt = is_npt(state, tol);
    if (small == 1) return PeresVerdict::SeparableCertified;
    if (large <= 3) return npt ? PeresVerdict::EntangledCertified : PeresVerdict::SeparableCertified;
    return npt ? PeresVerdict::NptEntangled : PeresVerdict::Inconclusive;
}

}  // namespace distillcert
