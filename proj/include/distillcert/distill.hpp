#pragma once

// Certificate synthesis for low-rank NPT states. Every branch emits explicit local
// operations and ends in a terminal state that is either NPT in 2xN or violates the
// reduction criterion; the finished certificate is re-checked with verify().

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "certificate.hpp"
#include "criteria.hpp"
#include "ensembles.hpp"
#include "range.hpp"
#include "statecore.hpp"
#include "verify.hpp"

namespace distillcert {

struct CertifyOptions {
    double npt_tol = tolerance::npt;
    int max_depth = 4;
    int plane_candidates = 8;
    ProductSearchOptions search;
};

struct Equalized {
    BipartiteState state;
    LocalOperator filter;
};

/// Applies F = (d rho_side)^{-1/2} on `side` so that the reduced state becomes I/d.
inline Equalized equalize_reduction(const BipartiteState& state, Side side) {
    const Matrix reduced = partial_trace(state, side);
    const linalg::Eigh eig = linalg::eigh_desc(reduced);
    const int d = state.dims().of(side);
    if (linalg::numerical_rank(eig.values, tolerance::rank) < d)
        throw Error(ErrorKind::RankDeficientReduced, std::string("reduced state on ") + to_string(side) +
                                                         " is rank deficient; restrict to its support first");
    LocalOperator filter = make_operator(side, linalg::inverse_sqrt_pd(reduced * static_cast<double>(d)), OpKind::ILO);
    BipartiteState out = apply_local(state, filter).state;
    return {std::move(out), std::move(filter)};
}

/// Deterministic scan order for the projector parameter: 0, then increasing |a|, + before -.
inline std::vector<double> projector_a_grid() {
    std::vector<double> mags;
    for (int k = -8; k <= 8; ++k)
        for (double m : {1.0, 1.0 / 3.0, 2.0 / 3.0}) mags.push_back(std::pow(1.5, k) * m);
    std::sort(mags.begin(), mags.end());
    // 1.5^k * 2/3 = 1.5^(k-1), so the m = 2/3 row mostly repeats the m = 1 row
    mags.erase(std::unique(mags.begin(), mags.end(), [](double l, double r) { return r - l <= 1e-12 * r; }),
               mags.end());
    std::vector<double> grid{0.0};
    for (double v : mags) {
        grid.push_back(v);
        grid.push_back(-v);
    }
    return grid;
}

/// Rows (|0> + a|1>)/sqrt(1+a^2) and |2> on A: the parametrized 3 -> 2 projector.
inline LocalOperator projector_a(double a) {
    Matrix p = Matrix::Zero(2, 3);
    const double n = std::sqrt(1.0 + a * a);
    p(0, 0) = 1.0 / n;
    p(0, 1) = a / n;
    p(1, 2) = 1.0;
    return make_operator(Side::A, p, OpKind::Projector);
}

/// Minimum over complex b of <w|X|w> for w = u + b v (negative infinity when unbounded).
inline double min_quadratic_over_b(const Matrix& x, const Vector& u, const Vector& v) {
    const double uu = u.dot(x * u).real();
    const Complex uv = u.dot(x * v);
    const double vv = v.dot(x * v).real();
    if (vv > 1e-14) return uu - std::norm(uv) / vv;
    if (std::abs(uv) < 1e-14 && vv > -1e-14) return uu;
    return -std::numeric_limits<double>::infinity();
}

/// The four witness forms <omega_i|(sigma4)^{T_A}|omega_i>, minimized over b, for a
/// 2x3 state whose A basis is {|0>, |2>} of the original space.
inline std::array<double, 4> omega_minima(const BipartiteState& projected) {
    const Matrix x = partial_transpose(projected, Side::A);
    auto ket = [](int a, int b) {
        Vector v = Vector::Zero(6);
        v(a * 3 + b) = 1.0;
        return v;
    };
    return {min_quadratic_over_b(x, ket(0, 0), ket(1, 2)), min_quadratic_over_b(x, ket(0, 0), ket(1, 1)),
            min_quadratic_over_b(x, ket(0, 1), ket(1, 0)), min_quadratic_over_b(x, ket(0, 2), ket(1, 0))};
}

struct ProjectorSearch {
    double a = 0.0;
    double min_pt_eig = 0.0;
    std::array<double, 4> omega{};
    std::vector<CertificateStep> steps;  // the single projector step
};

/// Scans the deterministic a-grid for a projection of the canonical state that is NPT.
inline ProjectorSearch search_projector_a(const Sigma3Params& canonical) {
    const double xn = canonical.x.norm() + canonical.y.norm() + 1.0;
    if (std::abs(canonical.x(1)) <= 1e-12 * xn && std::abs(canonical.x(2)) <= 1e-12 * xn)
        throw Error(ErrorKind::PreconditionViolated, "x1 = x2 = 0: the first canonical vector is a product");
    const BipartiteState sigma = sigma3_state(canonical);
    double best = std::numeric_limits<double>::infinity();
    double best_a = 0.0;
    for (double a : projector_a_grid()) {
        const LocalOperator p = projector_a(a);
        const BipartiteState projected = apply_local(sigma, p).state;
        const double m = min_pt_eig(projected, Side::A).value;
        if (m < best) {
            best = m;
            best_a = a;
        }
        if (m < -tolerance::verify_claim) {
            ProjectorSearch out{a, m, omega_minima(projected), {}};
            out.steps.push_back({p, std::nullopt, "project A onto span{|0>+a|1>, |2>}"});
            return out;
        }
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "grid exhausted; best a=" << best_a << " min_pt_eig=" << best << " x=" << canonical.x.transpose()
        << " y=" << canonical.y.transpose() << " alpha=" << canonical.alpha << " beta=" << canonical.beta;
    throw Error(ErrorKind::NoParameterFound, msg.str());
}

namespace detail {

struct Builder {
    BipartiteState current;
    std::vector<CertificateStep> steps;
    std::vector<std::string> trace;

    static LocalOperator rescaled(LocalOperator op) {
        const double n = linalg::operator_norm(op.matrix);
        if (n > 0.0) op.matrix /= n;
        return op;
    }

    void apply(const LocalOperator& op, std::string label) {
        LocalOperator r = rescaled(op);
        try {
            current = apply_local(current, r).state;
        } catch (const Error& e) {
            throw Error(ErrorKind::SynthesisFailed, label + ": " + e.what());
        }
        CertificateStep step;
        (r.side == Side::A ? step.op_a : step.op_b) = std::move(r);
        step.label = std::move(label);
        steps.push_back(std::move(step));
    }
};

inline bool npt_beyond_verify_margin(const BipartiteState& s) {
    return min_pt_eig(s, Side::A).value < -tolerance::verify_claim;
}

inline bool has_reduction_witness(const BipartiteState& s, std::optional<Side> side = std::nullopt) {
    const double tol = tolerance::verify_claim;
    return side ? reduction_witness_on(s, *side, tol).has_value() : reduction_witness(s, tol).has_value();
}

/// Projects each side onto the support of its reduced state when that support is proper.
inline bool restrict_supports(Builder& b) {
    bool changed = false;
    for (Side side : {Side::A, Side::B}) {
        const linalg::Eigh eig = linalg::eigh_desc(partial_trace(b.current, side));
        const int r = linalg::numerical_rank(eig.values, tolerance::rank);
        if (r < b.current.dims().of(side)) {
            b.apply(projector_onto(side, eig.vectors.leftCols(r)),
                    std::string("restrict ") + to_string(side) + " to the support of its reduced state");
            changed = true;
        }
    }
    if (changed) b.trace.push_back("restrict-support");
    return changed;
}

inline Claim dispatch(Builder& b, int depth, const CertifyOptions& o);

inline Claim rank2(Builder& b, const CertifyOptions&) {
    b.trace.push_back("rank2");
    if (lemma1_check(b.current) && has_reduction_witness(b.current)) {
        b.trace.push_back("rank-deficit");
        return Claim::ReductionViolated;
    }
    restrict_supports(b);
    if (std::min(b.current.dim_a(), b.current.dim_b()) == 2 && npt_beyond_verify_margin(b.current)) {
        b.trace.push_back("2xN-npt");
        return Claim::TwoByN_NPT;
    }
    throw Error(ErrorKind::SynthesisFailed, "rank-2 state did not reduce to an NPT 2xN terminal");
}

/// Tries A-side planes from Schmidt-rank-two range vectors; commits the first NPT projection.
inline std::optional<Matrix> try_schmidt_planes(Builder& b, const CertifyOptions& o, bool& terminal) {
    terminal = false;
    const auto candidates = schmidt_rank2_candidates(range_basis(b.current));
    if (candidates.empty()) return std::nullopt;
    const int n = std::min<int>(o.plane_candidates, static_cast<int>(candidates.size()));
    for (int k = 0; k < n; ++k) {
        const Matrix plane = a_support_plane(candidates[k].vector);
        const LocalOperator p = projector_onto(Side::A, plane);
        if (npt_beyond_verify_margin(apply_local(b.current, p).state)) {
            b.apply(p, "project A onto the local support of a Schmidt-rank-two range vector");
            b.trace.push_back("schmidt2-plane");
            terminal = true;
            return plane;
        }
    }
    return a_support_plane(candidates.front().vector);
}

inline Claim canonical_branch(Builder& b, const Matrix& plane) {
    const CanonicalForm form = canonicalize_sigma3(b.current, plane);
    b.apply(form.params.ilos[0], "filter A to the canonical rank-three form");
    b.apply(form.params.ilos[1], "filter B to the canonical rank-three form");
    b.trace.push_back("canonical-sigma3");
    const ProjectorSearch search = search_projector_a(form.params);
    b.apply(*search.steps.front().op_a, "project A onto span{|0>+a|1>, |2>}");
    b.trace.push_back("projector-a");
    if (!npt_beyond_verify_margin(b.current))
        throw Error(ErrorKind::SynthesisFailed, "projected canonical state lost its negativity");
    return Claim::TwoByN_NPT;
}

inline Claim rank3(Builder& b, int depth, const CertifyOptions& o) {
    b.trace.push_back("rank3");
    if (b.current.dims() != Dims{3, 3})
        throw Error(ErrorKind::PreconditionViolated, "rank-3 pipeline expects a 3x3 state");
    const Equalized eq = equalize_reduction(b.current, Side::B);
    b.apply(eq.filter, "equalize the B marginal");
    b.trace.push_back("equalize-B");
    if (has_reduction_witness(b.current, Side::B)) {
        b.trace.push_back("reduction-B");
        return Claim::ReductionViolated;
    }

    const ProductFinding product = find_product_in_range(b.current, o.search);
    if (product.verdict == ProductVerdict::Ambiguous) b.trace.push_back("warning: ambiguous product search");
    if (product.found) {
        const Matrix complement = linalg::orthonormal_complement(*product.factor_b);
        b.apply(projector_onto(Side::B, complement), "project B off the product factor");
        b.trace.push_back("product-projector");
        return dispatch(b, depth + 1, o);
    }

    bool terminal = false;
    const auto plane = try_schmidt_planes(b, o, terminal);
    if (terminal) return Claim::TwoByN_NPT;
    if (!plane) throw Error(ErrorKind::SynthesisFailed, "no Schmidt-rank-two combination in range");
    try {
        return canonical_branch(b, *plane);
    } catch (const Error& e) {
        throw Error(ErrorKind::SynthesisFailed, std::string("canonical branch: ") + e.what());
    }
}

struct ProductEigenvector {
    Vector a;
    Vector b;
};

/// Product vectors among the eigenvectors (searching inside degenerate eigenspaces).
inline std::vector<ProductEigenvector> product_eigenvectors(const BipartiteState& s, const CertifyOptions& o) {
    const linalg::Eigh eig = linalg::eigh_desc(s.matrix());
    const int r = linalg::numerical_rank(eig.values, tolerance::rank);
    std::vector<ProductEigenvector> out;
    int start = 0;
    while (start < r) {
        int end = start + 1;
        while (end < r && std::abs(eig.values(end) - eig.values(start)) <= 1e-8 * eig.values(0)) ++end;
        std::vector<PureVector> cluster;
        for (int k = start; k < end; ++k) cluster.push_back(PureVector::normalized(s.dims(), eig.vectors.col(k)));
        if (cluster.size() == 1) {
            const SchmidtDecomposition sd = schmidt_decompose(cluster.front());
            if (sd.coefficients.size() < 2 || sd.coefficients(1) <= tolerance::product_found)
                out.push_back({sd.a_basis.col(0), sd.b_basis.col(0)});
        } else if (cluster.size() <= 4) {
            const ProductFinding f = find_product_vector(cluster, s.dims(), o.search);
            if (f.found) {
                out.push_back({*f.factor_a, *f.factor_b});
                if (cluster.size() == 2) {
                    const Matrix span = basis_matrix(cluster);
                    const Vector rest = span * linalg::orthonormal_complement(span.adjoint() * f.vector->amplitudes());
                    const SchmidtDecomposition sd = schmidt_decompose(PureVector::normalized(s.dims(), rest));
                    if (sd.coefficients(1) <= tolerance::product_found)
                        out.push_back({sd.a_basis.col(0), sd.b_basis.col(0)});
                }
            }
        }
        start = end;
    }
    return out;
}

inline Matrix unitary_with_first_columns(const Matrix& cols) {
    Matrix u(cols.rows(), cols.rows());
    u.leftCols(cols.cols()) = cols;
    u.rightCols(cols.rows() - cols.cols()) = linalg::orthonormal_complement(cols);
    return u;
}

/// Rank-four 3x3 states with two product eigenvectors |a b>, |a b'> sharing the A factor.
inline std::optional<Claim> shared_factor_branch(Builder& b, const CertifyOptions& o) {
    const auto products = product_eigenvectors(b.current, o);
    std::optional<std::pair<ProductEigenvector, ProductEigenvector>> pair;
    for (std::size_t i = 0; i < products.size() && !pair; ++i)
        for (std::size_t j = i + 1; j < products.size() && !pair; ++j)
            if (std::abs(products[i].a.dot(products[j].a)) >= 1.0 - 1e-7) pair = {products[i], products[j]};
    if (!pair) return std::nullopt;
    b.trace.push_back("shared-factor");

    // Local unitaries taking a -> |0>, b -> |0>, b' -> |1>.
    Matrix ua(3, 1);
    ua.col(0) = pair->first.a;
    Matrix ub(3, 2);
    ub.col(0) = pair->first.b;
    ub.col(1) = pair->second.b - pair->first.b * pair->first.b.dot(pair->second.b);
    ub.col(1).normalize();
    b.apply(make_operator(Side::A, unitary_with_first_columns(ua).adjoint(), OpKind::Unitary),
            "shared factor: rotate the shared A factor to |0>");
    b.apply(make_operator(Side::B, unitary_with_first_columns(ub).adjoint(), OpKind::Unitary),
            "shared factor: rotate the product B factors to |0>, |1>");

    Matrix off0 = Matrix::Zero(3, 2);
    off0(1, 0) = 1.0;
    off0(2, 1) = 1.0;
    const LocalOperator p12 = projector_onto(Side::A, off0);
    const BipartiteState rho1 = apply_local(b.current, p12).state;
    if (npt_beyond_verify_margin(rho1)) {
        b.apply(p12, "shared factor: project A onto span{|1>, |2>}");
        b.trace.push_back("shared-factor-project-A12");
        return Claim::TwoByN_NPT;
    }

    // rho1 separable of rank two: two product vectors span its range.
    const auto basis1 = range_basis(rho1);
    if (basis1.size() == 2) {
        const ProductFinding f = find_product_vector(basis1, rho1.dims(), o.search);
        if (f.found) {
            const Vector q2 = f.vector->amplitudes();
            Eigen::CompleteOrthogonalDecomposition<Matrix> cod(rho1.matrix());
            const Matrix pinv = cod.pseudoInverse();
            const double w2 = 1.0 / q2.dot(pinv * q2).real();
            const linalg::Eigh rest = linalg::eigh_desc(rho1.matrix() - w2 * q2 * q2.adjoint());
            const SchmidtDecomposition sd3 = schmidt_decompose(PureVector::normalized(rho1.dims(), rest.vectors.col(0)));
            Matrix alphas(2, 2);
            alphas.col(0) = *f.factor_a;
            alphas.col(1) = sd3.a_basis.col(0);
            if (sd3.coefficients(1) <= 1e-6 && linalg::singular_values(alphas).minCoeff() > 1e-8) {
                Matrix g = Matrix::Identity(3, 3);
                g.bottomRightCorner(2, 2) = alphas.inverse();
                b.apply(make_operator(Side::A, g, OpKind::ILO), "shared factor: filter A so the projected products sit on |1>, |2>");
                b.trace.push_back("shared-factor-filter");
            }
        }
    }

    for (double a : projector_a_grid()) {
        const LocalOperator p = projector_a(a);
        if (npt_beyond_verify_margin(apply_local(b.current, p).state)) {
            b.apply(p, "shared factor: project A onto span{|0>+a|1>, |2>}");
            b.trace.push_back("shared-factor-projector-a");
            return Claim::TwoByN_NPT;
        }
    }
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        Matrix plane = Matrix::Zero(3, 2);
        plane(i, 0) = 1.0;
        plane(j, 1) = 1.0;
        const LocalOperator p = projector_onto(Side::A, plane);
        if (npt_beyond_verify_margin(apply_local(b.current, p).state)) {
            b.apply(p, "shared factor: project A onto a coordinate plane");
            b.trace.push_back("shared-factor-coordinate-plane");
            return Claim::TwoByN_NPT;
        }
    }
    throw Error(ErrorKind::SynthesisFailed, "shared-factor structure matched but no projection stayed NPT");
}

inline Claim rank4(Builder& b, int depth, const CertifyOptions& o) {
    b.trace.push_back("rank4");
    const Dims d = b.current.dims();
    if (d == Dims{3, 3}) {
        if (auto claim = shared_factor_branch(b, o)) return *claim;
        if (has_reduction_witness(b.current)) {
            b.trace.push_back("reduction");
            return Claim::ReductionViolated;
        }
        b.trace.push_back("rank-4 open problem");
        return Claim::None;
    }
    const bool product_branch_dims = (d.a == 3 || d.a == 4) && (d.b == 3 || d.b == 4) && std::max(d.a, d.b) == 4;
    if (!product_branch_dims) {
        if (has_reduction_witness(b.current)) {
            b.trace.push_back("reduction");
            return Claim::ReductionViolated;
        }
        b.trace.push_back("rank-4 open problem");
        return Claim::None;
    }
    const Side big = d.b == 4 ? Side::B : Side::A;
    const Equalized eq = equalize_reduction(b.current, big);
    b.apply(eq.filter, std::string("equalize the ") + to_string(big) + " marginal");
    b.trace.push_back(std::string("equalize-") + to_string(big));
    if (has_reduction_witness(b.current, big)) {
        b.trace.push_back(std::string("reduction-") + to_string(big));
        return Claim::ReductionViolated;
    }
    const ProductFinding product = find_product_in_range(b.current, o.search);
    if (product.verdict == ProductVerdict::Ambiguous) b.trace.push_back("warning: ambiguous product search");
    if (product.found) {
        const Vector& factor = big == Side::B ? *product.factor_b : *product.factor_a;
        b.apply(projector_onto(big, linalg::orthonormal_complement(factor)),
                std::string("project ") + to_string(big) + " off the product factor");
        b.trace.push_back("product-projector-4");
        return dispatch(b, depth + 1, o);
    }
    if (has_reduction_witness(b.current)) {
        b.trace.push_back("reduction");
        return Claim::ReductionViolated;
    }
    b.trace.push_back("rank-4 open problem");
    return Claim::None;
}

inline Claim dispatch(Builder& b, int depth, const CertifyOptions& o) {
    if (depth > o.max_depth) throw Error(ErrorKind::SynthesisFailed, "recursion depth exceeded");
    const BipartiteState& s = b.current;
    if (!(min_pt_eig(s, Side::A).value < -o.npt_tol)) {
        b.trace.push_back("PPT");
        return Claim::None;
    }
    if (std::min(s.dim_a(), s.dim_b()) == 2 && npt_beyond_verify_margin(s)) {
        b.trace.push_back("2xN-npt");
        return Claim::TwoByN_NPT;
    }
    if (lemma1_check(s) && has_reduction_witness(s)) {
        b.trace.push_back("rank-deficit");
        return Claim::ReductionViolated;
    }
    if (restrict_supports(b)) return dispatch(b, depth, o);
    switch (rank_of(b.current)) {
    case 2: return rank2(b, o);
    case 3:
        if (b.current.dims() == Dims{3, 3}) return rank3(b, depth, o);
        break;
    case 4: return rank4(b, depth, o);
    default: break;
    }
    if (has_reduction_witness(b.current)) {
        b.trace.push_back("reduction");
        return Claim::ReductionViolated;
    }
    b.trace.push_back("unsupported rank");
    return Claim::None;
}

/// Replays the steps, attaches the terminal witness and self-verifies.
inline Certificate finalize(const BipartiteState& original, Builder& b, Claim claim) {
    Certificate cert;
    cert.steps = std::move(b.steps);
    cert.branch_trace = std::move(b.trace);
    if (claim == Claim::None) return cert;

    BipartiteState terminal = original;
    for (const auto& step : cert.steps) terminal = apply_local(terminal, step.op_a, step.op_b).state;
    if (claim == Claim::TwoByN_NPT) {
        const PtResult pt = min_pt_eig(terminal, Side::A, tolerance::verify_claim);
        if (pt.witness) {
            cert.claim = claim;
            cert.claim_data = *pt.witness;
        }
    } else {
        if (auto w = reduction_witness(terminal, tolerance::verify_claim)) {
            cert.claim = claim;
            cert.claim_data = *w;
        }
    }
    if (cert.claim == Claim::None) {
        cert.branch_trace.push_back("terminal check failed");
        return cert;
    }
    const VerificationReport report = verify(original, cert);
    if (!report.pass) {
        cert.claim = Claim::None;
        cert.claim_data = std::monostate{};
        cert.branch_trace.push_back("self-check failed: " + report.failures.front());
    }
    return cert;
}

}  // namespace detail

/// Dispatcher: PPT, 2xN, rank deficit, support restriction, then the rank-2/3/4 pipelines.
/// Never throws on synthesis failures; they surface as claim None with diagnostics.
inline Certificate certify(const BipartiteState& state, const CertifyOptions& opts = {}) {
    detail::Builder b{state, {}, {}};
    try {
        const Claim claim = detail::dispatch(b, 0, opts);
        return detail::finalize(state, b, claim);
    } catch (const Error& e) {
        Certificate cert;
        cert.steps = std::move(b.steps);
        cert.branch_trace = std::move(b.trace);
        cert.branch_trace.push_back(std::string("failed: ") + e.what());
        return cert;
    }
}

namespace detail {
template <typename Branch>
Certificate run_branch(const BipartiteState& state, Branch&& branch) {
    Builder b{state, {}, {}};
    Claim claim;
    try {
        claim = branch(b);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SynthesisFailed) throw;
        throw Error(ErrorKind::SynthesisFailed, e.what());
    }
    Certificate cert = finalize(state, b, claim);
    if (claim != Claim::None && cert.claim == Claim::None)
        throw Error(ErrorKind::SynthesisFailed, cert.branch_trace.back());
    return cert;
}
}  // namespace detail

inline Certificate certify_rank2(const BipartiteState& state, const CertifyOptions& opts = {}) {
    if (rank_of(state) != 2 || !is_npt(state, opts.npt_tol))
        throw Error(ErrorKind::PreconditionViolated, "certify_rank2 expects a rank-2 NPT state");
    return detail::run_branch(state, [&](detail::Builder& b) { return detail::rank2(b, opts); });
}

inline Certificate certify_rank3(const BipartiteState& state, const CertifyOptions& opts = {}) {
    if (state.dims() != Dims{3, 3} || rank_of(state) != 3 || !is_npt(state, opts.npt_tol))
        throw Error(ErrorKind::PreconditionViolated, "certify_rank3 expects a 3x3 rank-3 NPT state");
    return detail::run_branch(state, [&](detail::Builder& b) { return detail::rank3(b, 0, opts); });
}

inline Certificate certify_rank4(const BipartiteState& state, const CertifyOptions& opts = {}) {
    if (rank_of(state) != 4 || !is_npt(state, opts.npt_tol))
        throw Error(ErrorKind::PreconditionViolated, "certify_rank4 expects a rank-4 NPT state");
    return detail::run_branch(state, [&](detail::Builder& b) { return detail::rank4(b, 0, opts); });
}

/// Runs the canonical-form branch (filters to the canonical form, then the a-projector)
/// on a 3x3 rank-3 state with respect to the A-plane `plane`.
inline Certificate certify_via_canonical_form(const BipartiteState& state, const Matrix& plane) {
    return detail::run_branch(state, [&](detail::Builder& b) {
        b.trace.push_back("rank3");
        return detail::canonical_branch(b, plane);
    });
}

struct TwoQubitProjection {
    BipartiteState state;
    std::vector<CertificateStep> steps;
};

/// Reduces an NPT 2xN state to an NPT 2x2 state with a rank-two projector on the large side.
inline TwoQubitProjection project_to_two_qubit(const BipartiteState& state, std::uint64_t seed = 0x5eed) {
    const Dims d = state.dims();
    if (std::min(d.a, d.b) != 2) throw Error(ErrorKind::PreconditionViolated, "state must be 2xN");
    const PtResult pt = min_pt_eig(state, Side::A);
    if (!pt.witness) throw Error(ErrorKind::PreconditionViolated, "state must be NPT");
    if (d.a == 2 && d.b == 2) {
        TwoQubitProjection out{state, {}};
        out.steps.push_back({std::nullopt, make_operator(Side::B, Matrix::Identity(2, 2), OpKind::Projector),
                             "identity projector"});
        return out;
    }
    const Side big = d.b > 2 ? Side::B : Side::A;
    const int n = d.of(big);
    auto score = [&](const Matrix& frame) {
        const BipartiteState s = apply_local(state, projector_onto(big, frame)).state;
        return min_pt_eig(s, Side::A).value;
    };

    // Witness of the partial transpose on the large side; its support there is <= 2 dimensional.
    const PtResult on_big = min_pt_eig(state, big);
    std::optional<Matrix> best;
    double best_value = 0.0;
    if (on_big.witness) {
        const SchmidtDecomposition sd = schmidt_decompose(on_big.witness->eigenvector);
        Matrix support = (big == Side::B ? sd.b_basis : sd.a_basis).leftCols(2).conjugate();
        support = linalg::orthonormalize(support);
        const double v = score(support);
        if (v < -tolerance::verify_claim) {
            best = support;
            best_value = v;
        }
    }
    if (!best) {
        random::Engine rng = random::engine(seed, 7);
        for (int s = 0; s < 256; ++s) {
            const Matrix frame = linalg::orthonormalize(random::gaussian_matrix(rng, n, 2));
            const double v = score(frame);
            if (v < best_value) {
                best_value = v;
                best = frame;
            }
        }
        std::normal_distribution<double> step(0.0, 0.1);
        for (int it = 0; best && it < 200; ++it) {
            const Matrix trial = linalg::orthonormalize(*best + 0.1 * random::gaussian_matrix(rng, n, 2));
            const double v = score(trial);
            if (v < best_value) {
                best_value = v;
                best = trial;
            }
        }
    }
    if (!best || !(best_value < -tolerance::verify_claim))
        throw Error(ErrorKind::NotFound, "no rank-two projector keeps the state NPT");
    const LocalOperator p = projector_onto(big, *best);
    TwoQubitProjection out{apply_local(state, p).state, {}};
    CertificateStep step;
    (big == Side::A ? step.op_a : step.op_b) = p;
    step.label = "project the large side onto a two-dimensional subspace";
    out.steps.push_back(std::move(step));
    return out;
}

}  // namespace distillcert
