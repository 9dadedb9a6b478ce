#pragma once

// JSON state and certificate files. Matrices are arrays of rows of [re, im] pairs,
// index i*dim_b + j for |i>_A |j>_B.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "certificate.hpp"
#include "statecore.hpp"

namespace distillcert::io {

using nlohmann::json;

inline constexpr const char* tool_version = "distillcert 0.1.0";
inline constexpr double symmetrize_warning = 1e-10;

inline json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Complex entry_from_json(const json& e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw Error(ErrorKind::ParseError, "matrix entries must be [re, im] pairs");
    return {e[0].get<double>(), e[1].get<double>()};
}

inline Matrix matrix_from_json(const json& rows) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
        throw Error(ErrorKind::ParseError, "matrix must be a nonempty array of rows");
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows[0].size());
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
            throw Error(ErrorKind::ParseError, "matrix rows have unequal lengths");
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = entry_from_json(row[static_cast<std::size_t>(j)]);
    }
    return m;
}

inline json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

inline Vector vector_from_json(const json& arr) {
    if (!arr.is_array()) throw Error(ErrorKind::ParseError, "vector must be an array");
    Vector v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = entry_from_json(arr[i]);
    return v;
}

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
    out << j.dump(1) << '\n';
}

inline json state_to_json(const BipartiteState& s, const std::map<std::string, std::string>& metadata = {}) {
    json j{{"dim_a", s.dim_a()}, {"dim_b", s.dim_b()}, {"matrix", matrix_to_json(s.matrix())}};
    if (!metadata.empty()) j["metadata"] = metadata;
    return j;
}

/// Symmetrizes the stored matrix; a correction above 1e-10 is reported in `warnings`.
inline BipartiteState state_from_json(const json& j, std::vector<std::string>* warnings = nullptr) {
    Dims dims;
    Matrix m;
    try {
        dims = Dims{j.at("dim_a").get<int>(), j.at("dim_b").get<int>()};
        m = matrix_from_json(j.at("matrix"));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    if (m.rows() != m.cols() || m.rows() != static_cast<Eigen::Index>(dims.a) * dims.b)
        throw Error(ErrorKind::InvariantViolation, "dims: matrix is not square of size dim_a*dim_b");
    const double correction = linalg::max_abs(m - linalg::hermitian_part(m));
    if (correction > symmetrize_warning && warnings) {
        std::ostringstream msg;
        msg << "symmetrized input matrix (max correction " << correction << ")";
        warnings->push_back(msg.str());
    }
    return BipartiteState(dims, linalg::hermitian_part(m));
}

inline BipartiteState load_state(const std::string& path, std::vector<std::string>* warnings = nullptr) {
    return state_from_json(read_json(path), warnings);
}

inline void save_state(const std::string& path, const BipartiteState& s,
                       const std::map<std::string, std::string>& metadata = {}) {
    write_json(path, state_to_json(s, metadata));
}

inline OpKind op_kind_from_string(const std::string& s) {
    if (s == "ILO") return OpKind::ILO;
    if (s == "Projector") return OpKind::Projector;
    if (s == "Unitary") return OpKind::Unitary;
    if (s == "General") return OpKind::General;
    throw Error(ErrorKind::ParseError, "unknown operator kind " + s);
}

inline Side side_from_string(const std::string& s) {
    if (s == "A") return Side::A;
    if (s == "B") return Side::B;
    throw Error(ErrorKind::ParseError, "unknown side " + s);
}

inline Claim claim_from_string(const std::string& s) {
    if (s == "TwoByN_NPT") return Claim::TwoByN_NPT;
    if (s == "ReductionViolated") return Claim::ReductionViolated;
    if (s == "None") return Claim::None;
    throw Error(ErrorKind::ParseError, "unknown claim " + s);
}

inline json operator_to_json(const LocalOperator& op, const std::string& label) {
    return {{"side", to_string(op.side)}, {"kind", to_string(op.kind)}, {"matrix", matrix_to_json(op.matrix)},
            {"label", label}};
}

/// Steps acting on both sides are written as two consecutive one-sided entries.
inline json certificate_to_json(const Certificate& c) {
    json steps = json::array();
    for (const auto& step : c.steps) {
        if (step.op_a) steps.push_back(operator_to_json(*step.op_a, step.label));
        if (step.op_b) steps.push_back(operator_to_json(*step.op_b, step.label));
    }
    json data{{"kind", "none"}};
    if (const auto* w = std::get_if<NptWitness>(&c.claim_data)) {
        data = {{"kind", "npt"}, {"side", to_string(w->side)}, {"value", w->eigenvalue},
                {"dim_a", w->eigenvector.dims().a}, {"dim_b", w->eigenvector.dims().b},
                {"vector", vector_to_json(w->eigenvector.amplitudes())}};
    } else if (const auto* r = std::get_if<ReductionWitness>(&c.claim_data)) {
        data = {{"kind", "reduction"}, {"side", to_string(r->side)}, {"value", r->value},
                {"dim_a", r->vector.dims().a}, {"dim_b", r->vector.dims().b},
                {"vector", vector_to_json(r->vector.amplitudes())}};
    }
    return {{"tool_version", tool_version}, {"claim", to_string(c.claim)}, {"claim_data", data},
            {"steps", steps}, {"branch_trace", c.branch_trace}};
}

/// Operators are loaded without validation so that verify() can report broken invariants.
inline Certificate certificate_from_json(const json& j) {
    try {
        Certificate c;
        c.claim = claim_from_string(j.at("claim").get<std::string>());
        for (const auto& e : j.at("steps")) {
            LocalOperator op{side_from_string(e.at("side").get<std::string>()), matrix_from_json(e.at("matrix")),
                             op_kind_from_string(e.at("kind").get<std::string>())};
            CertificateStep step;
            (op.side == Side::A ? step.op_a : step.op_b) = std::move(op);
            step.label = e.value("label", "");
            c.steps.push_back(std::move(step));
        }
        if (j.contains("branch_trace")) c.branch_trace = j.at("branch_trace").get<std::vector<std::string>>();
        const json& data = j.at("claim_data");
        const std::string kind = data.at("kind").get<std::string>();
        if (kind != "none") {
            const Dims dims{data.at("dim_a").get<int>(), data.at("dim_b").get<int>()};
            const Vector v = vector_from_json(data.at("vector"));
            if (v.size() != dims.total()) throw Error(ErrorKind::ParseError, "witness vector length mismatch");
            const PureVector pv = PureVector::normalized(dims, v);
            const Side side = side_from_string(data.at("side").get<std::string>());
            const double value = data.at("value").get<double>();
            if (kind == "npt")
                c.claim_data = NptWitness{side, value, pv};
            else if (kind == "reduction")
                c.claim_data = ReductionWitness{side, pv, value};
            else
                throw Error(ErrorKind::ParseError, "unknown claim_data kind " + kind);
        }
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

inline Certificate load_certificate(const std::string& path) { return certificate_from_json(read_json(path)); }

inline void save_certificate(const std::string& path, const Certificate& c) {
    write_json(path, certificate_to_json(c));
}

}  // namespace distillcert::io
