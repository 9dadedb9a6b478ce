#pragma once

#include <string>
#include <variant>
#include <vector>

#include "criteria.hpp"

namespace distillcert {

enum class Claim { TwoByN_NPT, ReductionViolated, None };

inline const char* to_string(Claim claim) {
    switch (claim) {
    case Claim::TwoByN_NPT: return "TwoByN_NPT";
    case Claim::ReductionViolated: return "ReductionViolated";
    case Claim::None: return "None";
    }
    return "None";
}

struct CertificateStep {
    std::optional<LocalOperator> op_a;
    std::optional<LocalOperator> op_b;
    std::string label;
};

using ClaimData = std::variant<std::monostate, NptWitness, ReductionWitness>;

/// Ordered local operations plus a terminal claim about the resulting state.
struct Certificate {
    std::vector<CertificateStep> steps;
    Claim claim = Claim::None;
    ClaimData claim_data;
    std::vector<std::string> branch_trace;
};

struct VerificationReport {
    bool pass = false;
    Dims terminal_dims;
    double terminal_min_pt_eig = 0.0;
    double cumulative_probability = 0.0;
    std::vector<std::string> failures;
};

}  // namespace distillcert
