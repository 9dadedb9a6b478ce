#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace distillcert {

enum class ErrorKind {
    DimensionMismatch,
    NullOutcome,
    InvalidOperator,
    InvariantViolation,
    BadDims,
    BadRank,
    BadParams,
    DegenerateParams,
    UnsupportedDims,
    RankDeficientReduced,
    AllRootsRankOne,
    ProductInRange,
    PreconditionViolated,
    NoParameterFound,
    SynthesisFailed,
    NotFound,
    DomainError,
    ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NullOutcome: return "NullOutcome";
    case ErrorKind::InvalidOperator: return "InvalidOperator";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::BadDims: return "BadDims";
    case ErrorKind::BadRank: return "BadRank";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::DegenerateParams: return "DegenerateParams";
    case ErrorKind::UnsupportedDims: return "UnsupportedDims";
    case ErrorKind::RankDeficientReduced: return "RankDeficientReduced";
    case ErrorKind::AllRootsRankOne: return "AllRootsRankOne";
    case ErrorKind::ProductInRange: return "ProductInRange";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NoParameterFound: return "NoParameterFound";
    case ErrorKind::SynthesisFailed: return "SynthesisFailed";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace distillcert
