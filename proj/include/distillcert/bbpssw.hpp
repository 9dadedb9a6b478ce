#pragma once

// Fidelity recurrence of the two-copy BBPSSW purification step on Werner-form pairs.

#include <vector>

#include "error.hpp"

namespace distillcert {

inline double bbpssw_step(double f) {
    const double g = 1.0 - f;
    return (f * f + g * g / 9.0) / (f * f + 2.0 * f * g / 3.0 + 5.0 * g * g / 9.0);
}

/// Trajectory F_0 = fidelity, F_1, ..., F_iterations.
inline std::vector<double> bbpssw_recurrence(double fidelity, int iterations) {
    if (!(fidelity > 0.25 && fidelity <= 1.0))
        throw Error(ErrorKind::DomainError, "fidelity must lie in (1/4, 1]");
    if (iterations < 0) throw Error(ErrorKind::DomainError, "iterations must be nonnegative");
    std::vector<double> out{fidelity};
    out.reserve(static_cast<std::size_t>(iterations) + 1);
    for (int k = 0; k < iterations; ++k) out.push_back(bbpssw_step(out.back()));
    return out;
}

}  // namespace distillcert
