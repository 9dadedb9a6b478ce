#pragma once

// Independent re-execution of a certificate. Only statecore and criteria are used
// here; nothing from the synthesis side (range search, canonical forms) is reachable.

#include <cmath>
#include <string>

#include "certificate.hpp"
#include "criteria.hpp"
#include "statecore.hpp"

namespace distillcert {

namespace tolerance {
inline constexpr double verify_claim = 1e-8;
inline constexpr double witness_match = 1e-8;
}  // namespace tolerance

inline VerificationReport verify(const BipartiteState& original, const Certificate& cert) {
    VerificationReport report;
    report.cumulative_probability = 1.0;
    auto fail = [&report](std::string why) { report.failures.push_back(std::move(why)); };

    std::optional<BipartiteState> state = original;
    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
        const CertificateStep& step = cert.steps[i];
        const std::string where = "step " + std::to_string(i) + " (" + step.label + ")";
        bool ok = true;
        for (const auto* op : {&step.op_a, &step.op_b}) {
            if (!*op) continue;
            if (auto why = (*op)->violation()) {
                fail(where + ": " + *why);
                ok = false;
            }
        }
        if (!ok) break;
        try {
            const Outcome out = apply_local(*state, step.op_a, step.op_b);
            report.cumulative_probability *= out.probability;
            state = out.state;
        } catch (const Error& e) {
            fail(where + ": " + e.what());
            ok = false;
        }
        if (!ok) break;
    }
    if (!report.failures.empty()) return report;

    const BipartiteState& terminal = *state;
    report.terminal_dims = terminal.dims();
    report.terminal_min_pt_eig = min_pt_eig(terminal, Side::A).value;
    if (!(report.cumulative_probability > 0.0 && report.cumulative_probability <= 1.0 + 1e-12))
        fail("cumulative probability outside (0,1]");

    const double tol = tolerance::verify_claim;
    switch (cert.claim) {
    case Claim::None:
        fail("certificate makes no claim");
        break;
    case Claim::TwoByN_NPT: {
        if (std::min(terminal.dim_a(), terminal.dim_b()) != 2) fail("terminal state is not 2xN");
        if (!(report.terminal_min_pt_eig < -tol)) fail("terminal state is not NPT");
        const auto* w = std::get_if<NptWitness>(&cert.claim_data);
        if (!w) {
            fail("claim data is not an NPT witness");
        } else if (w->eigenvector.dims() != terminal.dims()) {
            fail("NPT witness dimensions differ from the terminal state");
        } else {
            const double v = evaluate_npt_witness(terminal, w->side, w->eigenvector);
            if (!(v < -tol)) fail("NPT witness does not evaluate negative");
            if (std::abs(v - w->eigenvalue) > tolerance::witness_match) fail("NPT witness value mismatch");
        }
        break;
    }
    case Claim::ReductionViolated: {
        const auto* w = std::get_if<ReductionWitness>(&cert.claim_data);
        if (!w) {
            fail("claim data is not a reduction witness");
        } else if (w->vector.dims() != terminal.dims()) {
            fail("reduction witness dimensions differ from the terminal state");
        } else {
            const double v = evaluate_reduction_witness(terminal, w->side, w->vector);
            if (!(v < -tol)) fail("reduction witness does not evaluate negative");
            if (std::abs(v - w->value) > tolerance::witness_match) fail("reduction witness value mismatch");
        }
        break;
    }
    }
    report.pass = report.failures.empty();
    return report;
}

}  // namespace distillcert
