#pragma once

// Independent reference computations used to freeze expected values.
// Deliberately naive: explicit index loops, no shared code with the library.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;

inline M partial_trace_loop(const M& rho, int da, int db, bool keep_a) {
    M out = M::Zero(keep_a ? da : db, keep_a ? da : db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j)
            for (int k = 0; k < da; ++k)
                for (int l = 0; l < db; ++l) {
                    const C v = rho(i * db + j, k * db + l);
                    if (keep_a && j == l) out(i, k) += v;
                    if (!keep_a && i == k) out(j, l) += v;
                }
    return out;
}

inline M partial_transpose_loop(const M& rho, int da, int db, bool on_a) {
    M out(rho.rows(), rho.cols());
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j)
            for (int k = 0; k < da; ++k)
                for (int l = 0; l < db; ++l) {
                    if (on_a)
                        out(k * db + j, i * db + l) = rho(i * db + j, k * db + l);
                    else
                        out(i * db + l, k * db + j) = rho(i * db + j, k * db + l);
                }
    return out;
}

/// Werner a I + b F: partial transpose is a I + b N |Phi+><Phi+|, normalized by a N^2 + b N.
inline std::vector<double> werner_pt_spectrum(int n, double a, double b) {
    const double tr = a * n * n + b * n;
    std::vector<double> s(n * n - 1, a / tr);
    s.push_back((a + b * n) / tr);
    return s;
}

inline double bbpssw(double f) {
    const double num = f * f + (1 - f) * (1 - f) / 9;
    const double den = f * f + 2 * f * (1 - f) / 3 + 5 * (1 - f) * (1 - f) / 9;
    return num / den;
}

/// Singular values by eigen-decomposing M M^dagger (not via SVD).
inline Eigen::VectorXd singular_values_via_gram(const M& m) {
    Eigen::SelfAdjointEigenSolver<M> es(m * m.adjoint());
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(ev.data(), ev.data() + ev.size(), std::greater<double>());
    return ev;
}

}  // namespace oracle
