#pragma once

// Canonical rank-three form reached by local filtering:
//   |p0> = |00> + |2>|x>
//   |p1> = |11> + |2>|y>
//   |p2> = (|0> + |1>)|2> + |2>(alpha|x> + beta|y>)
// and the (unnormalized) state sum_i |p_i><p_i|.

#include <vector>

#include "statecore.hpp"

namespace distillcert {

struct Sigma3Params {
    Vector x = Vector::Zero(3);
    Vector y = Vector::Zero(3);
    Complex alpha = 0.0;
    Complex beta = 0.0;
    /// Filters mapping the canonicalized input onto the canonical form (A first, then B).
    std::vector<LocalOperator> ilos;
};

/// Columns are the three unnormalized canonical vectors.
inline Matrix sigma3_vectors(const Sigma3Params& p) {
    if (p.x.size() != 3 || p.y.size() != 3) throw Error(ErrorKind::BadParams, "x and y must have length 3");
    Matrix w = Matrix::Zero(9, 3);
    auto at = [](int a, int b) { return a * 3 + b; };
    w(at(0, 0), 0) = 1.0;
    w(at(1, 1), 1) = 1.0;
    w(at(0, 2), 2) = 1.0;
    w(at(1, 2), 2) = 1.0;
    const Vector mix = p.alpha * p.x + p.beta * p.y;
    for (int j = 0; j < 3; ++j) {
        w(at(2, j), 0) = p.x(j);
        w(at(2, j), 1) = p.y(j);
        w(at(2, j), 2) = mix(j);
    }
    return w;
}

inline Matrix sigma3_matrix(const Sigma3Params& p) {
    const Matrix w = sigma3_vectors(p);
    return w * w.adjoint();
}

}  // namespace distillcert
