#pragma once

#include "qrl/gates/gate.hpp"

namespace qrl::gates {

/// Angles of G = Phi(delta) Rz(alpha) Ry(theta) Rz(beta).
/// delta, alpha, beta lie in (-pi, pi]; theta in [0, pi].
struct EulerAngles {
    double delta = 0.0;
    double alpha = 0.0;
    double theta = 0.0;
    double beta = 0.0;
};

/// Throws ArityMismatch for multi-qubit gates.
EulerAngles zyz_decompose(const Gate &g);

/// Variant for raw 2x2 matrices; throws NonUnitary.
EulerAngles zyz_decompose(const Matrix &u);

Matrix reconstruct(const EulerAngles &angles);

} // namespace qrl::gates
