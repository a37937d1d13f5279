#include "qrl/gates/zyz.hpp"

#include <cmath>
#include <numbers>

#include "qrl/error.hpp"

namespace qrl::gates {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerate = 1e-12;

/// Wraps `angle` into (-pi, pi]; returns the number of 2*pi shifts applied.
long wrap(double &angle) {
    const long turns = static_cast<long>(std::ceil((angle - kPi) / (2 * kPi)));
    angle -= 2 * kPi * static_cast<double>(turns);
    if (angle <= -kPi) {
        angle += 2 * kPi;
        return turns - 1;
    }
    return turns;
}

} // namespace

EulerAngles zyz_decompose(const Gate &g) {
    if (g.arity() != 1) {
        throw Error(ErrorKind::ArityMismatch, "ZYZ decomposition needs a single-qubit gate");
    }
    return zyz_decompose(g.matrix());
}

EulerAngles zyz_decompose(const Matrix &u) {
    if (u.dim() != 2) {
        throw Error(ErrorKind::ArityMismatch, "ZYZ decomposition needs a 2x2 matrix");
    }
    if (!u.is_unitary(kTolerance)) {
        throw Error(ErrorKind::NonUnitary, "ZYZ decomposition of a non-unitary matrix");
    }
    EulerAngles out;
    const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    out.delta = std::arg(det) / 2;

    // Special-unitary part W = [[a, b], [-conj(b), conj(a)]] with
    // a = e^{i(alpha+beta)/2} cos(theta/2) and b = e^{i(alpha-beta)/2} sin(theta/2).
    const Complex unphase = std::polar(1.0, -out.delta);
    const Complex a = unphase * u(0, 0);
    const Complex b = unphase * u(0, 1);
    out.theta = 2 * std::atan2(std::abs(b), std::abs(a));

    const double sum_half = std::abs(a) > kDegenerate ? std::arg(a) : 0.0;
    const double diff_half = std::abs(b) > kDegenerate ? std::arg(b) : 0.0;
    out.alpha = sum_half + diff_half;
    out.beta = sum_half - diff_half;

    // Rz(xi + 2pi) = -Rz(xi): every odd wrap of alpha or beta flips the sign,
    // which the global phase absorbs.
    const long flips = wrap(out.alpha) + wrap(out.beta);
    if (flips % 2 != 0) {
        out.delta += kPi;
    }
    wrap(out.delta);
    return out;
}

Matrix reconstruct(const EulerAngles &angles) {
    return global_phase(angles.delta) * rot_z(angles.alpha) * rot_y(angles.theta) *
           rot_z(angles.beta);
}

} // namespace qrl::gates
