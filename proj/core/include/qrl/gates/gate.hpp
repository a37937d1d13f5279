#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrl/linalg.hpp"

namespace qrl::gates {

/// An immutable named unitary acting on `arity` qubits. The first target slot
/// is the leftmost tensor factor, i.e. the most significant bit of the row
/// index; this matches the printed CNOT matrix where slot 0 is the control.
class Gate {
  public:
    /// Throws NonUnitary if the matrix is not unitary within kTolerance and
    /// InvalidArgument if its dimension is not a power of two.
    Gate(std::string name, Matrix matrix);

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] std::size_t arity() const noexcept { return arity_; }
    [[nodiscard]] const Matrix &matrix() const noexcept { return matrix_; }

    friend bool operator==(const Gate &a, const Gate &b) {
        return a.matrix_ == b.matrix_;
    }

  private:
    std::string name_;
    std::size_t arity_ = 0;
    Matrix matrix_;
};

/// Looks up a gate from the standard table. Parametric gates (Phase, CPhase,
/// RotX, RotY, RotZ) take their angle in radians from `params`.
/// Throws UnknownGate or MissingParameter.
Gate builtin(std::string_view name, std::span<const double> params = {});

/// Names accepted by builtin(), canonical spelling only.
std::span<const std::string_view> builtin_names();

/// True for names builtin() requires exactly one parameter for.
bool is_parametric(std::string_view name);

Gate adjoint(const Gate &g);

/// P1 (x) g + P0 (x) I with the control in slot 0.
Gate controlled(const Gate &g);

/// Applies `g` to the last slot iff all `n_controls` leading slots are 1.
Gate multi_controlled(const Gate &g, std::size_t n_controls);

/// Principal square root V with V*V = g for a single-qubit gate.
Gate square_root(const Gate &g);

// Literal matrices of the elementary rotations.
Matrix global_phase(double delta); // diag(e^{i delta}, e^{i delta})
Matrix rot_x(double xi);
Matrix rot_y(double xi);
Matrix rot_z(double xi);
Matrix phase_shift(double phi); // diag(1, e^{i phi})

} // namespace qrl::gates
