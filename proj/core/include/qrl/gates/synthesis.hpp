#pragma once

#include <cstddef>
#include <vector>

#include "qrl/gates/gate.hpp"

namespace qrl::gates {

struct GateStep {
    Gate gate;
    std::vector<std::size_t> slots;
};

/// A circuit over `width` slots; steps are listed in application order.
struct GateSequence {
    std::size_t width = 0;
    std::vector<GateStep> steps;

    /// Dense matrix of the whole sequence (later steps multiply on the left).
    [[nodiscard]] Matrix compose() const;
    [[nodiscard]] std::size_t cnot_count() const;
};

/// Upper bound constant C of the synthesis: step count <= C * n^2 where n is
/// the number of qubits the gate acts on (controls + 1). Verified by tests.
inline constexpr std::size_t kSynthesisConstant = 120;

/// Ancilla-free realisation of multi_controlled(g, n_controls) using CNOT and
/// single-qubit gates only. Slots 0..n_controls-1 are controls and slot
/// n_controls is the target. Throws NonUnitary, ArityMismatch.
GateSequence synthesize_multi_controlled(const Gate &g, std::size_t n_controls);

/// Quantum Fourier transform circuit on `n` slots. Slot i carries weight 2^i
/// of the register value; the result is the DFT with omega = e^{2 pi i / 2^n}.
GateSequence qft_sequence(std::size_t n);

/// Matrix of a GateSequence when slot i is the bit of weight 2^i; used to
/// compare register-level circuits with value-indexed matrices such as the DFT.
Matrix compose_little_endian(const GateSequence &seq);

} // namespace qrl::gates
