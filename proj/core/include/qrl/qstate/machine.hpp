#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qrl/gates/gate.hpp"
#include "qrl/qstate/heap.hpp"
#include "qrl/qstate/register.hpp"
#include "qrl/qstate/state_vector.hpp"

namespace qrl::qstate {

/// Live allocation as the user declared it; dump columns follow this list.
struct NamedRegister {
    std::string name;
    RegisterRef ref;
};

/// Hard ceiling on simultaneously allocated qubits (2^24 amplitudes, 256 MiB).
inline constexpr std::size_t kMaxSimulatedQubits = 24;

/// The quantum half of the QRAM machine: heap, state vector and the
/// primitive operations the classical controller may issue.
class Machine {
  public:
    explicit Machine(std::size_t capacity = 32, std::uint64_t seed = 0);

    RegisterRef allocate(std::size_t n, std::string name = {});
    /// Frees a register. Throws QubitNotClean unless every qubit is |0>.
    void release(const RegisterRef &reg);

    void apply_gate(const gates::Gate &gate, const RegisterRef &targets);
    void apply(const Matrix &u, std::span<const std::size_t> targets,
               std::span<const std::size_t> controls = {});
    void apply_phase(Complex phase, std::span<const std::size_t> controls = {});

    /// Throws EmptyRegister.
    std::uint64_t measure(const RegisterRef &targets);
    /// Returns the listed qubits to |0>; allocations are kept.
    void reset(std::span<const std::size_t> qubits);
    void reset_all();

    [[nodiscard]] bool is_clean(const RegisterRef &reg) const;

    [[nodiscard]] const QuantumHeap &heap() const noexcept { return heap_; }
    [[nodiscard]] const StateVector &state() const noexcept { return state_; }
    [[nodiscard]] const std::vector<NamedRegister> &registers() const noexcept { return registers_; }
    SeededRng &rng() noexcept { return rng_; }

    /// Throws InvalidArgument if any qubit is not allocated.
    void require_allocated(std::span<const std::size_t> qubits) const;

  private:
    QuantumHeap heap_;
    StateVector state_;
    std::vector<NamedRegister> registers_;
    SeededRng rng_;
};

// Free-function forms of the primitive operations.
RegisterRef allocate(Machine &m, std::size_t n);
void apply_gate(Machine &m, const gates::Gate &gate, const RegisterRef &targets);
std::uint64_t measure(Machine &m, const RegisterRef &targets);
void reset(Machine &m);

} // namespace qrl::qstate
