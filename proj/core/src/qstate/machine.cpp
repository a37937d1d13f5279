#include "qrl/qstate/machine.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl::qstate {

Machine::Machine(std::size_t capacity, std::uint64_t seed)
    : heap_(capacity), state_(0), rng_(seed) {}

RegisterRef Machine::allocate(std::size_t n, std::string name) {
    if (heap_.allocated_count() + n > kMaxSimulatedQubits && n <= heap_.free_count()) {
        throw Error(ErrorKind::OutOfQubits,
                    fmt::format("simulation limit: at most {} live qubits",
                                kMaxSimulatedQubits));
    }
    RegisterRef reg = heap_.allocate(n);
    state_.resize(std::max(state_.num_qubits(), heap_.span()));
    if (!reg.empty()) {
        registers_.push_back({std::move(name), reg});
    }
    return reg;
}

bool Machine::is_clean(const RegisterRef &reg) const {
    return std::all_of(reg.qubits.begin(), reg.qubits.end(), [&](std::size_t q) {
        return state_.probability_one(q) <= kTolerance;
    });
}

void Machine::release(const RegisterRef &reg) {
    if (reg.empty()) {
        return;
    }
    if (!is_clean(reg)) {
        throw Error(ErrorKind::QubitNotClean,
                    "register must be in |0> before it is released");
    }
    heap_.release(reg);
    std::erase_if(registers_, [&](const NamedRegister &r) { return r.ref == reg; });
    // Partially released blocks (not produced by allocate) lose their columns.
    for (auto &r : registers_) {
        std::erase_if(r.ref.qubits, [&](std::size_t q) { return !heap_.is_allocated(q); });
    }
    std::erase_if(registers_, [](const NamedRegister &r) { return r.ref.empty(); });
    // Every qubit above the heap span is free and therefore |0>.
    state_.resize(heap_.span());
}

void Machine::require_allocated(std::span<const std::size_t> qubits) const {
    for (std::size_t q : qubits) {
        if (!heap_.is_allocated(q)) {
            throw Error(ErrorKind::InvalidArgument,
                        fmt::format("qubit {} is not allocated", q));
        }
    }
}

void Machine::apply_gate(const gates::Gate &gate, const RegisterRef &targets) {
    if (gate.arity() != targets.size()) {
        throw Error(ErrorKind::ArityMismatch,
                    fmt::format("gate '{}' acts on {} qubits, got {}", gate.name(),
                                gate.arity(), targets.size()));
    }
    apply(gate.matrix(), targets.qubits);
}

void Machine::apply(const Matrix &u, std::span<const std::size_t> targets,
                    std::span<const std::size_t> controls) {
    require_allocated(targets);
    require_allocated(controls);
    if (!u.is_unitary(kTolerance)) {
        throw Error(ErrorKind::NonUnitary, "operation is not unitary");
    }
    state_.apply(u, targets, controls);
}

void Machine::apply_phase(Complex phase, std::span<const std::size_t> controls) {
    require_allocated(controls);
    state_.apply_phase(phase, controls);
}

std::uint64_t Machine::measure(const RegisterRef &targets) {
    require_allocated(targets.qubits);
    return state_.measure(targets.qubits, rng_);
}

void Machine::reset(std::span<const std::size_t> qubits) {
    require_allocated(qubits);
    if (qubits.size() == heap_.allocated_count()) {
        reset_all();
        return;
    }
    state_.reset(qubits, rng_);
}

void Machine::reset_all() { state_ = StateVector(state_.num_qubits()); }

RegisterRef allocate(Machine &m, std::size_t n) { return m.allocate(n); }

void apply_gate(Machine &m, const gates::Gate &gate, const RegisterRef &targets) {
    m.apply_gate(gate, targets);
}

std::uint64_t measure(Machine &m, const RegisterRef &targets) { return m.measure(targets); }

void reset(Machine &m) { m.reset_all(); }

} // namespace qrl::qstate
