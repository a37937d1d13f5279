#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qrl/linalg.hpp"

namespace qrl::qstate {

using Amplitude = Complex;

/// Platform-independent seeded generator: mt19937_64 output is fixed by the
/// standard, and the conversion to [0, 1) below does not depend on the
/// library's distribution implementation.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed = 0) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t next() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

/// Dense amplitudes over `num_qubits` qubits; qubit q is bit q of the index.
class StateVector {
  public:
    explicit StateVector(std::size_t num_qubits = 0);

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] const Amplitude &operator[](std::size_t i) const { return amps_[i]; }
    Amplitude &operator[](std::size_t i) { return amps_[i]; }

    /// Grows with new qubits in |0>, or drops top qubits that are all |0>.
    /// Throws QubitNotClean if a dropped qubit has weight on |1>.
    void resize(std::size_t num_qubits);

    /// Applies `u` to `targets` (targets[0] is the matrix's most significant
    /// slot) on the subspace where every control qubit is |1>.
    void apply(const Matrix &u, std::span<const std::size_t> targets,
               std::span<const std::size_t> controls = {});

    /// Multiplies the subspace where all `controls` are |1> by `phase`.
    void apply_phase(Complex phase, std::span<const std::size_t> controls = {});

    /// Probability of each outcome of measuring `qubits` (value weights 2^j).
    [[nodiscard]] std::vector<double> outcome_probabilities(std::span<const std::size_t> qubits) const;

    /// Born-rule measurement; collapses and renormalises. Throws EmptyRegister.
    std::uint64_t measure(std::span<const std::size_t> qubits, SeededRng &rng);

    /// Projects `qubits` onto `outcome` and renormalises. Throws
    /// InvalidArgument when the outcome has zero probability.
    void collapse(std::span<const std::size_t> qubits, std::uint64_t outcome);

    [[nodiscard]] double probability_one(std::size_t qubit) const;
    [[nodiscard]] double norm_squared() const;

    /// Forces `qubits` to |0...0> while keeping the rest of the state: the
    /// state is measured and each qubit found in |1> is flipped back.
    void reset(std::span<const std::size_t> qubits, SeededRng &rng);

    /// Reduced density matrix of `qubits` (value weights 2^j).
    [[nodiscard]] Matrix reduced_density(std::span<const std::size_t> qubits) const;

  private:
    std::size_t num_qubits_ = 0;
    std::vector<Amplitude> amps_;
};

} // namespace qrl::qstate
