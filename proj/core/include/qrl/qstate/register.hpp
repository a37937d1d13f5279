#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qrl::qstate {

/// Ordered list of distinct heap qubit indices. Element j carries weight 2^j
/// in the register's integer value, so `q[3]` of a 4-qubit register is its
/// most significant bit.
struct RegisterRef {
    std::vector<std::size_t> qubits;

    [[nodiscard]] std::size_t size() const noexcept { return qubits.size(); }
    [[nodiscard]] bool empty() const noexcept { return qubits.empty(); }

    /// Single qubit `index`; throws InvalidArgument when out of range.
    [[nodiscard]] RegisterRef at(std::size_t index) const;
    /// `length` qubits starting at `offset`.
    [[nodiscard]] RegisterRef slice(std::size_t offset, std::size_t length) const;
    /// Concatenation; throws OverlapViolation if the registers share a qubit.
    [[nodiscard]] RegisterRef concat(const RegisterRef &other) const;

    [[nodiscard]] bool overlaps(const RegisterRef &other) const;
    [[nodiscard]] bool distinct() const;

    /// Integer value of this register inside global basis index `basis`.
    [[nodiscard]] std::uint64_t value_in(std::uint64_t basis) const;

    friend bool operator==(const RegisterRef &, const RegisterRef &) = default;
};

} // namespace qrl::qstate
