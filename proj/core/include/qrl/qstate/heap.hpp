#pragma once

#include <cstddef>
#include <set>

#include "qrl/qstate/register.hpp"

namespace qrl::qstate {

/// Allocation map of the simulated machine. Capacity is a ceiling, not an
/// eager allocation: the state vector only spans allocated qubits.
class QuantumHeap {
  public:
    explicit QuantumHeap(std::size_t capacity = 32);

    /// Lowest `n` free indices. Throws OutOfQubits.
    RegisterRef allocate(std::size_t n);
    /// Returns qubits to the free list; they must currently be allocated.
    void release(const RegisterRef &reg);

    [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }
    [[nodiscard]] std::size_t allocated_count() const noexcept { return allocated_.size(); }
    [[nodiscard]] std::size_t free_count() const noexcept { return free_.size(); }
    [[nodiscard]] const std::set<std::size_t> &allocated() const noexcept { return allocated_; }
    [[nodiscard]] const std::set<std::size_t> &free() const noexcept { return free_; }
    [[nodiscard]] bool is_allocated(std::size_t qubit) const { return allocated_.contains(qubit); }
    /// One past the highest allocated index (0 when nothing is allocated).
    [[nodiscard]] std::size_t span() const;

  private:
    std::size_t capacity_;
    std::set<std::size_t> allocated_;
    std::set<std::size_t> free_;
};

} // namespace qrl::qstate
