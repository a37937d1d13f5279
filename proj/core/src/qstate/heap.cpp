#include "qrl/qstate/heap.hpp"

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl::qstate {

QuantumHeap::QuantumHeap(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw Error(ErrorKind::InvalidArgument, "heap capacity must be at least 1");
    }
    for (std::size_t i = 0; i < capacity; ++i) {
        free_.insert(i);
    }
}

RegisterRef QuantumHeap::allocate(std::size_t n) {
    if (n > free_.size()) {
        throw Error(ErrorKind::OutOfQubits,
                    fmt::format("cannot allocate {} qubits: {} / {} free", n,
                                free_.size(), capacity_));
    }
    RegisterRef reg;
    reg.qubits.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = free_.begin();
        reg.qubits.push_back(*it);
        allocated_.insert(*it);
        free_.erase(it);
    }
    return reg;
}

void QuantumHeap::release(const RegisterRef &reg) {
    for (std::size_t q : reg.qubits) {
        if (!allocated_.contains(q)) {
            throw Error(ErrorKind::InvalidArgument,
                        fmt::format("qubit {} is not allocated", q));
        }
    }
    for (std::size_t q : reg.qubits) {
        allocated_.erase(q);
        free_.insert(q);
    }
}

std::size_t QuantumHeap::span() const {
    return allocated_.empty() ? 0 : *allocated_.rbegin() + 1;
}

} // namespace qrl::qstate
