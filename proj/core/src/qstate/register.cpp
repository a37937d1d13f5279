#include "qrl/qstate/register.hpp"

#include <algorithm>
#include <unordered_set>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl::qstate {

RegisterRef RegisterRef::at(std::size_t index) const {
    if (index >= qubits.size()) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("qubit index {} out of range for register of {}",
                                index, qubits.size()));
    }
    return RegisterRef{{qubits[index]}};
}

RegisterRef RegisterRef::slice(std::size_t offset, std::size_t length) const {
    if (offset > qubits.size() || length > qubits.size() - offset) {
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("slice [{}::{}] out of range for register of {}",
                                offset, length, qubits.size()));
    }
    const auto first = qubits.begin() + static_cast<long>(offset);
    return RegisterRef{{first, first + static_cast<long>(length)}};
}

RegisterRef RegisterRef::concat(const RegisterRef &other) const {
    if (overlaps(other)) {
        throw Error(ErrorKind::OverlapViolation, "concatenated registers share a qubit");
    }
    RegisterRef out = *this;
    out.qubits.insert(out.qubits.end(), other.qubits.begin(), other.qubits.end());
    return out;
}

bool RegisterRef::overlaps(const RegisterRef &other) const {
    return std::any_of(qubits.begin(), qubits.end(), [&](std::size_t q) {
        return std::find(other.qubits.begin(), other.qubits.end(), q) != other.qubits.end();
    });
}

bool RegisterRef::distinct() const {
    std::unordered_set<std::size_t> seen;
    return std::all_of(qubits.begin(), qubits.end(),
                       [&](std::size_t q) { return seen.insert(q).second; });
}

std::uint64_t RegisterRef::value_in(std::uint64_t basis) const {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        v |= ((basis >> qubits[j]) & 1U) << j;
    }
    return v;
}

} // namespace qrl::qstate
