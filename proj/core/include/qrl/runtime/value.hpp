#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "qrl/qstate/register.hpp"

namespace qrl::runtime {

using Int = boost::multiprecision::cpp_int;

struct ChannelRef {
    std::size_t id = 0;
    friend bool operator==(const ChannelRef &, const ChannelRef &) = default;
};

/// One end of a two-ended channel; values sent on end k arrive at end 1-k.
struct ChannelEndRef {
    std::size_t channel = 0;
    int end = 0;
    friend bool operator==(const ChannelEndRef &, const ChannelEndRef &) = default;
};

using Value = std::variant<std::monostate, Int, double, bool, std::string, qstate::RegisterRef,
                           ChannelRef, ChannelEndRef>;

[[nodiscard]] inline bool is_register(const Value &v) {
    return std::holds_alternative<qstate::RegisterRef>(v);
}

/// Text used by `print`: integers in decimal, reals with 6 significant digits.
std::string format_value(const Value &v);

/// Short type name for messages.
std::string_view value_type_name(const Value &v);

/// Integer view of a numeric value. Reals truncate toward zero.
/// Throws TypeMismatch for non-numeric values.
Int to_int(const Value &v);
std::int64_t to_int64(const Value &v);
double to_real(const Value &v);
bool to_bool(const Value &v);

} // namespace qrl::runtime
