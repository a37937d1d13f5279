#include "qrl/runtime/value.hpp"

#include <cmath>

#include <fmt/format.h>

#include "qrl/error.hpp"

namespace qrl::runtime {

std::string format_value(const Value &v) {
    struct Visitor {
        std::string operator()(std::monostate) const { return "<none>"; }
        std::string operator()(const Int &i) const { return i.str(); }
        std::string operator()(double d) const { return fmt::format("{:.6g}", d); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(const std::string &s) const { return s; }
        std::string operator()(const qstate::RegisterRef &r) const {
            return fmt::format("<qureg[{}]>", r.size());
        }
        std::string operator()(const ChannelRef &c) const { return fmt::format("<channel {}>", c.id); }
        std::string operator()(const ChannelEndRef &e) const {
            return fmt::format("<channel {} end {}>", e.channel, e.end);
        }
    };
    return std::visit(Visitor{}, v);
}

std::string_view value_type_name(const Value &v) {
    static constexpr std::string_view kNames[] = {"none",   "int",   "real",       "bool",
                                                  "string", "qureg", "channel", "channelEnd"};
    return kNames[v.index()];
}

Int to_int(const Value &v) {
    if (const auto *i = std::get_if<Int>(&v)) {
        return *i;
    }
    if (const auto *d = std::get_if<double>(&v)) {
        if (!std::isfinite(*d)) {
            throw Error(ErrorKind::TypeMismatch, "cannot convert a non-finite real to int");
        }
        return Int(std::trunc(*d));
    }
    if (const auto *b = std::get_if<bool>(&v)) {
        return *b ? 1 : 0;
    }
    throw Error(ErrorKind::TypeMismatch,
                fmt::format("expected a number, found {}", value_type_name(v)));
}

std::int64_t to_int64(const Value &v) {
    const Int i = to_int(v);
    if (i > std::numeric_limits<std::int64_t>::max() || i < std::numeric_limits<std::int64_t>::min()) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("integer {} is out of range", i.str()));
    }
    return static_cast<std::int64_t>(i);
}

double to_real(const Value &v) {
    if (const auto *i = std::get_if<Int>(&v)) {
        return static_cast<double>(*i);
    }
    if (const auto *d = std::get_if<double>(&v)) {
        return *d;
    }
    if (const auto *b = std::get_if<bool>(&v)) {
        return *b ? 1.0 : 0.0;
    }
    throw Error(ErrorKind::TypeMismatch,
                fmt::format("expected a number, found {}", value_type_name(v)));
}

bool to_bool(const Value &v) {
    if (const auto *b = std::get_if<bool>(&v)) {
        return *b;
    }
    if (const auto *i = std::get_if<Int>(&v)) {
        return *i != 0;
    }
    if (const auto *d = std::get_if<double>(&v)) {
        return *d != 0.0;
    }
    throw Error(ErrorKind::TypeMismatch,
                fmt::format("expected a condition, found {}", value_type_name(v)));
}

} // namespace qrl::runtime
