#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrl {

/// Classification of every fault the library can raise. Diagnostics from the
/// static checker use their own kind enumeration (see typecheck/diagnostic.hpp).
enum class ErrorKind {
    OutOfQubits,
    ArityMismatch,
    NonUnitary,
    EmptyRegister,
    QubitNotClean,
    UnknownGate,
    MissingParameter,
    InvalidArgument,
    OwnershipViolation,
    OverlapViolation,
    ConstViolation,
    IrreversibleStatement,
    TypeMismatch,
    UndefinedName,
    ChannelClosed,
    ChannelDeadlock,
    DivisionByZero,
    LexError,
    ParseError,
    RuntimeFault,
    Internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace qrl
