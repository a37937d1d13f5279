#include "qrl/error.hpp"

namespace qrl {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::OutOfQubits: return "OutOfQubits";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::EmptyRegister: return "EmptyRegister";
    case ErrorKind::QubitNotClean: return "QubitNotClean";
    case ErrorKind::UnknownGate: return "UnknownGate";
    case ErrorKind::MissingParameter: return "MissingParameter";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OwnershipViolation: return "OwnershipViolation";
    case ErrorKind::OverlapViolation: return "OverlapViolation";
    case ErrorKind::ConstViolation: return "ConstViolation";
    case ErrorKind::IrreversibleStatement: return "IrreversibleStatement";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::UndefinedName: return "UndefinedName";
    case ErrorKind::ChannelClosed: return "ChannelClosed";
    case ErrorKind::ChannelDeadlock: return "ChannelDeadlock";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::LexError: return "LexError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RuntimeFault: return "RuntimeFault";
    case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

} // namespace qrl
