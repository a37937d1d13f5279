#pragma once

#include <cstddef>
#include <string>

#include "qrl/error.hpp"

namespace qrl::frontend {

/// Half-open source range. Lines and columns are 1-based; `offset` and
/// `length` are byte positions into the source text.
struct Span {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t end_line = 1;
    std::size_t end_column = 1;
    std::size_t offset = 0;
    std::size_t length = 0;

    /// Smallest span covering both.
    [[nodiscard]] Span merge(const Span &other) const;
    friend bool operator==(const Span &, const Span &) = default;
};

/// Lexical or syntax error carrying the offending location.
class SyntaxError : public Error {
  public:
    SyntaxError(ErrorKind kind, Span span, const std::string &message)
        : Error(kind, message), span_(span) {}

    [[nodiscard]] const Span &span() const noexcept { return span_; }

  private:
    Span span_;
};

} // namespace qrl::frontend
