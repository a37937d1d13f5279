#pragma once

#include <span>
#include <string_view>

#include "qrl/frontend/ast.hpp"
#include "qrl/frontend/lexer.hpp"

namespace qrl::frontend {

/// Parses a complete token list into a Program node. Throws SyntaxError
/// (ParseError) naming the expected tokens at the first mismatch.
Node parse(std::span<const Token> tokens);

/// lex + parse.
Node parse_source(std::string_view source);

} // namespace qrl::frontend
