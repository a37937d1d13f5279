#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qrl/frontend/source.hpp"

namespace qrl::frontend {

enum class TokenKind { Identifier, Keyword, Integer, Real, String, Symbol, EndOfFile };

struct Token {
    TokenKind kind = TokenKind::EndOfFile;
    std::string text; // string literals hold the unescaped value
    Span span;

    [[nodiscard]] bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    [[nodiscard]] bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
    [[nodiscard]] bool is_symbol(std::string_view t) const { return is(TokenKind::Symbol, t); }
};

/// True for reserved words of the language.
bool is_keyword(std::string_view word);

/// Tokenizes `source`; comments are skipped and no end marker is appended,
/// so empty input yields an empty list. Throws SyntaxError (LexError) on the first bad character,
/// unterminated string or unterminated block comment.
std::vector<Token> lex(std::string_view source);

} // namespace qrl::frontend
