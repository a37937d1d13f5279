#include "qrl/frontend/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <fmt/format.h>

namespace qrl::frontend {

namespace {

constexpr std::array kKeywords = {
    "aliasfor", "and",      "bit",       "bool",     "call",    "channel",  "channelEnd",
    "cond",     "do",       "dump",      "else",     "extern",  "false",    "for",
    "fork",     "from",     "if",        "in",       "int",     "measure",  "mod",
    "module",   "new",      "not",       "operator", "or",      "print",    "proc",
    "procedure", "qbit",    "qint",      "quconst",  "qufunct", "qureg",    "quscratch",
    "quvoid",   "real",     "receive",   "recv",     "reset",   "return",   "send",
    "step",     "string",   "then",      "to",       "true",    "until",    "void",
    "while",    "withends", "xor",
};

// Longest first so that maximal munch works with a linear scan.
constexpr std::array kSymbols = {
    "::", ":=", "*=", "==", "!=", "<=", ">=", "(", ")", "[", "]", "{", "}", ",", ";",
    ":",  "=",  "<",  ">",  "+",  "-",  "*",  "/", "^", "&", "#", "!",
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) {
                return out;
            }
            out.push_back(next());
        }
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;

    [[nodiscard]] char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    [[nodiscard]] Span here() const { return {line_, col_, line_, col_, pos_, 0}; }

    void finish(Span &span) const {
        span.end_line = line_;
        span.end_column = col_;
        span.length = pos_ - span.offset;
    }

    [[noreturn]] void fail(Span span, const std::string &msg) const {
        finish(span);
        throw SyntaxError(ErrorKind::LexError, span, msg);
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') {
                    advance();
                }
            } else if (c == '/' && peek(1) == '*') {
                const Span start = here();
                advance();
                advance();
                while (!(peek() == '*' && peek(1) == '/')) {
                    if (pos_ >= src_.size()) {
                        fail(start, "unterminated block comment");
                    }
                    advance();
                }
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    Token next() {
        Token tok;
        tok.span = here();
        const char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                tok.text += peek();
                advance();
            }
            tok.kind = is_keyword(tok.text) ? TokenKind::Keyword : TokenKind::Identifier;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number(tok);
        } else if (c == '"') {
            lex_string(tok);
        } else {
            for (std::string_view sym : kSymbols) {
                if (src_.substr(pos_, sym.size()) == sym) {
                    tok.kind = TokenKind::Symbol;
                    tok.text = std::string(sym);
                    for (std::size_t i = 0; i < sym.size(); ++i) {
                        advance();
                    }
                    break;
                }
            }
            if (tok.kind != TokenKind::Symbol) {
                Span span = tok.span;
                advance();
                fail(span, fmt::format("unexpected character '{}'", c));
            }
        }
        finish(tok.span);
        return tok;
    }

    void take_digits(Token &tok) {
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            tok.text += peek();
            advance();
        }
    }

    void lex_number(Token &tok) {
        tok.kind = TokenKind::Integer;
        take_digits(tok);
        // "0::i" must stay an integer followed by "::".
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            tok.kind = TokenKind::Real;
            tok.text += '.';
            advance();
            take_digits(tok);
        }
        if ((peek() == 'e' || peek() == 'E') &&
            (std::isdigit(static_cast<unsigned char>(peek(1))) ||
             ((peek(1) == '+' || peek(1) == '-') &&
              std::isdigit(static_cast<unsigned char>(peek(2)))))) {
            tok.kind = TokenKind::Real;
            tok.text += peek();
            advance();
            if (peek() == '+' || peek() == '-') {
                tok.text += peek();
                advance();
            }
            take_digits(tok);
        }
        if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
            Span span = here();
            advance();
            fail(span, fmt::format("malformed number '{}{}'", tok.text, src_[pos_ - 1]));
        }
    }

    void lex_string(Token &tok) {
        tok.kind = TokenKind::String;
        advance();
        while (peek() != '"') {
            if (pos_ >= src_.size() || peek() == '\n') {
                fail(tok.span, "unterminated string literal");
            }
            if (peek() == '\\') {
                advance();
                switch (peek()) {
                case 'n': tok.text += '\n'; break;
                case 't': tok.text += '\t'; break;
                case '"': tok.text += '"'; break;
                case '\\': tok.text += '\\'; break;
                default: fail(tok.span, "unknown escape sequence in string literal");
                }
                advance();
                continue;
            }
            tok.text += peek();
            advance();
        }
        advance();
    }
};

} // namespace

Span Span::merge(const Span &other) const {
    const Span &first = offset <= other.offset ? *this : other;
    const std::size_t end = std::max(offset + length, other.offset + other.length);
    const Span &last = offset + length >= other.offset + other.length ? *this : other;
    return {first.line, first.column, last.end_line, last.end_column, first.offset,
            end - first.offset};
}

bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

} // namespace qrl::frontend
