#include "qrl/frontend/pretty.hpp"

#include <fmt/format.h>

namespace qrl::frontend {

namespace {

// Binding strength, higher binds tighter. Mirrors the parser's levels.
int precedence(const Node &e) {
    switch (e.kind) {
    case NodeKind::Binary:
        if (e.text == "or" || e.text == "xor") return 1;
        if (e.text == "and") return 2;
        if (e.text == "==" || e.text == "!=" || e.text == "<" || e.text == "<=" ||
            e.text == ">" || e.text == ">=")
            return 4;
        if (e.text == "+" || e.text == "-") return 5;
        if (e.text == "*" || e.text == "/" || e.text == "mod") return 6;
        if (e.text == "^") return 8;
        return 0;
    case NodeKind::Unary:
        return e.text == "not" ? 3 : 7;
    case NodeKind::Concat:
        return 9;
    case NodeKind::Length:
        return 10;
    default:
        return 12;
    }
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out;
}

std::string expr(const Node &e);

std::string wrapped(const Node &e, int min_prec) {
    const std::string s = expr(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string list(const std::vector<Node> &items, std::size_t from = 0) {
    std::string out;
    for (std::size_t i = from; i < items.size(); ++i) {
        if (i > from) {
            out += ", ";
        }
        out += expr(items[i]);
    }
    return out;
}

std::string expr(const Node &e) {
    switch (e.kind) {
    case NodeKind::IntLit:
    case NodeKind::RealLit:
    case NodeKind::BoolLit:
    case NodeKind::Ident:
        return e.text;
    case NodeKind::StringLit:
        return "\"" + escape(e.text) + "\"";
    case NodeKind::Index:
        return fmt::format("{}[{}]", wrapped(e[0], 11), expr(e[1]));
    case NodeKind::Slice:
        return fmt::format("{}[{}::{}]", wrapped(e[0], 11), expr(e[1]), expr(e[2]));
    case NodeKind::Length:
        return "#" + wrapped(e[0], 10);
    case NodeKind::Concat:
        return fmt::format("{} & {}", wrapped(e[0], 9), wrapped(e[1], 10));
    case NodeKind::Unary:
        if (e.text == "not") {
            return "not " + wrapped(e[0], 3);
        }
        return "-" + wrapped(e[0], 7);
    case NodeKind::Binary: {
        const int p = precedence(e);
        if (e.text == "^") {
            // Right operand is parsed at unary level.
            return fmt::format("{} ^ {}", wrapped(e[0], 9), wrapped(e[1], 7));
        }
        if (p == 4) {
            // Comparisons do not chain.
            return fmt::format("{} {} {}", wrapped(e[0], 5), e.text, wrapped(e[1], 5));
        }
        return fmt::format("{} {} {}", wrapped(e[0], p), e.text, wrapped(e[1], p + 1));
    }
    case NodeKind::CallExpr:
        return fmt::format("{}({})", e.text, list(e.children));
    case NodeKind::MeasureExpr:
        if (e.children.size() == 1 && precedence(e[0]) >= 9) {
            return "measure " + expr(e[0]);
        }
        return fmt::format("measure ({})", list(e.children));
    case NodeKind::RecvExpr:
        return fmt::format("recv({})", expr(e[0]));
    case NodeKind::NewChannel:
        return fmt::format("new {}()", to_string(e.type));
    case NodeKind::MatrixLit:
        return fmt::format("[[{}]]", list(e.children));
    case NodeKind::GateRef:
        if (e.children.empty()) {
            return e.text;
        }
        return fmt::format("{}({})", e.text, list(e.children));
    default:
        return fmt::format("<{}>", to_string(e.kind));
    }
}

class Printer {
  public:
    std::string out;

    void statements(const std::vector<Node> &stmts, int depth) {
        for (const auto &s : stmts) {
            statement(s, depth);
        }
    }

    void block(const Node &b, int depth) {
        out += "{\n";
        statements(b.children, depth + 1);
        indent(depth);
        out += "}";
    }

  private:
    void indent(int depth) { out += std::string(static_cast<std::size_t>(depth) * 2, ' '); }

    void line(int depth, const std::string &text) {
        indent(depth);
        out += text;
        out += '\n';
    }

    static std::string params(const Node &ps) {
        std::string s;
        for (std::size_t i = 0; i < ps.children.size(); ++i) {
            if (i > 0) {
                s += ", ";
            }
            s += fmt::format("{} {}", to_string(ps[i].type), ps[i].text);
        }
        return s;
    }

    void if_chain(const Node &s, int depth, const char *keyword) {
        out += fmt::format("{} {} ", keyword, expr(s[0]));
        block(s[1], depth);
        if (!s[2].empty()) {
            out += " else ";
            if (s[2].kind == NodeKind::If || s[2].kind == NodeKind::QuantumIf) {
                if_chain(s[2], depth, "if");
                return;
            }
            block(s[2], depth);
        }
    }

    void statement(const Node &s, int depth) {
        switch (s.kind) {
        case NodeKind::VarDecl: {
            std::string text = fmt::format("{} {}", to_string(s.type), s.text);
            if (!s[0].empty()) {
                text += fmt::format("[{}]", expr(s[0]));
            }
            if (!s[1].empty()) {
                text += fmt::format(" = {}", expr(s[1]));
            }
            line(depth, text + ";");
            return;
        }
        case NodeKind::SubDecl: {
            indent(depth);
            std::string head;
            if (s.type.base != TypeBase::Void || s.type.payload) {
                head = fmt::format("{} {}({})", to_string(s.type), s.text, params(s[0]));
            } else {
                head = fmt::format("{}{}{} {}({})", s.is_extern ? "extern " : "",
                                   s.cond ? "cond " : "", to_string(s.sub), s.text, params(s[0]));
            }
            out += head;
            if (s[1].empty()) {
                out += ";\n";
                return;
            }
            out += ' ';
            block(s[1], depth);
            out += '\n';
            return;
        }
        case NodeKind::Block:
            indent(depth);
            block(s, depth);
            out += '\n';
            return;
        case NodeKind::If:
        case NodeKind::QuantumIf:
            indent(depth);
            if_chain(s, depth, "if");
            out += '\n';
            return;
        case NodeKind::While:
            indent(depth);
            out += fmt::format("while {} ", expr(s[0]));
            block(s[1], depth);
            out += '\n';
            return;
        case NodeKind::DoUntil:
            indent(depth);
            block(s[0], depth);
            out += fmt::format(" until {};\n", expr(s[1]));
            return;
        case NodeKind::ForRange: {
            indent(depth);
            out += fmt::format("for {} = {} to {}", s.text, expr(s[0]), expr(s[1]));
            if (!s[2].empty()) {
                out += fmt::format(" step {}", expr(s[2]));
            }
            out += ' ';
            block(s[3], depth);
            out += '\n';
            return;
        }
        case NodeKind::Assign:
            line(depth, fmt::format("{} = {};", expr(s[0]), expr(s[1])));
            return;
        case NodeKind::Call:
            line(depth, fmt::format("{}({});", s.text, list(s.children)));
            return;
        case NodeKind::InverseCall:
            line(depth, fmt::format("!{}({});", s.text, list(s.children)));
            return;
        case NodeKind::Measure:
            if (s[1].empty()) {
                line(depth, fmt::format("measure {};", expr(s[0])));
            } else {
                line(depth, fmt::format("measure {}, {};", expr(s[0]), expr(s[1])));
            }
            return;
        case NodeKind::MeasureIf:
            indent(depth);
            out += fmt::format("measure {} then ", expr(s[0]));
            block(s[1], depth);
            if (!s[2].empty()) {
                out += " else ";
                block(s[2], depth);
            }
            out += '\n';
            return;
        case NodeKind::Reset:
        case NodeKind::Dump:
        case NodeKind::Return: {
            const char *kw = s.kind == NodeKind::Reset  ? "reset"
                             : s.kind == NodeKind::Dump ? "dump"
                                                        : "return";
            if (s[0].empty()) {
                line(depth, fmt::format("{};", kw));
            } else {
                line(depth, fmt::format("{} {};", kw, expr(s[0])));
            }
            return;
        }
        case NodeKind::Print:
            line(depth, s.children.empty() ? "print;" : fmt::format("print {};", list(s.children)));
            return;
        case NodeKind::Send:
            line(depth, fmt::format("send ({}, {});", expr(s[0]), expr(s[1])));
            return;
        case NodeKind::SendTo:
            line(depth, fmt::format("send {} to {};", list(s.children), s.text));
            return;
        case NodeKind::ReceiveFrom: {
            std::string parts;
            for (std::size_t i = 0; i < s.children.size(); ++i) {
                if (i > 0) {
                    parts += ", ";
                }
                parts += fmt::format("{}:{}", s[i].text, to_string(s[i].type));
            }
            line(depth, fmt::format("receive {} from {};", parts, s.text));
            return;
        }
        case NodeKind::Fork:
            line(depth, fmt::format("fork {}({});", s.text, list(s.children)));
            return;
        case NodeKind::ChannelDecl:
            line(depth, fmt::format("{} {} withends [{}, {}];", to_string(s.type), s.text,
                                    s[0].text, s[1].text));
            return;
        case NodeKind::AliasFor:
            line(depth, fmt::format("{} aliasfor [{}];", s.text, list(s.children)));
            return;
        case NodeKind::GateApply:
            line(depth, fmt::format("{} *= {};", list(s.children, 1), expr(s[0])));
            return;
        case NodeKind::Module:
            indent(depth);
            out += fmt::format("module {} ", s.text);
            block(s[0], depth);
            out += '\n';
            return;
        default:
            line(depth, fmt::format("/* {} */", to_string(s.kind)));
            return;
        }
    }
};

} // namespace

std::string pretty_expression(const Node &e) { return expr(e); }

std::string pretty(const Node &node) {
    Printer p;
    if (node.kind == NodeKind::Program) {
        p.statements(node.children, 0);
    } else if (node.kind == NodeKind::Block) {
        p.block(node, 0);
    } else if (node.kind >= NodeKind::IntLit) {
        return expr(node);
    } else {
        p.statements({node}, 0);
    }
    return p.out;
}

} // namespace qrl::frontend
