#include "qrl/frontend/parser.hpp"

#include <initializer_list>

#include <fmt/format.h>

namespace qrl::frontend {

namespace {

bool is_type_keyword(const Token &t) {
    if (t.kind != TokenKind::Keyword) {
        return false;
    }
    static constexpr std::string_view kTypes[] = {
        "int",       "real",   "bool", "string", "bit",     "void",      "qureg",
        "quconst",   "quvoid", "quscratch", "qbit", "qint", "channel", "channelEnd",
    };
    for (auto t2 : kTypes) {
        if (t.text == t2) {
            return true;
        }
    }
    return false;
}

std::string describe(const Token &t) {
    switch (t.kind) {
    case TokenKind::EndOfFile: return "end of input";
    case TokenKind::String: return fmt::format("string \"{}\"", t.text);
    default: return fmt::format("'{}'", t.text);
    }
}

class Parser {
  public:
    explicit Parser(std::span<const Token> tokens) : toks_(tokens) {
        eof_.kind = TokenKind::EndOfFile;
        if (!toks_.empty()) {
            const Span &last = toks_.back().span;
            eof_.span = {last.end_line, last.end_column, last.end_line, last.end_column,
                         last.offset + last.length, 0};
        }
    }

    Node program() {
        Node prog = make_node(NodeKind::Program, peek().span);
        while (!at_end()) {
            statement(prog.children);
        }
        if (!prog.children.empty()) {
            prog.span = prog.children.front().span.merge(prog.children.back().span);
        }
        return prog;
    }

  private:
    std::span<const Token> toks_;
    std::size_t pos_ = 0;
    Token eof_;

    // ---- token helpers -------------------------------------------------

    [[nodiscard]] const Token &peek(std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : eof_;
    }
    [[nodiscard]] bool at_end() const { return pos_ >= toks_.size(); }
    [[nodiscard]] const Token &previous() const { return pos_ > 0 ? toks_[pos_ - 1] : eof_; }

    const Token &take() {
        const Token &t = peek();
        if (!at_end()) {
            ++pos_;
        }
        return t;
    }

    bool accept_symbol(std::string_view s) {
        if (peek().is_symbol(s)) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_keyword(std::string_view s) {
        if (peek().is_keyword(s)) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(std::initializer_list<std::string_view> expected) const {
        std::string list;
        for (auto e : expected) {
            if (!list.empty()) {
                list += ", ";
            }
            list += e;
        }
        const char *prefix = expected.size() > 1 ? "expected one of " : "expected ";
        throw SyntaxError(ErrorKind::ParseError, peek().span,
                          fmt::format("{}{} but found {}", prefix, list, describe(peek())));
    }

    const Token &expect_symbol(std::string_view s) {
        if (!peek().is_symbol(s)) {
            const std::string quoted = fmt::format("'{}'", s);
            fail({quoted});
        }
        return take();
    }
    const Token &expect_keyword(std::string_view s) {
        if (!peek().is_keyword(s)) {
            const std::string quoted = fmt::format("'{}'", s);
            fail({quoted});
        }
        return take();
    }
    const Token &expect_ident() {
        if (peek().kind != TokenKind::Identifier) {
            fail({"identifier"});
        }
        return take();
    }

    [[nodiscard]] Span since(const Span &start) const { return start.merge(previous().span); }

    static Node empty() { return {}; }

    // ---- types -------------------------------------------------------------

    TypeBase base_type() {
        const Token &t = take();
        const std::string &w = t.text;
        if (w == "int" || w == "bit") return TypeBase::Int;
        if (w == "real") return TypeBase::Real;
        if (w == "bool") return TypeBase::Bool;
        if (w == "string") return TypeBase::String;
        if (w == "void") return TypeBase::Void;
        if (w == "qureg" || w == "qint") return TypeBase::Qureg;
        if (w == "quconst") return TypeBase::Quconst;
        if (w == "quvoid") return TypeBase::Quvoid;
        if (w == "quscratch") return TypeBase::Quscratch;
        if (w == "qbit") return TypeBase::Qbit;
        if (w == "channel") return TypeBase::Channel;
        if (w == "channelEnd") return TypeBase::ChannelEnd;
        --pos_;
        fail({"type"});
    }

    TypeExpr type_expr() {
        if (!is_type_keyword(peek())) {
            fail({"type"});
        }
        TypeExpr t;
        t.base = base_type();
        if (t.is_channel()) {
            expect_symbol("[");
            if (!is_type_keyword(peek())) {
                fail({"type"});
            }
            t.payload = base_type();
            expect_symbol("]");
        }
        return t;
    }

    // ---- statements ----------------------------------------------------

    void statement(std::vector<Node> &out) {
        const Token &t = peek();
        if (t.is_symbol(";")) {
            take();
            return;
        }
        if (t.kind == TokenKind::Keyword) {
            const std::string &w = t.text;
            if (w == "extern" || w == "cond" || w == "procedure" || w == "operator" ||
                w == "qufunct") {
                out.push_back(sub_decl());
                return;
            }
            if (w == "proc") {
                cqpl_proc(out);
                return;
            }
            if (w == "new") {
                out.push_back(new_decl());
                return;
            }
            if (is_type_keyword(t)) {
                typed_declaration(out);
                return;
            }
            if (w == "module") {
                out.push_back(module());
                return;
            }
            if (w == "if") {
                out.push_back(if_statement());
                return;
            }
            if (w == "while") {
                out.push_back(while_statement());
                return;
            }
            if (w == "for") {
                out.push_back(for_statement());
                return;
            }
            if (w == "measure") {
                out.push_back(measure_statement());
                return;
            }
            if (w == "reset" || w == "dump") {
                out.push_back(optional_target_statement(w == "reset" ? NodeKind::Reset
                                                                      : NodeKind::Dump));
                return;
            }
            if (w == "print") {
                out.push_back(print_statement());
                return;
            }
            if (w == "return") {
                out.push_back(return_statement());
                return;
            }
            if (w == "send") {
                out.push_back(send_statement());
                return;
            }
            if (w == "receive") {
                out.push_back(receive_statement());
                return;
            }
            if (w == "fork" || w == "call") {
                out.push_back(keyword_call(w == "fork" ? NodeKind::Fork : NodeKind::Call));
                return;
            }
        }
        if (t.is_symbol("{")) {
            out.push_back(block_or_loop());
            return;
        }
        if (t.is_symbol("!")) {
            out.push_back(inverse_call());
            return;
        }
        out.push_back(head_statement());
    }

    Node block() {
        const Span start = expect_symbol("{").span;
        Node b = make_node(NodeKind::Block, start);
        while (!peek().is_symbol("}")) {
            if (at_end()) {
                fail({"'}'"});
            }
            statement(b.children);
        }
        take();
        b.span = since(start);
        return b;
    }

    Node block_or_loop() {
        Node body = block();
        if (!accept_keyword("until")) {
            return body;
        }
        const Span start = body.span;
        Node cond = expression();
        expect_symbol(";");
        return make_node(NodeKind::DoUntil, since(start), {}, {std::move(body), std::move(cond)});
    }

    Node params_in_parens() {
        const Span start = expect_symbol("(").span;
        Node params = make_node(NodeKind::Params, start);
        if (!peek().is_symbol(")")) {
            do {
                const Span ps = peek().span;
                Node p = make_node(NodeKind::Param, ps);
                p.type = type_expr();
                p.text = expect_ident().text;
                p.span = since(ps);
                params.children.push_back(std::move(p));
            } while (accept_symbol(","));
        }
        expect_symbol(")");
        params.span = since(start);
        return params;
    }

    Node sub_decl() {
        const Span start = peek().span;
        Node n = make_node(NodeKind::SubDecl, start);
        n.is_extern = accept_keyword("extern");
        n.cond = accept_keyword("cond");
        if (accept_keyword("procedure")) {
            n.sub = SubKind::Procedure;
        } else if (accept_keyword("operator")) {
            n.sub = SubKind::Operator;
        } else if (accept_keyword("qufunct")) {
            n.sub = SubKind::Qufunct;
        } else {
            fail({"'procedure'", "'operator'", "'qufunct'"});
        }
        n.text = expect_ident().text;
        n.children.push_back(params_in_parens());
        if (n.is_extern) {
            expect_symbol(";");
            n.children.push_back(empty());
        } else {
            n.children.push_back(block());
        }
        n.span = since(start);
        return n;
    }

    // proc name: a:qbit, b:qbit { ... } [in { ... }]
    void cqpl_proc(std::vector<Node> &out) {
        const Span start = expect_keyword("proc").span;
        Node n = make_node(NodeKind::SubDecl, start);
        n.sub = SubKind::Procedure;
        n.text = expect_ident().text;
        expect_symbol(":");
        Node params = make_node(NodeKind::Params, peek().span);
        if (!peek().is_symbol("{")) {
            do {
                params.children.push_back(colon_param());
            } while (accept_symbol(","));
        }
        params.span = since(params.span);
        n.children.push_back(std::move(params));
        n.children.push_back(block());
        n.span = since(start);
        out.push_back(std::move(n));
        if (accept_keyword("in")) {
            out.push_back(block());
        }
    }

    Node colon_param() {
        const Span ps = peek().span;
        Node p = make_node(NodeKind::Param, ps, expect_ident().text);
        expect_symbol(":");
        p.type = type_expr();
        p.span = since(ps);
        return p;
    }

    // new T name := value;
    Node new_decl() {
        const Span start = expect_keyword("new").span;
        Node n = make_node(NodeKind::VarDecl, start);
        n.type = type_expr();
        n.text = expect_ident().text;
        if (accept_symbol("[")) {
            n.children.push_back(expression());
            expect_symbol("]");
        } else {
            n.children.push_back(empty());
        }
        if (accept_symbol(":=") || accept_symbol("=")) {
            n.children.push_back(expression());
        } else {
            n.children.push_back(empty());
        }
        expect_symbol(";");
        n.span = since(start);
        return n;
    }

    // Declarations that start with a type: variables, channels, or C-style
    // function definitions.
    void typed_declaration(std::vector<Node> &out) {
        const Span start = peek().span;
        const TypeExpr type = type_expr();
        if (peek().kind == TokenKind::Identifier && peek(1).is_symbol("(")) {
            Node n = make_node(NodeKind::SubDecl, start);
            n.sub = SubKind::Procedure;
            n.type = type;
            n.text = take().text;
            n.children.push_back(params_in_parens());
            n.children.push_back(block());
            n.span = since(start);
            out.push_back(std::move(n));
            return;
        }
        do {
            const Span ds = peek().span;
            const std::string name = expect_ident().text;
            if (accept_keyword("withends")) {
                Node ch = make_node(NodeKind::ChannelDecl, ds, name);
                ch.type = type;
                expect_symbol("[");
                const Token &e0 = expect_ident();
                ch.children.push_back(make_node(NodeKind::Ident, e0.span, e0.text));
                expect_symbol(",");
                const Token &e1 = expect_ident();
                ch.children.push_back(make_node(NodeKind::Ident, e1.span, e1.text));
                expect_symbol("]");
                ch.span = since(ds);
                out.push_back(std::move(ch));
                continue;
            }
            Node n = make_node(NodeKind::VarDecl, ds, name);
            n.type = type;
            if (accept_symbol("[")) {
                n.children.push_back(expression());
                expect_symbol("]");
            } else {
                n.children.push_back(empty());
            }
            if (accept_symbol("=") || accept_symbol(":=")) {
                n.children.push_back(expression());
            } else {
                n.children.push_back(empty());
            }
            n.span = since(ds);
            out.push_back(std::move(n));
        } while (accept_symbol(","));
        expect_symbol(";");
    }

    Node module() {
        const Span start = expect_keyword("module").span;
        Node n = make_node(NodeKind::Module, start, expect_ident().text);
        n.children.push_back(block());
        n.span = since(start);
        return n;
    }

    Node if_statement() {
        const Span start = expect_keyword("if").span;
        Node cond = expression();
        accept_keyword("then");
        Node body = block();
        Node otherwise;
        if (accept_keyword("else")) {
            otherwise = peek().is_keyword("if") ? if_statement() : block();
        }
        return make_node(NodeKind::If, since(start), {},
                         {std::move(cond), std::move(body), std::move(otherwise)});
    }

    Node while_statement() {
        const Span start = expect_keyword("while").span;
        Node cond = expression();
        accept_keyword("do");
        Node body = block();
        return make_node(NodeKind::While, since(start), {}, {std::move(cond), std::move(body)});
    }

    Node for_statement() {
        const Span start = expect_keyword("for").span;
        const std::string var = expect_ident().text;
        expect_symbol("=");
        Node from = expression();
        expect_keyword("to");
        Node to = expression();
        Node step;
        if (accept_keyword("step")) {
            step = expression();
        }
        Node body = block();
        return make_node(NodeKind::ForRange, since(start), var,
                         {std::move(from), std::move(to), std::move(step), std::move(body)});
    }

    Node measure_statement() {
        const Span start = expect_keyword("measure").span;
        Node target = expression();
        if (accept_keyword("then")) {
            Node then_block = block();
            Node otherwise;
            if (accept_keyword("else")) {
                otherwise = block();
            }
            return make_node(NodeKind::MeasureIf, since(start), {},
                             {std::move(target), std::move(then_block), std::move(otherwise)});
        }
        Node var;
        if (accept_symbol(",")) {
            const Token &v = expect_ident();
            var = make_node(NodeKind::Ident, v.span, v.text);
        }
        expect_symbol(";");
        return make_node(NodeKind::Measure, since(start), {}, {std::move(target), std::move(var)});
    }

    Node optional_target_statement(NodeKind kind) {
        const Span start = take().span;
        Node target;
        if (!peek().is_symbol(";")) {
            target = expression();
        }
        expect_symbol(";");
        return make_node(kind, since(start), {}, {std::move(target)});
    }

    Node print_statement() {
        const Span start = expect_keyword("print").span;
        Node n = make_node(NodeKind::Print, start);
        if (!peek().is_symbol(";")) {
            do {
                n.children.push_back(expression());
            } while (accept_symbol(","));
        }
        expect_symbol(";");
        n.span = since(start);
        return n;
    }

    Node return_statement() {
        const Span start = expect_keyword("return").span;
        Node value;
        if (!peek().is_symbol(";")) {
            value = expression();
        }
        expect_symbol(";");
        return make_node(NodeKind::Return, since(start), {}, {std::move(value)});
    }

    // send (end, value);  |  send a, b to Module;
    Node send_statement() {
        const Span start = expect_keyword("send").span;
        if (peek().is_symbol("(")) {
            take();
            Node end = expression();
            expect_symbol(",");
            Node value = expression();
            expect_symbol(")");
            expect_symbol(";");
            return make_node(NodeKind::Send, since(start), {}, {std::move(end), std::move(value)});
        }
        Node n = make_node(NodeKind::SendTo, start);
        do {
            n.children.push_back(expression());
        } while (accept_symbol(","));
        expect_keyword("to");
        n.text = expect_ident().text;
        expect_symbol(";");
        n.span = since(start);
        return n;
    }

    Node receive_statement() {
        const Span start = expect_keyword("receive").span;
        Node n = make_node(NodeKind::ReceiveFrom, start);
        do {
            n.children.push_back(colon_param());
        } while (accept_symbol(","));
        expect_keyword("from");
        n.text = expect_ident().text;
        expect_symbol(";");
        n.span = since(start);
        return n;
    }

    std::vector<Node> call_arguments() {
        std::vector<Node> args;
        expect_symbol("(");
        if (!peek().is_symbol(")")) {
            do {
                args.push_back(expression());
            } while (accept_symbol(","));
        }
        expect_symbol(")");
        return args;
    }

    Node keyword_call(NodeKind kind) {
        const Span start = take().span;
        Node n = make_node(kind, start, expect_ident().text);
        n.children = call_arguments();
        expect_symbol(";");
        n.span = since(start);
        return n;
    }

    Node inverse_call() {
        const Span start = expect_symbol("!").span;
        Node n = make_node(NodeKind::InverseCall, start, expect_ident().text);
        n.children = call_arguments();
        expect_symbol(";");
        n.span = since(start);
        return n;
    }

    // Statements led by an expression: assignment, call, gate application,
    // alias declaration.
    Node head_statement() {
        const Span start = peek().span;
        if (peek().kind != TokenKind::Identifier) {
            fail({"statement"});
        }
        Node head = concat_expr();
        if (accept_symbol("=") || accept_symbol(":=")) {
            Node value = expression();
            expect_symbol(";");
            return make_node(NodeKind::Assign, since(start), {}, {std::move(head), std::move(value)});
        }
        if (peek().is_keyword("aliasfor")) {
            take();
            if (head.kind != NodeKind::Ident) {
                throw SyntaxError(ErrorKind::ParseError, head.span, "alias name must be an identifier");
            }
            Node n = make_node(NodeKind::AliasFor, start, head.text);
            expect_symbol("[");
            do {
                const Token &part = expect_ident();
                n.children.push_back(make_node(NodeKind::Ident, part.span, part.text));
            } while (accept_symbol(","));
            expect_symbol("]");
            expect_symbol(";");
            n.span = since(start);
            return n;
        }
        if (peek().is_symbol(",") || peek().is_symbol("*=")) {
            std::vector<Node> targets;
            targets.push_back(std::move(head));
            while (accept_symbol(",")) {
                targets.push_back(concat_expr());
            }
            expect_symbol("*=");
            Node n = make_node(NodeKind::GateApply, start);
            n.children.push_back(gate_spec());
            for (auto &t : targets) {
                n.children.push_back(std::move(t));
            }
            expect_symbol(";");
            n.span = since(start);
            return n;
        }
        if (head.kind == NodeKind::CallExpr) {
            expect_symbol(";");
            head.kind = NodeKind::Call;
            head.span = since(start);
            return head;
        }
        fail({"'='", "':='", "'*='", "'('"});
    }

    Node gate_spec() {
        const Span start = peek().span;
        if (peek().is_symbol("[") && peek(1).is_symbol("[")) {
            take();
            take();
            Node m = make_node(NodeKind::MatrixLit, start);
            do {
                m.children.push_back(expression());
            } while (accept_symbol(","));
            expect_symbol("]");
            expect_symbol("]");
            m.span = since(start);
            return m;
        }
        if (peek().kind != TokenKind::Identifier) {
            fail({"gate name", "'[['"});
        }
        Node g = make_node(NodeKind::GateRef, start, take().text);
        if (peek().is_symbol("(")) {
            g.children = call_arguments();
        } else if (!peek().is_symbol(";")) {
            g.children.push_back(expression());
        }
        g.span = since(start);
        return g;
    }

    // ---- expressions ---------------------------------------------------

    Node binary(Node lhs, const std::string &op, Node rhs) {
        const Span span = lhs.span.merge(rhs.span);
        return make_node(NodeKind::Binary, span, op, {std::move(lhs), std::move(rhs)});
    }

  public:
    Node expression() { return or_expr(); }

  private:
    Node or_expr() {
        Node lhs = and_expr();
        while (peek().is_keyword("or") || peek().is_keyword("xor")) {
            const std::string op = take().text;
            lhs = binary(std::move(lhs), op, and_expr());
        }
        return lhs;
    }

    Node and_expr() {
        Node lhs = not_expr();
        while (accept_keyword("and")) {
            lhs = binary(std::move(lhs), "and", not_expr());
        }
        return lhs;
    }

    Node not_expr() {
        if (peek().is_keyword("not")) {
            const Span start = take().span;
            Node operand = not_expr();
            return make_node(NodeKind::Unary, since(start), "not", {std::move(operand)});
        }
        return comparison();
    }

    Node comparison() {
        Node lhs = additive();
        static constexpr std::string_view kOps[] = {"==", "=", "!=", "<", "<=", ">", ">="};
        for (auto op : kOps) {
            if (peek().is_symbol(op)) {
                take();
                const std::string canonical = op == "=" ? "==" : std::string(op);
                return binary(std::move(lhs), canonical, additive());
            }
        }
        return lhs;
    }

    Node additive() {
        Node lhs = multiplicative();
        while (peek().is_symbol("+") || peek().is_symbol("-")) {
            const std::string op = take().text;
            lhs = binary(std::move(lhs), op, multiplicative());
        }
        return lhs;
    }

    Node multiplicative() {
        Node lhs = unary();
        while (peek().is_symbol("*") || peek().is_symbol("/") || peek().is_keyword("mod")) {
            const std::string op = take().text;
            lhs = binary(std::move(lhs), op, unary());
        }
        return lhs;
    }

    Node unary() {
        if (peek().is_symbol("-") || peek().is_symbol("+")) {
            const Span start = peek().span;
            const std::string op = take().text;
            Node operand = unary();
            if (op == "+") {
                return operand;
            }
            return make_node(NodeKind::Unary, since(start), "-", {std::move(operand)});
        }
        return power();
    }

    Node power() {
        Node base = concat_expr();
        if (accept_symbol("^")) {
            return binary(std::move(base), "^", unary());
        }
        return base;
    }

    Node concat_expr() {
        Node lhs = length_expr();
        while (accept_symbol("&")) {
            Node rhs = length_expr();
            const Span span = lhs.span.merge(rhs.span);
            lhs = make_node(NodeKind::Concat, span, {}, {std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    Node length_expr() {
        if (peek().is_symbol("#")) {
            const Span start = take().span;
            Node operand = length_expr();
            return make_node(NodeKind::Length, since(start), {}, {std::move(operand)});
        }
        return postfix();
    }

    Node postfix() {
        Node e = primary();
        while (peek().is_symbol("[")) {
            const Span start = e.span;
            take();
            Node first = expression();
            if (accept_symbol("::")) {
                Node len = expression();
                expect_symbol("]");
                e = make_node(NodeKind::Slice, since(start), {},
                              {std::move(e), std::move(first), std::move(len)});
            } else {
                expect_symbol("]");
                e = make_node(NodeKind::Index, since(start), {}, {std::move(e), std::move(first)});
            }
        }
        return e;
    }

    Node primary() {
        const Token &t = peek();
        const Span start = t.span;
        switch (t.kind) {
        case TokenKind::Integer:
            take();
            return make_node(NodeKind::IntLit, start, t.text);
        case TokenKind::Real:
            take();
            return make_node(NodeKind::RealLit, start, t.text);
        case TokenKind::String:
            take();
            return make_node(NodeKind::StringLit, start, t.text);
        case TokenKind::Identifier: {
            take();
            if (peek().is_symbol("(")) {
                Node call = make_node(NodeKind::CallExpr, start, t.text);
                call.children = call_arguments();
                call.span = since(start);
                return call;
            }
            return make_node(NodeKind::Ident, start, t.text);
        }
        case TokenKind::Keyword:
            if (t.text == "true" || t.text == "false") {
                take();
                return make_node(NodeKind::BoolLit, start, t.text);
            }
            if (t.text == "measure") {
                take();
                Node m = make_node(NodeKind::MeasureExpr, start);
                if (peek().is_symbol("(")) {
                    m.children = call_arguments();
                } else {
                    m.children.push_back(concat_expr());
                }
                m.span = since(start);
                return m;
            }
            if (t.text == "recv") {
                take();
                Node r = make_node(NodeKind::RecvExpr, start);
                r.children = call_arguments();
                if (r.children.size() != 1) {
                    throw SyntaxError(ErrorKind::ParseError, since(start),
                                      "recv takes exactly one channel end");
                }
                r.span = since(start);
                return r;
            }
            if (t.text == "new") {
                take();
                Node n = make_node(NodeKind::NewChannel, start);
                n.type = type_expr();
                if (n.type.base != TypeBase::Channel) {
                    throw SyntaxError(ErrorKind::ParseError, since(start),
                                      "only channels can be created with new in an expression");
                }
                expect_symbol("(");
                expect_symbol(")");
                n.span = since(start);
                return n;
            }
            break;
        case TokenKind::Symbol:
            if (t.text == "(") {
                take();
                Node inner = expression();
                expect_symbol(")");
                return inner;
            }
            break;
        default:
            break;
        }
        fail({"expression"});
    }
};

} // namespace

Node parse(std::span<const Token> tokens) { return Parser(tokens).program(); }

Node parse_source(std::string_view source) {
    const auto tokens = lex(source);
    return parse(tokens);
}

} // namespace qrl::frontend
