#include "qrl/frontend/ast.hpp"

#include <fmt/format.h>

namespace qrl::frontend {

bool TypeExpr::is_quantum() const {
    switch (base) {
    case TypeBase::Qureg:
    case TypeBase::Quconst:
    case TypeBase::Quvoid:
    case TypeBase::Quscratch:
    case TypeBase::Qbit:
        return true;
    default:
        return false;
    }
}

std::string to_string(TypeBase base) {
    switch (base) {
    case TypeBase::Void: return "void";
    case TypeBase::Int: return "int";
    case TypeBase::Real: return "real";
    case TypeBase::Bool: return "bool";
    case TypeBase::String: return "string";
    case TypeBase::Qureg: return "qureg";
    case TypeBase::Quconst: return "quconst";
    case TypeBase::Quvoid: return "quvoid";
    case TypeBase::Quscratch: return "quscratch";
    case TypeBase::Qbit: return "qbit";
    case TypeBase::Channel: return "channel";
    case TypeBase::ChannelEnd: return "channelEnd";
    }
    return "?";
}

std::string to_string(const TypeExpr &type) {
    if (type.payload) {
        return fmt::format("{}[{}]", to_string(type.base), to_string(*type.payload));
    }
    return to_string(type.base);
}

std::string_view to_string(SubKind kind) {
    switch (kind) {
    case SubKind::Procedure: return "procedure";
    case SubKind::Operator: return "operator";
    case SubKind::Qufunct: return "qufunct";
    }
    return "?";
}

std::string_view to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::Empty: return "Empty";
    case NodeKind::Program: return "Program";
    case NodeKind::VarDecl: return "VarDecl";
    case NodeKind::SubDecl: return "SubDecl";
    case NodeKind::Params: return "Params";
    case NodeKind::Param: return "Param";
    case NodeKind::Block: return "Block";
    case NodeKind::If: return "If";
    case NodeKind::QuantumIf: return "QuantumIf";
    case NodeKind::While: return "While";
    case NodeKind::DoUntil: return "DoUntil";
    case NodeKind::ForRange: return "ForRange";
    case NodeKind::Assign: return "Assign";
    case NodeKind::Call: return "Call";
    case NodeKind::InverseCall: return "InverseCall";
    case NodeKind::Measure: return "Measure";
    case NodeKind::MeasureIf: return "MeasureIf";
    case NodeKind::Reset: return "Reset";
    case NodeKind::Dump: return "Dump";
    case NodeKind::Print: return "Print";
    case NodeKind::Return: return "Return";
    case NodeKind::Send: return "Send";
    case NodeKind::SendTo: return "SendTo";
    case NodeKind::ReceiveFrom: return "ReceiveFrom";
    case NodeKind::Fork: return "Fork";
    case NodeKind::ChannelDecl: return "ChannelDecl";
    case NodeKind::AliasFor: return "AliasFor";
    case NodeKind::GateApply: return "GateApply";
    case NodeKind::Module: return "Module";
    case NodeKind::IntLit: return "IntLit";
    case NodeKind::RealLit: return "RealLit";
    case NodeKind::StringLit: return "StringLit";
    case NodeKind::BoolLit: return "BoolLit";
    case NodeKind::Ident: return "Ident";
    case NodeKind::Index: return "Index";
    case NodeKind::Slice: return "Slice";
    case NodeKind::Length: return "Length";
    case NodeKind::Concat: return "Concat";
    case NodeKind::Binary: return "Binary";
    case NodeKind::Unary: return "Unary";
    case NodeKind::CallExpr: return "CallExpr";
    case NodeKind::MeasureExpr: return "MeasureExpr";
    case NodeKind::RecvExpr: return "RecvExpr";
    case NodeKind::NewChannel: return "NewChannel";
    case NodeKind::MatrixLit: return "MatrixLit";
    case NodeKind::GateRef: return "GateRef";
    }
    return "?";
}

Node make_node(NodeKind kind, Span span, std::string text, std::vector<Node> children) {
    Node n;
    n.kind = kind;
    n.span = span;
    n.text = std::move(text);
    n.children = std::move(children);
    return n;
}

bool structurally_equal(const Node &a, const Node &b) {
    if (a.kind != b.kind || a.text != b.text || a.type != b.type || a.sub != b.sub ||
        a.cond != b.cond || a.is_extern != b.is_extern ||
        a.children.size() != b.children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!structurally_equal(a.children[i], b.children[i])) {
            return false;
        }
    }
    return true;
}

namespace {

void dump_into(const Node &n, int depth, std::string &out) {
    out += std::string(static_cast<std::size_t>(depth) * 2, ' ');
    out += to_string(n.kind);
    if (!n.text.empty()) {
        out += fmt::format(" '{}'", n.text);
    }
    if (n.kind == NodeKind::VarDecl || n.kind == NodeKind::Param || n.kind == NodeKind::SubDecl ||
        n.kind == NodeKind::ChannelDecl || n.kind == NodeKind::NewChannel) {
        out += fmt::format(" : {}", to_string(n.type));
    }
    if (n.kind == NodeKind::SubDecl) {
        out += fmt::format(" [{}{}{}]", n.is_extern ? "extern " : "", n.cond ? "cond " : "",
                           to_string(n.sub));
    }
    out += '\n';
    for (const auto &c : n.children) {
        dump_into(c, depth + 1, out);
    }
}

} // namespace

std::string debug_string(const Node &node) {
    std::string out;
    dump_into(node, 0, out);
    return out;
}

} // namespace qrl::frontend
