#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrl/frontend/source.hpp"

namespace qrl::frontend {

enum class TypeBase {
    Void,
    Int,
    Real,
    Bool,
    String,
    Qureg,
    Quconst,
    Quvoid,
    Quscratch,
    Qbit,
    Channel,
    ChannelEnd,
};

struct TypeExpr {
    TypeBase base = TypeBase::Void;
    /// Element type of channel[T] and channelEnd[T].
    std::optional<TypeBase> payload;

    [[nodiscard]] bool is_quantum() const;
    [[nodiscard]] bool is_channel() const { return base == TypeBase::Channel || base == TypeBase::ChannelEnd; }
    /// Values that may not be duplicated: registers and channel ends.
    [[nodiscard]] bool is_linear() const { return is_quantum() || base == TypeBase::ChannelEnd; }
    friend bool operator==(const TypeExpr &, const TypeExpr &) = default;
};

std::string to_string(TypeBase base);
std::string to_string(const TypeExpr &type);

enum class SubKind { Procedure, Operator, Qufunct };

std::string_view to_string(SubKind kind);

// Child layout per kind. "opt" slots hold an Empty node when absent.
enum class NodeKind {
    Empty,
    // statements
    Program,     // children: statements
    VarDecl,     // text=name, type; children: [length opt, init opt]
    SubDecl,     // text=name, sub, cond, is_extern, type=return (Void if none);
                 // children: [Params, Block opt]
    Params,      // children: Param
    Param,       // text=name, type
    Block,       // children: statements
    If,          // children: [cond, Block, else opt (Block or If)]
    QuantumIf,   // same layout as If; produced by the checker
    While,       // children: [cond, Block]
    DoUntil,     // children: [Block, cond]
    ForRange,    // text=var; children: [from, to, step opt, Block]
    Assign,      // children: [target, value]
    Call,        // text=name; children: args
    InverseCall, // text=name; children: args
    Measure,     // children: [register, variable opt]
    MeasureIf,   // children: [register, Block, else opt]
    Reset,       // children: [register opt]
    Dump,        // children: [register opt]
    Print,       // children: items
    Return,      // children: [value opt]
    Send,        // children: [channel end, value]
    SendTo,      // text=receiver module; children: values
    ReceiveFrom, // text=sender module; children: Param
    Fork,        // text=name; children: args
    ChannelDecl, // text=name, type; children: [Ident end0, Ident end1]
    AliasFor,    // text=name; children: Ident parts
    GateApply,   // children: [GateRef or MatrixLit, targets...]
    Module,      // text=name; children: [Block]
    // expressions
    IntLit,
    RealLit,
    StringLit,
    BoolLit,
    Ident,
    Index,       // children: [base, index]
    Slice,       // children: [base, offset, length]
    Length,      // children: [operand]
    Concat,      // children: [lhs, rhs]
    Binary,      // text=operator; children: [lhs, rhs]
    Unary,       // text=operator; children: [operand]
    CallExpr,    // text=name; children: args
    MeasureExpr, // children: operands (a leading Ident may name a basis)
    RecvExpr,    // children: [channel end]
    NewChannel,  // type
    MatrixLit,   // children: entries in row-major order
    GateRef,     // text=name; children: parameters
};

std::string_view to_string(NodeKind kind);

struct Node {
    NodeKind kind = NodeKind::Empty;
    Span span;
    std::string text;
    TypeExpr type;
    SubKind sub = SubKind::Procedure;
    bool cond = false;
    bool is_extern = false;
    std::vector<Node> children;

    [[nodiscard]] bool empty() const noexcept { return kind == NodeKind::Empty; }
    [[nodiscard]] const Node &operator[](std::size_t i) const { return children.at(i); }
    Node &operator[](std::size_t i) { return children.at(i); }
};

Node make_node(NodeKind kind, Span span, std::string text = {}, std::vector<Node> children = {});

/// Equality of everything except spans.
bool structurally_equal(const Node &a, const Node &b);

/// Indented tree dump for debugging and test failure messages.
std::string debug_string(const Node &node);

} // namespace qrl::frontend
