#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "qrl/frontend/lexer.hpp"
#include "qrl/frontend/parser.hpp"
#include "qrl/frontend/pretty.hpp"

namespace qrl::frontend {
namespace {

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::filesystem::path kGolden = QRL_TEST_DATA_DIR "/golden";
const std::filesystem::path kPrograms = QRL_PROGRAMS_DIR;

void expect_round_trip(const std::string &source) {
    const Node first = parse_source(source);
    const std::string printed = pretty(first);
    Node second;
    ASSERT_NO_THROW(second = parse_source(printed)) << printed;
    EXPECT_TRUE(structurally_equal(first, second))
        << "printed:\n" << printed << "\nfirst:\n" << debug_string(first) << "\nsecond:\n"
        << debug_string(second);
    EXPECT_EQ(pretty(second), printed);
}

TEST(Lexer, QclDeclarationWithComment) {
    const auto toks = lex("qureg x1[2]; // comment");
    ASSERT_EQ(toks.size(), 6U);
    EXPECT_TRUE(toks[0].is_keyword("qureg"));
    EXPECT_EQ(toks[1].kind, TokenKind::Identifier);
    EXPECT_EQ(toks[1].text, "x1");
    EXPECT_TRUE(toks[2].is_symbol("["));
    EXPECT_EQ(toks[3].kind, TokenKind::Integer);
    EXPECT_TRUE(toks[4].is_symbol("]"));
    EXPECT_TRUE(toks[5].is_symbol(";"));
}

TEST(Lexer, EmptyInput) { EXPECT_TRUE(lex("").empty()); }

TEST(Lexer, IllegalCharacter) {
    try {
        lex("@");
        FAIL();
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.kind(), ErrorKind::LexError);
        EXPECT_EQ(e.span().line, 1U);
        EXPECT_EQ(e.span().column, 1U);
    }
}

TEST(Lexer, SliceIsNotReal) {
    const auto toks = lex("x[0::i] 0.5 1e-3");
    EXPECT_EQ(toks[2].kind, TokenKind::Integer);
    EXPECT_TRUE(toks[3].is_symbol("::"));
    EXPECT_EQ(toks[6].kind, TokenKind::Real);
    EXPECT_EQ(toks[7].kind, TokenKind::Real);
}

TEST(Lexer, SpansIncrease) {
    const auto toks = lex("qureg a[2];\nH(a & b);\n/* block\ncomment */ dump;");
    for (std::size_t i = 1; i < toks.size(); ++i) {
        EXPECT_GE(toks[i].span.offset, toks[i - 1].span.offset + toks[i - 1].span.length);
    }
    EXPECT_EQ(toks.back().span.line, 4U);
}

TEST(Lexer, UnterminatedComment) {
    EXPECT_THROW(lex("a; /* never closed"), SyntaxError);
}

TEST(Parser, DiffuseListing) {
    const Node prog = parse_source(read_file(kGolden / "qcl_diffuse.qrl"));
    ASSERT_EQ(prog.children.size(), 1U);
    const Node &sub = prog[0];
    EXPECT_EQ(sub.kind, NodeKind::SubDecl);
    EXPECT_EQ(sub.sub, SubKind::Operator);
    const Node &body = sub[1];
    ASSERT_EQ(body.children.size(), 5U);
    EXPECT_EQ(body[0].kind, NodeKind::Call);
    EXPECT_EQ(body[3].kind, NodeKind::InverseCall);
    EXPECT_EQ(body[4].kind, NodeKind::InverseCall);
    EXPECT_EQ(body[4].text, "H");
}

TEST(Parser, QuantumIfWithInverse) {
    const Node prog = parse_source("if e { !inc(q); }");
    const Node &n = prog[0];
    EXPECT_EQ(n.kind, NodeKind::If);
    EXPECT_EQ(n[0].kind, NodeKind::Ident);
    EXPECT_EQ(n[1][0].kind, NodeKind::InverseCall);
    EXPECT_EQ(n[1][0].text, "inc");
}

TEST(Parser, ForRangeWithNegativeStep) {
    const Node n = parse_source("for i = #x-1 to 0 step -1 { }")[0];
    EXPECT_EQ(n.kind, NodeKind::ForRange);
    EXPECT_EQ(n.text, "i");
    EXPECT_EQ(n[0].kind, NodeKind::Binary);
    EXPECT_EQ(n[0].text, "-");
    EXPECT_EQ(n[0][0].kind, NodeKind::Length);
    EXPECT_EQ(n[2].kind, NodeKind::Unary);
}

TEST(Parser, SliceAndConcatPrecedence) {
    const Node call = parse_source("CNot(x[i],x[0::i] & e);")[0];
    ASSERT_EQ(call.children.size(), 2U);
    EXPECT_EQ(call[0].kind, NodeKind::Index);
    EXPECT_EQ(call[1].kind, NodeKind::Concat);
    EXPECT_EQ(call[1][0].kind, NodeKind::Slice);
}

TEST(Parser, MultipleDeclaratorsSplit) {
    const Node prog = parse_source("qbit psi1, psi2; qureg q[4];qureg e[1];");
    ASSERT_EQ(prog.children.size(), 4U);
    EXPECT_EQ(prog[1].text, "psi2");
    EXPECT_EQ(prog[2][0].text, "4");
}

TEST(Parser, CqplForms) {
    const Node prog = parse_source(read_file(kGolden / "cqpl_basic.qrl"));
    ASSERT_EQ(prog.children.size(), 4U);
    EXPECT_EQ(prog[0].kind, NodeKind::VarDecl);
    EXPECT_EQ(prog[0].type.base, TypeBase::Qbit);
    EXPECT_EQ(prog[2].kind, NodeKind::GateApply);
    EXPECT_EQ(prog[2].children.size(), 3U);
    EXPECT_EQ(prog[3][0].text, "Phase");
    EXPECT_EQ(prog[3][0][0].text, "0.5");
}

TEST(Parser, MatrixLiteral) {
    const Node n = parse_source("q *= [[ 1,0,0,-1 ]];")[0];
    EXPECT_EQ(n[0].kind, NodeKind::MatrixLit);
    EXPECT_EQ(n[0].children.size(), 4U);
}

TEST(Parser, EqualityInsideCondition) {
    const Node n = parse_source("if (m1 = 1) then { }")[0];
    EXPECT_EQ(n[0].text, "==");
}

TEST(Parser, ErrorNamesExpectation) {
    try {
        parse_source("qureg a[2]");
        FAIL();
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("';'"), std::string::npos);
    }
}

TEST(Parser, AllGoldenListingsExceptBrokenCqplTeleportParse) {
    for (const auto &entry : std::filesystem::directory_iterator(kGolden)) {
        const std::string name = entry.path().filename().string();
        if (name == "cqpl_teleport.qrl") {
            // The listing opens a block comment it never closes and leaves
            // module Alice without its closing brace.
            EXPECT_THROW(parse_source(read_file(entry.path())), SyntaxError);
            continue;
        }
        EXPECT_NO_THROW(parse_source(read_file(entry.path()))) << name;
    }
}

TEST(Parser, ShippedProgramsParse) {
    std::size_t count = 0;
    for (const auto &entry : std::filesystem::directory_iterator(kPrograms)) {
        EXPECT_NO_THROW(parse_source(read_file(entry.path()))) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 7U);
}

TEST(Pretty, EmptyProgram) { EXPECT_EQ(pretty(parse_source("")), ""); }

TEST(Pretty, VarDecl) { EXPECT_EQ(pretty(parse_source("qureg x [ 2 ] ;")), "qureg x[2];\n"); }

TEST(Pretty, RoundTripGoldenAndPrograms) {
    for (const auto &dir : {kGolden, kPrograms}) {
        for (const auto &entry : std::filesystem::directory_iterator(dir)) {
            if (entry.path().filename() == "cqpl_teleport.qrl" && dir == kGolden) {
                continue;
            }
            SCOPED_TRACE(entry.path().string());
            expect_round_trip(read_file(entry.path()));
        }
    }
}

// Random expression generator for the round-trip property.
class ExprGen {
  public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    std::string gen(int depth) {
        const int pick = depth <= 0 ? static_cast<int>(rng_() % 4) : static_cast<int>(rng_() % 14);
        switch (pick) {
        case 0: return std::to_string(rng_() % 10);
        case 1: return "x" + std::to_string(rng_() % 3);
        case 2: return "0.25";
        case 3: return "\"s\"";
        case 4: return gen(depth - 1) + " + " + gen(depth - 1);
        case 5: return gen(depth - 1) + " - " + gen(depth - 1);
        case 6: return gen(depth - 1) + " * " + gen(depth - 1);
        case 7: return "-" + gen(depth - 1);
        case 8: return "(" + gen(depth - 1) + ")";
        case 9: return gen(depth - 1) + " ^ " + gen(depth - 1);
        case 10: return "#x0 & x1[" + gen(depth - 1) + "]";
        case 11: return "(" + gen(depth - 1) + " == " + gen(depth - 1) + ")";
        case 12: return "(not " + gen(depth - 1) + " and " + gen(depth - 1) + ")";
        default: return "f(" + gen(depth - 1) + ", x2[1::" + gen(depth - 1) + "])";
        }
    }

  private:
    std::mt19937_64 rng_;
};

TEST(Pretty, RoundTripRandomExpressions) {
    ExprGen gen(42);
    for (int i = 0; i < 300; ++i) {
        const std::string src = "y = " + gen.gen(4) + ";";
        SCOPED_TRACE(src);
        expect_round_trip(src);
    }
}

TEST(Pretty, RoundTripRandomStatements) {
    std::mt19937_64 rng(7);
    const std::vector<std::string> pieces = {
        "qureg a[2];",        "H(a);",          "!inc(q);",           "measure y, m;",
        "reset;",             "dump;",          "print \"v\", m;",    "x1, x2 *= CNot;",
        "q *= Phase 0.5;",    "send (c0, i);",  "send m1, m2 to Bob;", "receive q:qbit from Alice;",
        "fork alice(c0, p);", "p aliasfor [a, b];", "i = recv(c1);",   "c = new channel[int]();",
        "new int k := 3;",    "m := measure t;", "return m;",          "call f(a, b);",
    };
    auto wrap = [&](const std::string &inner, std::size_t choice) {
        switch (choice % 6) {
        case 0: return "if a { " + inner + " }";
        case 1: return "while (k > 0) do { " + inner + " };";
        case 2: return "{ " + inner + " } until m == 1;";
        case 3: return "for i = 0 to 3 step 1 { " + inner + " }";
        case 4: return "measure a then { " + inner + " } else { " + inner + " };";
        default: return "if (i == 1) { " + inner + " } else if (i == 2) { " + inner + " }";
        }
    };
    for (int i = 0; i < 250; ++i) {
        std::string src;
        for (int k = 0; k < 4; ++k) {
            std::string s = pieces[rng() % pieces.size()];
            if (rng() % 2 == 0) {
                s = wrap(s, rng());
            }
            src += s + "\n";
        }
        if (rng() % 3 == 0) {
            src = "cond operator op(qureg a, quconst b) {\n" + src + "}\n";
        }
        SCOPED_TRACE(src);
        expect_round_trip(src);
    }
}

TEST(Parser, ErrorSpansWithinSource) {
    std::mt19937_64 rng(3);
    const std::string base = read_file(kGolden / "qcl_deutsch.qrl");
    for (int i = 0; i < 200; ++i) {
        std::string src = base;
        const std::size_t cut = rng() % src.size();
        src.erase(cut, 1 + rng() % 5);
        try {
            parse_source(src);
        } catch (const SyntaxError &e) {
            EXPECT_LE(e.span().offset + e.span().length, src.size());
        }
    }
}

} // namespace
} // namespace qrl::frontend
