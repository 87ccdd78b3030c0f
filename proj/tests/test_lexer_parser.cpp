#include <doctest.h>

#include <vector>

#include "minimuli/ast.hpp"
#include "minimuli/diagnostics.hpp"
#include "minimuli/lexer.hpp"
#include "minimuli/parser.hpp"
#include "support/sources.hpp"

using namespace minimuli;

namespace {

std::vector<Tok> kinds(const std::string& src) {
    std::vector<Tok> out;
    for (const Token& t : lex(src)) out.push_back(t.kind);
    return out;
}

// Parses a statement by wrapping it in a minimal method body.
const Stmt& firstStmt(Program& holder, const std::string& stmt) {
    holder = parse("class T { int m() { " + stmt + " } }");
    return *holder.classes.at(0).methods.at(0).body.at(0);
}

}  // namespace

TEST_CASE("keywords, identifiers, and operators tokenize") {
    auto ks = kinds("class free x #= == != <= >=");
    CHECK(ks == std::vector<Tok>{Tok::KwClass, Tok::KwFree, Tok::Ident, Tok::HashEq,
                                 Tok::EqEq, Tok::NotEq, Tok::Le, Tok::Ge, Tok::End});
}

TEST_CASE("line comments are skipped") {
    auto ks = kinds("int // the rest is ignored #= class\nx");
    CHECK(ks == std::vector<Tok>{Tok::KwInt, Tok::Ident, Tok::End});
}

TEST_CASE("string escapes decode") {
    auto toks = lex(R"("a\nb\t\"q\\")");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0].kind == Tok::StrLit);
    CHECK(toks[0].text == "a\nb\t\"q\\");
}

TEST_CASE("integer literals carry their value") {
    auto toks = lex("1234");
    CHECK(toks[0].intValue == 1234);
}

TEST_CASE("positions are 1-based line and column") {
    auto toks = lex("a\n  bb");
    CHECK(toks[0].line == 1);
    CHECK(toks[0].col == 1);
    CHECK(toks[1].line == 2);
    CHECK(toks[1].col == 3);
}

TEST_CASE("malformed input raises a positioned error") {
    CHECK_THROWS_AS(lex("$"), CompileError);
    CHECK_THROWS_AS(lex("\"unterminated"), CompileError);
    CHECK_THROWS_AS(lex("\"bad \\q escape\""), CompileError);
    // '#' only forms '#='.
    CHECK_THROWS_AS(lex("a # b"), CompileError);
}

TEST_CASE("multiplication binds tighter than addition") {
    Program holder;
    const Stmt& s = firstStmt(holder, "return 1 + 2 * 3;");
    CHECK(printExpr(*s.value) == "(1 + (2 * 3))");
}

TEST_CASE("comparisons sit above arithmetic and below equality") {
    Program holder;
    const Stmt& s = firstStmt(holder, "return a + 1 < b == c #= d;");
    CHECK(printExpr(*s.value) == "((((a + 1) < b) == c) #= d)");
}

TEST_CASE("unary minus desugars to subtraction from zero") {
    Program holder;
    const Stmt& s = firstStmt(holder, "return -x;");
    REQUIRE(s.value->kind == ExprKind::Binary);
    CHECK(s.value->op == BinOp::Sub);
    CHECK(s.value->lhs->kind == ExprKind::IntLit);
    CHECK(s.value->lhs->intValue == 0);
    CHECK(printExpr(*s.value) == "(0 - x)");
}

TEST_CASE("a parenthesized name is an expression, not a cast") {
    Program holder;
    const Stmt& cast = firstStmt(holder, "return (B) x;");
    CHECK(cast.value->kind == ExprKind::Cast);
    CHECK(cast.value->name == "B");

    Program holder2;
    const Stmt& paren = firstStmt(holder2, "return (x) + 1;");
    REQUIRE(paren.value->kind == ExprKind::Binary);
    CHECK(paren.value->lhs->kind == ExprKind::LocalRef);
}

TEST_CASE("postfix chains nest left to right") {
    Program holder;
    const Stmt& s = firstStmt(holder, "return a.b.c(1).d;");
    CHECK(printExpr(*s.value) == "a.b.c(1).d");
    const Expr& d = *s.value;
    CHECK(d.kind == ExprKind::FieldGet);
    CHECK(d.lhs->kind == ExprKind::Call);
}

TEST_CASE("a bare call keeps a null receiver for the checker") {
    Program holder;
    const Stmt& s = firstStmt(holder, "return go(1, 2);");
    REQUIRE(s.value->kind == ExprKind::Call);
    CHECK(s.value->lhs == nullptr);
    CHECK(s.value->implicitThis);
    CHECK(s.value->args.size() == 2);
}

TEST_CASE("declarations and statements parse into the expected shapes") {
    Program holder;
    CHECK(firstStmt(holder, "int x free;").isFree);
    CHECK(firstStmt(holder, "Shape s = new Shape();").value->kind == ExprKind::New);
    CHECK(firstStmt(holder, "fail();").kind == StmtKind::Fail);
    CHECK(firstStmt(holder, "println(1);").kind == StmtKind::Println);
    CHECK(firstStmt(holder, "x = 1;").kind == StmtKind::Assign);
    CHECK(firstStmt(holder, "a.f = 1;").target->kind == ExprKind::FieldGet);
    CHECK(firstStmt(holder, "go();").kind == StmtKind::ExprStmt);
    const Stmt& iff = firstStmt(holder, "if (a < b) { return 1; } else { return 2; }");
    CHECK(iff.kind == StmtKind::If);
    CHECK(iff.thenBlock.size() == 1);
    CHECK(iff.elseBlock.size() == 1);
}

TEST_CASE("class headers parse fully") {
    Program p = parse(
        "interface I { int area(); }\n"
        "class A extends B implements I, J { int f; abstract int g(); int h(int q) { return q; } }");
    CHECK(p.classes[0].isInterface);
    CHECK_FALSE(p.classes[0].methods[0].hasBody);
    const ClassDecl& a = p.classes[1];
    CHECK(a.extendsName == "B");
    CHECK(a.implementsNames == std::vector<std::string>{"I", "J"});
    CHECK(a.fields.size() == 1);
    CHECK(a.methods[0].isAbstract);
    CHECK(a.methods[1].params.size() == 1);
}

TEST_CASE("syntax errors carry position and expectations") {
    try {
        parse("class A { int f }");
        FAIL("should not parse");
    } catch (const CompileError& e) {
        CHECK(e.line() == 1);
        CHECK_FALSE(e.expected().empty());
    }
    CHECK_THROWS_AS(parse(""), CompileError);
    CHECK_THROWS_AS(parse("class A { int m() { 1 = x; } }"), CompileError);
    CHECK_THROWS_AS(parse("class A { int i free; }"), CompileError);
}

TEST_CASE("pretty-printed corpus sources reparse to the same text") {
    for (const char* name :
         {"shapes.muli", "dispatch.muli", "fields.muli", "refeq.muli", "typeops.muli",
          "structeq.muli", "structeq_free.muli", "equals.muli", "arith.muli",
          "trivial.muli", "allfail.muli", "cycle.muli", "nested_free.muli"}) {
        std::string src = testsupport::readFile(testsupport::corpusPath(name));
        std::string once = printProgram(parse(src));
        std::string twice = printProgram(parse(once));
        CHECK(once == twice);
    }
}
