// Recursive-descent parser. Two tokens of lookahead disambiguate local
// declarations from expression statements, and a bounded scan disambiguates
// casts from parenthesized expressions.

#include "minimuli/parser.hpp"

#include <utility>

#include "minimuli/diagnostics.hpp"
#include "minimuli/lexer.hpp"

namespace minimuli {

namespace {

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program parseProgram() {
        Program p;
        while (cur().kind != Tok::End) p.classes.push_back(parseClassDecl());
        if (p.classes.empty())
            throw err("expected a class or interface declaration", {"'class'", "'interface'"});
        return p;
    }

private:
    const Token& cur(size_t off = 0) const {
        size_t i = pos_ + off;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    CompileError err(const std::string& msg, std::vector<std::string> expected = {}) const {
        return CompileError(msg, cur().line, cur().col, std::move(expected));
    }

    Token expect(Tok kind) {
        if (cur().kind != kind)
            throw err(std::string("unexpected ") + describe(cur()), {tokName(kind)});
        return take();
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::Ident) return "identifier '" + t.text + "'";
        if (t.kind == Tok::End) return "end of input";
        return std::string(tokName(t.kind));
    }

    bool at(Tok k) const { return cur().kind == k; }

    static bool isTypeToken(Tok k) {
        return k == Tok::KwInt || k == Tok::KwBoolean || k == Tok::KwString || k == Tok::Ident;
    }

    std::string parseTypeName() {
        if (!isTypeToken(cur().kind))
            throw err(std::string("unexpected ") + describe(cur()),
                      {"'int'", "'boolean'", "'String'", "identifier"});
        return take().text;
    }

    ClassDecl parseClassDecl() {
        ClassDecl c;
        c.loc = {cur().line, cur().col};
        if (at(Tok::KwInterface)) {
            c.isInterface = true;
            take();
        } else if (at(Tok::KwClass)) {
            take();
        } else {
            throw err(std::string("unexpected ") + describe(cur()), {"'class'", "'interface'"});
        }
        c.name = expect(Tok::Ident).text;
        if (at(Tok::KwExtends)) {
            take();
            c.extendsName = expect(Tok::Ident).text;
        }
        if (at(Tok::KwImplements)) {
            take();
            c.implementsNames.push_back(expect(Tok::Ident).text);
            while (at(Tok::Comma)) {
                take();
                c.implementsNames.push_back(expect(Tok::Ident).text);
            }
        }
        expect(Tok::LBrace);
        while (!at(Tok::RBrace)) parseMember(c);
        expect(Tok::RBrace);
        return c;
    }

    void parseMember(ClassDecl& c) {
        SrcLoc loc{cur().line, cur().col};
        bool isAbstract = false;
        if (at(Tok::KwAbstract)) {
            isAbstract = true;
            take();
        }
        std::string typeName = parseTypeName();
        std::string name = expect(Tok::Ident).text;
        if (at(Tok::Semi) && !isAbstract) {
            take();
            c.fields.push_back(FieldDecl{typeName, name, loc});
            return;
        }
        if (!at(Tok::LParen)) {
            // Rejects e.g. `int i free;` as a field: `free` is a local-only marker.
            throw err(std::string("unexpected ") + describe(cur()) + " in member declaration",
                      {"';'", "'('"});
        }
        MethodDecl m;
        m.loc = loc;
        m.retTypeName = std::move(typeName);
        m.name = std::move(name);
        m.isAbstract = isAbstract;
        take();  // (
        if (!at(Tok::RParen)) {
            m.params.push_back(parseParam());
            while (at(Tok::Comma)) {
                take();
                m.params.push_back(parseParam());
            }
        }
        expect(Tok::RParen);
        if (at(Tok::Semi)) {
            take();
            m.hasBody = false;
        } else {
            m.hasBody = true;
            m.body = parseBlock();
        }
        c.methods.push_back(std::move(m));
    }

    ParamDecl parseParam() {
        ParamDecl p;
        p.loc = {cur().line, cur().col};
        p.typeName = parseTypeName();
        p.name = expect(Tok::Ident).text;
        return p;
    }

    std::vector<StmtPtr> parseBlock() {
        expect(Tok::LBrace);
        std::vector<StmtPtr> stmts;
        while (!at(Tok::RBrace)) stmts.push_back(parseStmt());
        expect(Tok::RBrace);
        return stmts;
    }

    StmtPtr parseStmt() {
        SrcLoc loc{cur().line, cur().col};
        switch (cur().kind) {
            case Tok::KwIf: return parseIf();
            case Tok::KwReturn: {
                take();
                auto s = std::make_unique<Stmt>();
                s->kind = StmtKind::Return;
                s->loc = loc;
                if (!at(Tok::Semi)) s->value = parseExpr();
                expect(Tok::Semi);
                return s;
            }
            case Tok::KwFail: {
                take();
                expect(Tok::LParen);
                expect(Tok::RParen);
                expect(Tok::Semi);
                auto s = std::make_unique<Stmt>();
                s->kind = StmtKind::Fail;
                s->loc = loc;
                return s;
            }
            case Tok::KwPrintln: {
                take();
                expect(Tok::LParen);
                auto s = std::make_unique<Stmt>();
                s->kind = StmtKind::Println;
                s->loc = loc;
                s->value = parseExpr();
                expect(Tok::RParen);
                expect(Tok::Semi);
                return s;
            }
            case Tok::KwInt:
            case Tok::KwBoolean:
            case Tok::KwString:
                return parseLocalDecl();
            case Tok::Ident:
                if (cur(1).kind == Tok::Ident) return parseLocalDecl();
                [[fallthrough]];
            default:
                return parseExprOrAssign();
        }
    }

    StmtPtr parseIf() {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::If;
        s->loc = {cur().line, cur().col};
        expect(Tok::KwIf);
        expect(Tok::LParen);
        s->value = parseExpr();
        expect(Tok::RParen);
        s->thenBlock = parseBlock();
        if (at(Tok::KwElse)) {
            take();
            s->elseBlock = parseBlock();
        }
        return s;
    }

    StmtPtr parseLocalDecl() {
        auto s = std::make_unique<Stmt>();
        s->kind = StmtKind::LocalDecl;
        s->loc = {cur().line, cur().col};
        s->typeName = parseTypeName();
        s->name = expect(Tok::Ident).text;
        if (at(Tok::KwFree)) {
            take();
            s->isFree = true;
        } else if (at(Tok::Assign)) {
            take();
            s->value = parseExpr();
        }
        expect(Tok::Semi);
        return s;
    }

    StmtPtr parseExprOrAssign() {
        auto s = std::make_unique<Stmt>();
        s->loc = {cur().line, cur().col};
        ExprPtr e = parseExpr();
        if (at(Tok::Assign)) {
            if (e->kind != ExprKind::LocalRef && e->kind != ExprKind::FieldGet)
                throw err("left side of assignment is not assignable");
            take();
            s->kind = StmtKind::Assign;
            s->target = std::move(e);
            s->value = parseExpr();
        } else {
            s->kind = StmtKind::ExprStmt;
            s->value = std::move(e);
        }
        expect(Tok::Semi);
        return s;
    }

    // expr := equality, layered by precedence. `#=` sits with `==`/`!=`.
    ExprPtr parseExpr() { return parseEquality(); }

    ExprPtr parseEquality() {
        ExprPtr e = parseRelational();
        while (at(Tok::EqEq) || at(Tok::NotEq) || at(Tok::HashEq)) {
            BinOp op = at(Tok::EqEq) ? BinOp::Eq : at(Tok::NotEq) ? BinOp::Ne : BinOp::StructEq;
            SrcLoc loc{cur().line, cur().col};
            take();
            e = makeBinary(op, std::move(e), parseRelational(), loc);
        }
        return e;
    }

    ExprPtr parseRelational() {
        ExprPtr e = parseAdditive();
        while (true) {
            if (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
                BinOp op = at(Tok::Lt)   ? BinOp::Lt
                           : at(Tok::Le) ? BinOp::Le
                           : at(Tok::Gt) ? BinOp::Gt
                                         : BinOp::Ge;
                SrcLoc loc{cur().line, cur().col};
                take();
                e = makeBinary(op, std::move(e), parseAdditive(), loc);
            } else if (at(Tok::KwInstanceof)) {
                SrcLoc loc{cur().line, cur().col};
                take();
                auto n = std::make_unique<Expr>();
                n->kind = ExprKind::InstanceOf;
                n->loc = loc;
                n->name = expect(Tok::Ident).text;
                n->lhs = std::move(e);
                e = std::move(n);
            } else {
                return e;
            }
        }
    }

    ExprPtr parseAdditive() {
        ExprPtr e = parseMultiplicative();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
            SrcLoc loc{cur().line, cur().col};
            take();
            e = makeBinary(op, std::move(e), parseMultiplicative(), loc);
        }
        return e;
    }

    ExprPtr parseMultiplicative() {
        ExprPtr e = parseUnary();
        while (at(Tok::Star)) {
            SrcLoc loc{cur().line, cur().col};
            take();
            e = makeBinary(BinOp::Mul, std::move(e), parseUnary(), loc);
        }
        return e;
    }

    static bool startsUnary(Tok k) {
        switch (k) {
            case Tok::Ident:
            case Tok::IntLit:
            case Tok::StrLit:
            case Tok::KwTrue:
            case Tok::KwFalse:
            case Tok::KwThis:
            case Tok::KwNew:
            case Tok::LParen:
            case Tok::Minus:
                return true;
            default:
                return false;
        }
    }

    ExprPtr parseUnary() {
        if (at(Tok::Minus)) {
            // Desugars unary minus to `0 - e`.
            SrcLoc loc{cur().line, cur().col};
            take();
            auto zero = std::make_unique<Expr>();
            zero->kind = ExprKind::IntLit;
            zero->loc = loc;
            zero->intValue = 0;
            return makeBinary(BinOp::Sub, std::move(zero), parseUnary(), loc);
        }
        if (at(Tok::LParen) && cur(1).kind == Tok::Ident && cur(2).kind == Tok::RParen &&
            startsUnary(cur(3).kind)) {
            SrcLoc loc{cur().line, cur().col};
            take();  // (
            auto c = std::make_unique<Expr>();
            c->kind = ExprKind::Cast;
            c->loc = loc;
            c->name = take().text;
            take();  // )
            c->lhs = parseUnary();
            return c;
        }
        return parsePostfix();
    }

    ExprPtr parsePostfix() {
        ExprPtr e = parsePrimary();
        while (at(Tok::Dot)) {
            SrcLoc loc{cur().line, cur().col};
            take();
            std::string member = expect(Tok::Ident).text;
            auto n = std::make_unique<Expr>();
            n->loc = loc;
            n->name = std::move(member);
            n->lhs = std::move(e);
            if (at(Tok::LParen)) {
                n->kind = ExprKind::Call;
                n->args = parseArgs();
            } else {
                n->kind = ExprKind::FieldGet;
            }
            e = std::move(n);
        }
        return e;
    }

    std::vector<ExprPtr> parseArgs() {
        expect(Tok::LParen);
        std::vector<ExprPtr> args;
        if (!at(Tok::RParen)) {
            args.push_back(parseExpr());
            while (at(Tok::Comma)) {
                take();
                args.push_back(parseExpr());
            }
        }
        expect(Tok::RParen);
        return args;
    }

    ExprPtr parsePrimary() {
        SrcLoc loc{cur().line, cur().col};
        switch (cur().kind) {
            case Tok::IntLit: {
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::IntLit;
                e->loc = loc;
                e->intValue = take().intValue;
                return e;
            }
            case Tok::StrLit: {
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::StrLit;
                e->loc = loc;
                e->strValue = take().text;
                return e;
            }
            case Tok::KwTrue:
            case Tok::KwFalse: {
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::BoolLit;
                e->loc = loc;
                e->boolValue = take().kind == Tok::KwTrue;
                return e;
            }
            case Tok::KwThis: {
                take();
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::ThisRef;
                e->loc = loc;
                return e;
            }
            case Tok::KwNew: {
                take();
                auto e = std::make_unique<Expr>();
                e->kind = ExprKind::New;
                e->loc = loc;
                e->name = expect(Tok::Ident).text;
                e->args = parseArgs();
                return e;
            }
            case Tok::Ident: {
                auto e = std::make_unique<Expr>();
                e->loc = loc;
                e->name = take().text;
                if (at(Tok::LParen)) {
                    // Implicit-this call; the checker binds the receiver.
                    e->kind = ExprKind::Call;
                    e->implicitThis = true;
                    e->args = parseArgs();
                } else {
                    e->kind = ExprKind::LocalRef;
                }
                return e;
            }
            case Tok::LParen: {
                take();
                ExprPtr inner = parseExpr();
                expect(Tok::RParen);
                return inner;
            }
            default:
                throw err(std::string("unexpected ") + describe(cur()) + " in expression",
                          {"identifier", "integer literal", "string literal", "'true'", "'false'",
                           "'this'", "'new'", "'('", "'-'"});
        }
    }

    ExprPtr makeBinary(BinOp op, ExprPtr l, ExprPtr r, SrcLoc loc) {
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::Binary;
        e->loc = loc;
        e->op = op;
        e->lhs = std::move(l);
        e->rhs = std::move(r);
        return e;
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
};

}  // namespace

Program parse(const std::string& source) {
    return Parser(lex(source)).parseProgram();
}

}  // namespace minimuli
