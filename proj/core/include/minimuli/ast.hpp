// Guest-language AST: raw shape produced by the parser, annotated in place
// by the type checker.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace minimuli {

using TypeId = std::uint32_t;
inline constexpr TypeId kNoType = ~TypeId{0};

struct SrcLoc {
    int line = 0;
    int col = 0;
};

// Static type of an expression or declaration. `cls` is meaningful only for
// Kind::Ref.
struct StaticType {
    enum class Kind { Int, Bool, Str, Ref };
    Kind kind = Kind::Int;
    TypeId cls = kNoType;

    bool operator==(const StaticType&) const = default;

    static StaticType intType() { return {Kind::Int, kNoType}; }
    static StaticType boolType() { return {Kind::Bool, kNoType}; }
    static StaticType strType() { return {Kind::Str, kNoType}; }
    static StaticType ref(TypeId t) { return {Kind::Ref, t}; }
    bool isRef() const { return kind == Kind::Ref; }
};

enum class BinOp { Add, Sub, Mul, Lt, Le, Gt, Ge, Eq, Ne, StructEq };

bool isComparison(BinOp op);
const char* binOpToken(BinOp op);

enum class ExprKind {
    IntLit,
    BoolLit,
    StrLit,
    LocalRef,
    ThisRef,
    FieldGet,
    Call,
    New,
    Binary,
    Cast,
    InstanceOf,
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    ExprKind kind;
    SrcLoc loc;

    long long intValue = 0;     // IntLit
    bool boolValue = false;     // BoolLit
    std::string strValue;       // StrLit
    std::string name;           // LocalRef / FieldGet / Call: member name; New/Cast/InstanceOf: type name
    ExprPtr lhs;                // Binary lhs; FieldGet/Call receiver; Cast/InstanceOf operand
    ExprPtr rhs;                // Binary rhs
    std::vector<ExprPtr> args;  // Call / New
    BinOp op = BinOp::Add;      // Binary

    // Filled by the type checker.
    StaticType type;
    TypeId fieldOwner = kNoType;     // FieldGet: class whose declaration the access resolves to
    StaticType fieldType;            // FieldGet
    TypeId targetType = kNoType;     // New / Cast / InstanceOf
    bool castStaticallyValid = true; // Cast / InstanceOf: target related to the static type
    bool refComparison = false;      // Binary Eq/Ne on two reference operands
    bool implicitThis = false;       // FieldGet / Call with a synthesized `this` receiver
};

enum class StmtKind { LocalDecl, Assign, If, Return, Fail, Println, ExprStmt };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
    StmtKind kind;
    SrcLoc loc;

    std::string typeName;  // LocalDecl
    std::string name;      // LocalDecl
    bool isFree = false;   // LocalDecl
    ExprPtr value;         // LocalDecl init / Assign rhs / Return value / Println arg / ExprStmt / If condition
    ExprPtr target;        // Assign lvalue
    std::vector<StmtPtr> thenBlock;
    std::vector<StmtPtr> elseBlock;

    StaticType declType;   // LocalDecl, resolved by the type checker
};

struct ParamDecl {
    std::string typeName;
    std::string name;
    SrcLoc loc;
    StaticType type;  // resolved
};

struct MethodDecl {
    std::string retTypeName;
    std::string name;
    std::vector<ParamDecl> params;
    bool isAbstract = false;
    bool hasBody = false;
    std::vector<StmtPtr> body;
    SrcLoc loc;
};

struct FieldDecl {
    std::string typeName;
    std::string name;
    SrcLoc loc;
};

struct ClassDecl {
    bool isInterface = false;
    std::string name;
    std::optional<std::string> extendsName;
    std::vector<std::string> implementsNames;
    std::vector<FieldDecl> fields;
    std::vector<MethodDecl> methods;
    SrcLoc loc;
};

struct Program {
    std::vector<ClassDecl> classes;
};

// Pretty-printer; emits canonical source that reparses to the same tree.
std::string printProgram(const Program& p);
std::string printExpr(const Expr& e);

}  // namespace minimuli
