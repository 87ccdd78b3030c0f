#include "minimuli/typecheck.hpp"

#include <map>
#include <vector>

#include "minimuli/diagnostics.hpp"

namespace minimuli {

namespace {

std::string typeName(const ClassTable& table, const StaticType& t) {
    switch (t.kind) {
        case StaticType::Kind::Int: return "int";
        case StaticType::Kind::Bool: return "boolean";
        case StaticType::Kind::Str: return "String";
        case StaticType::Kind::Ref: return table.name(t.cls);
    }
    return "?";
}

class Checker {
public:
    Checker(Program& program, const ClassTable& table) : prog_(program), table_(table) {}

    void run() {
        for (auto& cls : prog_.classes) {
            if (cls.isInterface) continue;
            thisCls_ = *table_.lookup(cls.name);
            for (auto& m : cls.methods) checkMethod(m);
        }
    }

private:
    [[noreturn]] void fail(const SrcLoc& loc, const std::string& msg) const {
        throw CompileError(msg, loc.line, loc.col);
    }

    StaticType resolveTypeName(const std::string& name, const SrcLoc& loc) const {
        if (name == "int") return StaticType::intType();
        if (name == "boolean") return StaticType::boolType();
        if (name == "String") return StaticType::strType();
        if (auto id = table_.lookup(name)) return StaticType::ref(*id);
        fail(loc, "unknown type '" + name + "'");
    }

    bool assignable(const StaticType& src, const StaticType& dst) const {
        if (src.kind != dst.kind) return false;
        if (!src.isRef()) return true;
        return table_.isSubtypeOrSame(src.cls, dst.cls);
    }

    // A static type pair can only ever describe the same object when their
    // instantiable cones overlap.
    bool conesOverlap(TypeId a, TypeId b) const {
        return !intersectSets(table_.instantiableCone(a), table_.instantiableCone(b)).empty();
    }

    const StaticType* lookupLocal(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        return nullptr;
    }

    void declareLocal(const std::string& name, StaticType type, const SrcLoc& loc) {
        for (const auto& scope : scopes_)
            if (scope.count(name)) fail(loc, "duplicate variable '" + name + "'");
        scopes_.back().emplace(name, type);
    }

    void checkMethod(MethodDecl& m) {
        if (!m.hasBody) return;
        scopes_.clear();
        scopes_.emplace_back();
        for (auto& p : m.params) {
            p.type = resolveTypeName(p.typeName, p.loc);
            declareLocal(p.name, p.type, p.loc);
        }
        retType_ = resolveTypeName(m.retTypeName, m.loc);
        checkBlock(m.body);
    }

    void checkBlock(std::vector<StmtPtr>& block) {
        scopes_.emplace_back();
        for (auto& s : block) checkStmt(*s);
        scopes_.pop_back();
    }

    void checkStmt(Stmt& s) {
        switch (s.kind) {
            case StmtKind::LocalDecl: {
                s.declType = resolveTypeName(s.typeName, s.loc);
                if (s.isFree) {
                    if (s.declType.kind == StaticType::Kind::Str)
                        fail(s.loc, "a free variable must be int, boolean, or a class type");
                    if (s.declType.isRef() &&
                        table_.instantiableCone(s.declType.cls).empty())
                        fail(s.loc, "free object of type '" + s.typeName +
                                        "' which has no instantiable subtype");
                }
                if (s.value) {
                    StaticType vt = checkExpr(*s.value);
                    if (!assignable(vt, s.declType))
                        fail(s.loc, "cannot initialize '" + s.name + "' (" +
                                        typeName(table_, s.declType) + ") from " +
                                        typeName(table_, vt));
                }
                declareLocal(s.name, s.declType, s.loc);
                break;
            }
            case StmtKind::Assign: {
                StaticType tt = checkExpr(*s.target);
                StaticType vt = checkExpr(*s.value);
                if (!assignable(vt, tt))
                    fail(s.loc, "cannot assign " + typeName(table_, vt) + " to " +
                                    typeName(table_, tt));
                break;
            }
            case StmtKind::If: {
                StaticType ct = checkExpr(*s.value);
                if (ct.kind != StaticType::Kind::Bool)
                    fail(s.loc, "condition must be boolean");
                checkBlock(s.thenBlock);
                checkBlock(s.elseBlock);
                break;
            }
            case StmtKind::Return: {
                if (s.value) {
                    StaticType vt = checkExpr(*s.value);
                    if (!assignable(vt, retType_))
                        fail(s.loc, "return type mismatch: " + typeName(table_, vt) +
                                        " where " + typeName(table_, retType_) +
                                        " is declared");
                }
                break;
            }
            case StmtKind::Fail:
                break;
            case StmtKind::Println:
                checkExpr(*s.value);
                break;
            case StmtKind::ExprStmt: {
                checkExpr(*s.value);
                if (s.value->kind != ExprKind::Call)
                    fail(s.loc, "only calls can stand as statements");
                break;
            }
        }
    }

    StaticType checkExpr(Expr& e) {
        e.type = computeType(e);
        return e.type;
    }

    StaticType computeType(Expr& e) {
        switch (e.kind) {
            case ExprKind::IntLit: return StaticType::intType();
            case ExprKind::BoolLit: return StaticType::boolType();
            case ExprKind::StrLit: return StaticType::strType();
            case ExprKind::LocalRef: {
                if (const StaticType* t = lookupLocal(e.name)) return *t;
                // Bare identifier naming a field: rewrite to this.<name>.
                if (const FieldInfo* fi = table_.resolveField(thisCls_, e.name)) {
                    auto recv = std::make_unique<Expr>();
                    recv->kind = ExprKind::ThisRef;
                    recv->loc = e.loc;
                    recv->type = StaticType::ref(thisCls_);
                    e.kind = ExprKind::FieldGet;
                    e.lhs = std::move(recv);
                    e.implicitThis = true;
                    e.fieldOwner = fi->owner;
                    e.fieldType = fi->type;
                    return fi->type;
                }
                fail(e.loc, "unknown variable '" + e.name + "'");
            }
            case ExprKind::ThisRef:
                return StaticType::ref(thisCls_);
            case ExprKind::FieldGet: {
                StaticType rt = checkExpr(*e.lhs);
                if (!rt.isRef()) fail(e.loc, "field access on a non-object value");
                const FieldInfo* fi = table_.resolveField(rt.cls, e.name);
                if (!fi)
                    fail(e.loc, "no field '" + e.name + "' in " + table_.name(rt.cls));
                e.fieldOwner = fi->owner;
                e.fieldType = fi->type;
                return fi->type;
            }
            case ExprKind::Call: {
                if (!e.lhs) {
                    auto recv = std::make_unique<Expr>();
                    recv->kind = ExprKind::ThisRef;
                    recv->loc = e.loc;
                    recv->type = StaticType::ref(thisCls_);
                    e.lhs = std::move(recv);
                } else {
                    checkExpr(*e.lhs);
                }
                const StaticType& rt = e.lhs->type;
                if (!rt.isRef()) fail(e.loc, "method call on a non-object value");
                const MethodInfo* mi = table_.resolveMethod(rt.cls, e.name, e.args.size());
                if (!mi)
                    fail(e.loc, "no method '" + e.name + "/" +
                                    std::to_string(e.args.size()) + "' in " +
                                    table_.name(rt.cls));
                for (size_t i = 0; i < e.args.size(); ++i) {
                    StaticType at = checkExpr(*e.args[i]);
                    if (!assignable(at, mi->params[i]))
                        fail(e.args[i]->loc,
                             "argument " + std::to_string(i + 1) + " of '" + e.name +
                                 "' expects " + typeName(table_, mi->params[i]) +
                                 ", got " + typeName(table_, at));
                }
                return mi->ret;
            }
            case ExprKind::New: {
                auto id = table_.lookup(e.name);
                if (!id) fail(e.loc, "unknown type '" + e.name + "'");
                const ClassInfo& ci = table_.info(*id);
                if (ci.isInterface) fail(e.loc, "cannot instantiate interface '" + e.name + "'");
                if (ci.isAbstract)
                    fail(e.loc, "cannot instantiate abstract class '" + e.name + "'");
                auto fields = table_.allFieldsInOrder(*id);
                if (e.args.size() > fields.size())
                    fail(e.loc, "too many initializers for '" + e.name + "' (" +
                                    std::to_string(fields.size()) + " fields)");
                for (size_t i = 0; i < e.args.size(); ++i) {
                    StaticType at = checkExpr(*e.args[i]);
                    if (!assignable(at, fields[i]->type))
                        fail(e.args[i]->loc, "initializer " + std::to_string(i + 1) +
                                                 " for field '" + fields[i]->name +
                                                 "' expects " +
                                                 typeName(table_, fields[i]->type) +
                                                 ", got " + typeName(table_, at));
                }
                e.targetType = *id;
                return StaticType::ref(*id);
            }
            case ExprKind::Binary: {
                StaticType lt = checkExpr(*e.lhs);
                StaticType rt = checkExpr(*e.rhs);
                switch (e.op) {
                    case BinOp::Add:
                    case BinOp::Sub:
                    case BinOp::Mul:
                        if (lt.kind != StaticType::Kind::Int ||
                            rt.kind != StaticType::Kind::Int)
                            fail(e.loc, "arithmetic needs int operands");
                        return StaticType::intType();
                    case BinOp::Lt:
                    case BinOp::Le:
                    case BinOp::Gt:
                    case BinOp::Ge:
                        if (lt.kind != StaticType::Kind::Int ||
                            rt.kind != StaticType::Kind::Int)
                            fail(e.loc, "comparison needs int operands");
                        return StaticType::boolType();
                    case BinOp::Eq:
                    case BinOp::Ne:
                        if (lt.kind == StaticType::Kind::Int &&
                            rt.kind == StaticType::Kind::Int)
                            return StaticType::boolType();
                        if (lt.kind == StaticType::Kind::Bool &&
                            rt.kind == StaticType::Kind::Bool)
                            return StaticType::boolType();
                        if (lt.isRef() && rt.isRef()) {
                            if (!table_.isSubtypeOrSame(lt.cls, rt.cls) &&
                                !table_.isSubtypeOrSame(rt.cls, lt.cls))
                                fail(e.loc, "incomparable reference types " +
                                                table_.name(lt.cls) + " and " +
                                                table_.name(rt.cls));
                            e.refComparison = true;
                            return StaticType::boolType();
                        }
                        fail(e.loc, "operands of '" + std::string(binOpToken(e.op)) +
                                        "' must both be int, boolean, or references");
                    case BinOp::StructEq:
                        if (!lt.isRef() || !rt.isRef())
                            fail(e.loc, "'#=' compares objects");
                        return StaticType::boolType();
                }
                fail(e.loc, "bad binary operator");
            }
            case ExprKind::Cast: {
                StaticType ot = checkExpr(*e.lhs);
                if (!ot.isRef()) fail(e.loc, "cast of a non-object value");
                auto id = table_.lookup(e.name);
                if (!id) fail(e.loc, "unknown type '" + e.name + "'");
                e.targetType = *id;
                e.castStaticallyValid = conesOverlap(ot.cls, *id);
                return StaticType::ref(*id);
            }
            case ExprKind::InstanceOf: {
                StaticType ot = checkExpr(*e.lhs);
                if (!ot.isRef()) fail(e.loc, "instanceof on a non-object value");
                auto id = table_.lookup(e.name);
                if (!id) fail(e.loc, "unknown type '" + e.name + "'");
                e.targetType = *id;
                e.castStaticallyValid = conesOverlap(ot.cls, *id);
                return StaticType::boolType();
            }
        }
        fail(e.loc, "bad expression");
    }

    Program& prog_;
    const ClassTable& table_;
    TypeId thisCls_ = kNoType;
    StaticType retType_;
    std::vector<std::map<std::string, StaticType>> scopes_;
};

}  // namespace

void typecheck(Program& program, const ClassTable& table) {
    Checker(program, table).run();
}

EntryPoint findEntry(const ClassTable& table, const std::string& name) {
    EntryPoint found;
    int hits = 0;
    for (TypeId t = 0; t < table.size(); ++t) {
        const ClassInfo& ci = table.info(t);
        if (ci.isInterface) continue;
        for (const MethodInfo& m : ci.methods) {
            if (m.name != name || !m.params.empty()) continue;
            if (m.isAbstract || m.native != NativeMethod::None) continue;
            found = {t, &m};
            ++hits;
        }
    }
    if (hits == 0) throw CompileError("no entry method '" + name + "()'", 0, 0);
    if (hits > 1) throw CompileError("entry method '" + name + "()' is ambiguous", 0, 0);
    return found;
}

}  // namespace minimuli
