#include "minimuli/engine.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "minimuli/diagnostics.hpp"
#include "minimuli/typecheck.hpp"

namespace minimuli {

namespace {

struct Frame {
    Value thisRef;
    std::map<std::string, Value> locals;
};
using FramePtr = std::shared_ptr<Frame>;

enum class CpKind { Cond, Dispatch, TypeOp, StructEq };

const char* cpName(CpKind k) {
    switch (k) {
        case CpKind::Cond: return "COND";
        case CpKind::Dispatch: return "DISPATCH";
        case CpKind::TypeOp: return "TYPEOP";
        case CpKind::StructEq: return "STRUCTEQ";
    }
    return "?";
}

Rel relOf(BinOp op) {
    switch (op) {
        case BinOp::Lt: return Rel::Lt;
        case BinOp::Le: return Rel::Le;
        case BinOp::Gt: return Rel::Gt;
        case BinOp::Ge: return Rel::Ge;
        case BinOp::Eq: return Rel::Eq;
        case BinOp::Ne: return Rel::Ne;
        default: throw std::logic_error("not a comparison");
    }
}

class Interp {
public:
    Interp(const ClassTable& table, const EngineOptions& opt) : table_(table), opt_(opt) {}

    RunResult run(const std::string& entryName) {
        EntryPoint entry = findEntry(table_, entryName);
        if (opt_.recordTree) {
            treeRoot_ = std::make_unique<TreeNode>();
            treeRoot_->label = "run " + entryName;
            curTree_ = treeRoot_.get();
        }
        auto fr = std::make_shared<Frame>();
        if (table_.info(entry.cls).isAbstract) {
            fr->thisRef = Value::nullVal();
        } else {
            fr->thisRef = Value::refVal(allocConcrete(entry.cls, {}));
        }
        frames_.push_back(fr);
        try {
            execBlock(entry.method->decl->body, fr, 0, [this] { returnLeaf(std::nullopt); },
                      [this](std::optional<Value> v) { returnLeaf(std::move(v)); });
        } catch (const EngineLimitError& ex) {
            incomplete_ = true;
            limitReason_ = ex.what();
        }
        RunResult rr;
        rr.solutions = std::move(solutions_);
        rr.incomplete = incomplete_;
        rr.limitReason = limitReason_;
        rr.stats = stats_;
        rr.tree = std::move(treeRoot_);
        return rr;
    }

private:
    using ValCont = std::function<void(Value)>;
    using OptCont = std::function<void(std::optional<Value>)>;
    using Next = std::function<void()>;

    struct Alt {
        std::string label;
        std::vector<Constraint> impose;
        std::optional<bool> feasible;  // skip the trial when precomputed
        std::function<void()> run;
    };

    // ---- bookkeeping ---------------------------------------------------

    bool step() {
        if (done_) return false;
        if (++stats_.steps > opt_.maxSteps) {
            incomplete_ = true;
            limitReason_ = "step limit of " + std::to_string(opt_.maxSteps) + " reached";
            done_ = true;
            return false;
        }
        return true;
    }

    std::map<HeapAddr, TypeId> concreteTypes() const {
        std::map<HeapAddr, TypeId> out;
        for (const auto& [addr, obj] : heap_.objects())
            if (!obj.isUnresolved()) out.emplace(addr, obj.concreteType);
        return out;
    }

    bool storeConsistent() {
        long long budget = opt_.consistencyGuard;
        return store_.checkConsistency(opt_.domainLo, opt_.domainHi, budget, concreteTypes());
    }

    void undoTrailTo(size_t mark) {
        while (trail_.size() > mark) {
            trail_.back()();
            trail_.pop_back();
        }
    }

    SymInt freshVar(const std::string& hint, std::string path) {
        VarId id = nextVar_++;
        SymInt v = SymInt::variable(id, hint);
        varNames_[id] = v.render();
        varPaths_[id] = std::move(path);
        return v;
    }

    // ---- heap operations (all trail-recorded) ---------------------------

    Value defaultValue(const StaticType& t) {
        switch (t.kind) {
            case StaticType::Kind::Int: return Value::intConst(0);
            case StaticType::Kind::Bool: return Value::boolVal(false);
            case StaticType::Kind::Str: return Value::strVal("");
            case StaticType::Kind::Ref: return Value::nullVal();
        }
        return Value::nullVal();
    }

    HeapAddr allocConcrete(TypeId t, const std::vector<Value>& inits) {
        HeapAddr a = heap_.alloc();
        HeapObject obj;
        obj.concreteType = obj.declaredType = t;
        auto fields = table_.allFieldsInOrder(t);
        for (size_t i = 0; i < fields.size(); ++i) {
            FieldRef key{fields[i]->owner, fields[i]->name};
            obj.fields[key] = i < inits.size() ? inits[i] : defaultValue(fields[i]->type);
        }
        heap_.put(a, std::move(obj));
        trail_.push_back([this, a] { heap_.erase(a); });
        return a;
    }

    HeapAddr allocFree(TypeId declared) {
        HeapAddr a = heap_.alloc();
        HeapObject obj;
        obj.declaredType = declared;
        obj.createdFree = true;
        heap_.put(a, std::move(obj));
        trail_.push_back([this, a] { heap_.erase(a); });
        store_.impose(Constraint::typeSet(a, table_.instantiableCone(declared)));
        return a;
    }

    // Gives an untouched field of an unresolved object a value: a fresh
    // variable for int/boolean, a fresh unresolved object for references.
    // False when the store became inconsistent (uninstantiable field type).
    bool materializeField(HeapAddr addr, const FieldInfo& fi) {
        FieldRef key{fi.owner, fi.name};
        if (heap_.at(addr).fields.count(key)) return true;
        std::string path =
            "@" + std::to_string(addr) + "." + table_.name(fi.owner) + "." + fi.name;
        Value v;
        switch (fi.type.kind) {
            case StaticType::Kind::Int:
                v = Value::intVal(freshVar(fi.name, path));
                break;
            case StaticType::Kind::Bool: {
                SymInt b = freshVar(fi.name, path);
                store_.impose(Constraint::arith(b, Rel::Ge, SymInt::constant(0)));
                store_.impose(Constraint::arith(b, Rel::Le, SymInt::constant(1)));
                v = Value::boolSym(b);
                break;
            }
            case StaticType::Kind::Str:
                v = Value::strVal("");
                break;
            case StaticType::Kind::Ref: {
                HeapAddr child = allocFree(fi.type.cls);
                if (!storeConsistent()) return false;
                v = Value::refVal(child);
                break;
            }
        }
        heap_.at(addr).fields[key] = v;
        trail_.push_back([this, addr, key] { heap_.at(addr).fields.erase(key); });
        return true;
    }

    void setField(HeapAddr addr, const FieldRef& key, Value v) {
        auto& fields = heap_.at(addr).fields;
        auto it = fields.find(key);
        if (it != fields.end()) {
            Value old = it->second;
            trail_.push_back([this, addr, key, old] { heap_.at(addr).fields[key] = old; });
            it->second = std::move(v);
        } else {
            fields[key] = std::move(v);
            trail_.push_back([this, addr, key] { heap_.at(addr).fields.erase(key); });
        }
    }

    void bindLocal(const FramePtr& fr, const std::string& name, Value v) {
        auto it = fr->locals.find(name);
        if (it != fr->locals.end()) {
            Value old = it->second;
            trail_.push_back([fr, name, old] { fr->locals[name] = old; });
            it->second = std::move(v);
        } else {
            fr->locals[name] = std::move(v);
            trail_.push_back([fr, name] { fr->locals.erase(name); });
        }
    }

    void emitOutput(std::string line) {
        output_.push_back(std::move(line));
        trail_.push_back([this] { output_.pop_back(); });
    }

    // ---- rendering -------------------------------------------------------

    std::string renderRaw(const Value& v) const {
        switch (v.kind) {
            case Value::Kind::Int: return "i" + v.num.render();
            case Value::Kind::Bool: return "b" + v.num.render();
            case Value::Kind::Str: return "s" + v.str;
            case Value::Kind::Ref: return "r" + std::to_string(v.addr);
            case Value::Kind::Null: return "n";
        }
        return "?";
    }

    std::string renderDisplay(const Value& v, bool literal) const {
        switch (v.kind) {
            case Value::Kind::Int: return v.num.render();
            case Value::Kind::Bool:
                if (v.num.isConst()) return v.num.constValue() ? "true" : "false";
                return v.num.render();
            case Value::Kind::Str: return literal ? "\"" + v.str + "\"" : v.str;
            case Value::Kind::Ref: return renderObject(v.addr);
            case Value::Kind::Null: return "null";
        }
        return "?";
    }

    // One level deep; nested references render as addresses so cyclic
    // structures stay printable.
    std::string renderObject(HeapAddr addr) const {
        const HeapObject& obj = heap_.at(addr);
        std::string s;
        std::vector<std::pair<std::string, const Value*>> parts;
        if (obj.isUnresolved()) {
            s = table_.name(obj.declaredType) + "?";
            for (const auto& [key, v] : obj.fields) parts.emplace_back(key.name, &v);
        } else {
            s = table_.name(obj.concreteType);
            for (const FieldInfo* fi : table_.allFieldsInOrder(obj.concreteType)) {
                FieldRef key{fi->owner, fi->name};
                parts.emplace_back(fi->name, &obj.fields.at(key));
            }
        }
        s += "(";
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) s += ", ";
            s += parts[i].first + "=";
            const Value& v = *parts[i].second;
            if (v.kind == Value::Kind::Ref)
                s += "@" + std::to_string(v.addr);
            else
                s += renderDisplay(v, true);
        }
        s += ")";
        return s;
    }

    // Serialized restorable state: heap, store, output, frame locals. Equal
    // strings before a choice point and after undoing an alternative certify
    // the undo was exact.
    std::string fingerprint() const {
        std::string s;
        for (const auto& [addr, obj] : heap_.objects()) {
            s += "@" + std::to_string(addr) + ":" + std::to_string(obj.concreteType) + "/" +
                 std::to_string(obj.declaredType) + (obj.createdFree ? "f" : "c") + "{";
            for (const auto& [key, v] : obj.fields)
                s += std::to_string(key.owner) + "." + key.name + "=" + renderRaw(v) + ";";
            s += "}";
        }
        s += "|";
        for (const auto& c : store_.items()) {
            switch (c.kind) {
                case Constraint::Kind::Arith:
                    s += "A" + c.lhs.render() + relToken(c.rel) + c.rhs.render();
                    break;
                case Constraint::Kind::TypeSet:
                    s += "T" + std::to_string(c.obj) + ":";
                    for (TypeId t : c.set) s += std::to_string(t) + ",";
                    break;
                case Constraint::Kind::TypeEq:
                    s += std::string("E") + (c.negated ? "!" : "") + std::to_string(c.a) +
                         "~" + std::to_string(c.b);
                    break;
            }
            s += ";";
        }
        s += "|";
        for (const auto& line : output_) s += line + "\n";
        s += "|";
        for (const auto& fr : frames_) {
            s += "[" + renderRaw(fr->thisRef);
            for (const auto& [name, v] : fr->locals) s += name + "=" + renderRaw(v) + ";";
            s += "]";
        }
        return s;
    }

    // ---- search tree -----------------------------------------------------

    TreeNode* addTreeChild(std::string label, std::string edge) {
        if (!curTree_) return nullptr;
        auto node = std::make_unique<TreeNode>();
        node->label = std::move(label);
        node->edge = std::move(edge);
        TreeNode* raw = node.get();
        curTree_->children.push_back(std::move(node));
        return raw;
    }

    void treeDead(const std::string& why) { addTreeChild("dead: " + why, ""); }

    // ---- choice points ---------------------------------------------------

    long long& cpCounter(CpKind kind) {
        switch (kind) {
            case CpKind::Cond: return stats_.condChoicePoints;
            case CpKind::Dispatch: return stats_.dispatchChoicePoints;
            case CpKind::TypeOp: return stats_.typeopChoicePoints;
            case CpKind::StructEq: return stats_.structeqChoicePoints;
        }
        return stats_.condChoicePoints;
    }

    // Keeps the alternatives whose constraints fit the current store, then
    // explores them: one survivor is committed in place (no choice point),
    // several become a choice point with full state restoration in between.
    void choose(CpKind kind, const std::string& site, std::vector<Alt> alts,
                const std::function<void(const std::vector<size_t>&)>& onChoicePoint = {}) {
        if (done_) return;
        std::vector<size_t> survivors;
        for (size_t i = 0; i < alts.size(); ++i) {
            bool ok;
            if (alts[i].feasible) {
                ok = *alts[i].feasible;
            } else {
                auto sm = store_.mark();
                for (const auto& c : alts[i].impose) store_.impose(c);
                ok = storeConsistent();
                store_.popToMark(sm);
            }
            if (ok) survivors.push_back(i);
        }
        if (survivors.empty()) {
            treeDead(std::string(cpName(kind)) + " " + site + ": no feasible alternative");
            return;
        }
        if (survivors.size() == 1) {
            Alt& alt = alts[survivors[0]];
            for (const auto& c : alt.impose) store_.impose(c);
            alt.run();
            return;
        }

        ++cpCounter(kind);
        if (onChoicePoint) onChoicePoint(survivors);
        TreeNode* cpNode = nullptr;
        if (curTree_) cpNode = addTreeChild(std::string(cpName(kind)) + " " + site, "");
        const std::string before = fingerprint();
        for (size_t idx : survivors) {
            if (done_) return;
            size_t tm = trail_.size();
            auto sm = store_.mark();
            TreeNode* saved = curTree_;
            if (cpNode) {
                curTree_ = cpNode;
                curTree_ = addTreeChild("alt", alts[idx].label);
            }
            for (const auto& c : alts[idx].impose) store_.impose(c);
            alts[idx].run();
            curTree_ = saved;
            if (done_) return;
            undoTrailTo(tm);
            store_.popToMark(sm);
            if (fingerprint() != before) ++stats_.fingerprintMismatches;
        }
    }

    // ---- leaves ------------------------------------------------------------

    void returnLeaf(std::optional<Value> v) {
        if (done_) return;
        recordSolution(Solution::Kind::Return, std::move(v), "");
    }

    void exceptionLeaf(const std::string& name) {
        if (done_) return;
        recordSolution(Solution::Kind::Exception, std::nullopt, name);
    }

    void recordSolution(Solution::Kind kind, std::optional<Value> v, std::string exc) {
        Solution s;
        s.kind = kind;
        s.value = v;
        s.exceptionName = std::move(exc);
        if (kind == Solution::Kind::Return)
            s.valueText = v ? renderDisplay(*v, true) : "void";
        s.constraintDump = store_.dumpLines(table_);
        s.output = output_;
        for (const auto& [addr, obj] : heap_.objects()) {
            ObjectSnapshot snap;
            snap.concreteType = obj.concreteType;
            snap.declaredType = obj.declaredType;
            snap.createdFree = obj.createdFree;
            snap.fields = obj.fields;
            if (obj.isUnresolved()) snap.applicable = store_.effectiveSet(addr);
            s.heap.emplace(addr, std::move(snap));
        }
        if (opt_.label != EngineOptions::LabelMode::Off) s.labelings = computeLabelings(v);
        if (curTree_) {
            std::string label = kind == Solution::Kind::Return
                                    ? "RETURN " + s.valueText
                                    : "EXCEPTION " + s.exceptionName;
            addTreeChild(std::move(label), "");
        }
        solutions_.push_back(std::move(s));
        if (opt_.stopAfterFirst) done_ = true;
    }

    std::vector<Labeling> computeLabelings(const std::optional<Value>& ret) {
        std::set<HeapAddr> addrSet;
        store_.collectAddrs(addrSet);
        std::vector<HeapAddr> objs;
        for (HeapAddr a : addrSet)
            if (heap_.at(a).isUnresolved()) objs.push_back(a);

        std::set<VarId> varSet;
        store_.collectIntVars(varSet);
        if (ret && (ret->kind == Value::Kind::Int || ret->kind == Value::Kind::Bool))
            ret->num.collectVars(varSet);
        for (HeapAddr a : objs)
            for (const auto& [key, v] : heap_.at(a).fields)
                if (v.kind == Value::Kind::Int || v.kind == Value::Kind::Bool)
                    v.num.collectVars(varSet);
        std::vector<VarId> vars(varSet.begin(), varSet.end());

        std::vector<Labeling> out;
        if (objs.empty() && vars.empty()) return out;
        bool all = opt_.label == EngineOptions::LabelMode::All;
        long long budget = opt_.consistencyGuard;
        store_.enumerateAssignments(
            objs, vars, opt_.domainLo, opt_.domainHi, budget, concreteTypes(),
            [&](const StoreAssignment& asg) {
                Labeling lab;
                for (HeapAddr a : objs) {
                    LabelEntry e;
                    e.display = "@" + std::to_string(a);
                    e.stablePath = e.display;
                    e.isType = true;
                    e.typeName = table_.name(asg.objectTypes.at(a));
                    e.addr = a;
                    lab.push_back(std::move(e));
                }
                for (VarId v : vars) {
                    LabelEntry e;
                    e.display = varNames_.at(v);
                    e.stablePath = varPaths_.at(v);
                    e.intValue = asg.ints.at(v);
                    e.var = v;
                    lab.push_back(std::move(e));
                }
                out.push_back(std::move(lab));
                return all;
            });
        return out;
    }

    // ---- expression evaluation ---------------------------------------------

    void evalExpr(const Expr& e, const FramePtr& fr, const ValCont& k) {
        if (!step()) return;
        switch (e.kind) {
            case ExprKind::IntLit:
                k(Value::intConst(e.intValue));
                return;
            case ExprKind::BoolLit:
                k(Value::boolVal(e.boolValue));
                return;
            case ExprKind::StrLit:
                k(Value::strVal(e.strValue));
                return;
            case ExprKind::LocalRef:
                k(fr->locals.at(e.name));
                return;
            case ExprKind::ThisRef:
                k(fr->thisRef);
                return;
            case ExprKind::FieldGet:
                evalExpr(*e.lhs, fr, [this, &e, k](Value recv) {
                    if (recv.kind == Value::Kind::Null) {
                        exceptionLeaf("NullPointerException");
                        return;
                    }
                    readField(recv.addr, e, k);
                });
                return;
            case ExprKind::Call:
                evalCall(e, fr, [this, k](std::optional<Value> v) {
                    if (!v) {
                        exceptionLeaf("MissingReturnValue");
                        return;
                    }
                    k(*std::move(v));
                });
                return;
            case ExprKind::New:
                evalList(e.args, fr, 0, {}, [this, &e, k](std::vector<Value> inits) {
                    k(Value::refVal(allocConcrete(e.targetType, inits)));
                });
                return;
            case ExprKind::Binary:
                evalBinary(e, fr, k);
                return;
            case ExprKind::Cast:
                evalExpr(*e.lhs, fr, [this, &e, k](Value v) { doCast(e, std::move(v), k); });
                return;
            case ExprKind::InstanceOf:
                evalExpr(*e.lhs, fr,
                         [this, &e, k](Value v) { doInstanceOf(e, std::move(v), k); });
                return;
        }
        throw std::logic_error("bad expression kind");
    }

    // Left-to-right evaluation collecting values; the accumulator is copied
    // per extension so re-entry from backtracking never sees stale entries.
    void evalList(const std::vector<ExprPtr>& exprs, const FramePtr& fr, size_t i,
                  std::vector<Value> acc,
                  const std::function<void(std::vector<Value>)>& k) {
        if (i == exprs.size()) {
            k(std::move(acc));
            return;
        }
        evalExpr(*exprs[i], fr, [this, &exprs, fr, i, acc, k](const Value& v) {
            std::vector<Value> extended = acc;
            extended.push_back(v);
            evalList(exprs, fr, i + 1, std::move(extended), k);
        });
    }

    void readField(HeapAddr addr, const Expr& e, const ValCont& k) {
        FieldRef key{e.fieldOwner, e.name};
        if (heap_.at(addr).isUnresolved()) {
            const FieldInfo* fi = table_.resolveField(e.fieldOwner, e.name);
            if (!materializeField(addr, *fi)) {
                treeDead("uninstantiable field type");
                return;
            }
        }
        k(heap_.at(addr).fields.at(key));
    }

    void evalBinary(const Expr& e, const FramePtr& fr, const ValCont& k) {
        evalExpr(*e.lhs, fr, [this, &e, fr, k](const Value& a) {
            evalExpr(*e.rhs, fr, [this, &e, k, a](const Value& b) {
                switch (e.op) {
                    case BinOp::Add:
                        k(Value::intVal(SymInt::add(a.num, b.num)));
                        return;
                    case BinOp::Sub:
                        k(Value::intVal(SymInt::sub(a.num, b.num)));
                        return;
                    case BinOp::Mul:
                        k(Value::intVal(SymInt::mul(a.num, b.num)));
                        return;
                    case BinOp::Eq:
                    case BinOp::Ne:
                        if (e.refComparison) {
                            refEq(e, a, b, k);
                            return;
                        }
                        [[fallthrough]];
                    case BinOp::Lt:
                    case BinOp::Le:
                    case BinOp::Gt:
                    case BinOp::Ge:
                        compare(e, a, b, k);
                        return;
                    case BinOp::StructEq:
                        structEq(e, a, b, k);
                        return;
                }
                throw std::logic_error("bad binary operator");
            });
        });
    }

    void compare(const Expr& e, const Value& a, const Value& b, const ValCont& k) {
        Rel rel = relOf(e.op);
        if (a.num.isConst() && b.num.isConst()) {
            k(Value::boolVal(evalRel(rel, a.num.constValue(), b.num.constValue())));
            return;
        }
        std::string site = std::string(binOpToken(e.op)) + "@" + std::to_string(e.loc.line);
        std::vector<Alt> alts;
        alts.push_back({"true", {Constraint::arith(a.num, rel, b.num)}, {},
                        [k] { k(Value::boolVal(true)); }});
        alts.push_back({"false", {Constraint::arith(a.num, negateRel(rel), b.num)}, {},
                        [k] { k(Value::boolVal(false)); }});
        choose(CpKind::Cond, site, std::move(alts));
    }

    // Reference identity: decided by addresses alone, never touches the store.
    void refEq(const Expr& e, const Value& a, const Value& b, const ValCont& k) {
        ++stats_.refEqEvals;
        auto before = store_.size();
        bool eq;
        if (a.kind == Value::Kind::Null && b.kind == Value::Kind::Null)
            eq = true;
        else if (a.kind == Value::Kind::Null || b.kind == Value::Kind::Null)
            eq = false;
        else
            eq = a.addr == b.addr;
        if (e.op == BinOp::Ne) eq = !eq;
        stats_.refEqStoreDelta += static_cast<long long>(store_.size() - before);
        k(Value::boolVal(eq));
    }

    void evalCall(const Expr& e, const FramePtr& fr, const OptCont& k) {
        evalExpr(*e.lhs, fr, [this, &e, fr, k](const Value& recv) {
            if (recv.kind == Value::Kind::Null) {
                exceptionLeaf("NullPointerException");
                return;
            }
            evalList(e.args, fr, 0, {}, [this, &e, recv, k](std::vector<Value> args) {
                dispatchCall(e, recv, std::move(args), k);
            });
        });
    }

    void dispatchCall(const Expr& e, const Value& recv, std::vector<Value> args,
                      const OptCont& k) {
        const HeapObject& obj = heap_.at(recv.addr);
        size_t arity = e.args.size();
        if (!obj.isUnresolved()) {
            TypeId owner = table_.dispatchOwner(obj.concreteType, e.name, arity);
            if (owner == kNoType) throw std::logic_error("no dispatch target");
            invoke(owner, e.name, arity, recv, std::move(args), k);
            return;
        }
        TypeSet pre = store_.effectiveSet(recv.addr);
        TypeSet owners = table_.getImplementations(pre, e.name, arity);
        std::vector<Alt> alts;
        std::vector<TypeSet> ownerSets;
        for (TypeId owner : owners) {
            TypeSet types = table_.instanceTypesForImplementation(owner, e.name, arity, pre);
            Alt alt;
            alt.label = table_.name(owner);
            alt.impose = {Constraint::typeSet(recv.addr, types)};
            alt.run = [this, owner, &e, arity, recv, args, k] {
                invoke(owner, e.name, arity, recv, args, k);
            };
            alts.push_back(std::move(alt));
            ownerSets.push_back(std::move(types));
        }
        std::string site =
            e.name + "/" + std::to_string(arity) + "@" + std::to_string(e.loc.line);
        choose(CpKind::Dispatch, site, std::move(alts),
               [this, site, pre, owners, ownerSets](const std::vector<size_t>& survivors) {
                   DispatchEvent ev;
                   ev.site = site;
                   ev.preSet = pre;
                   for (size_t i : survivors) {
                       ev.owners.push_back(owners[i]);
                       ev.sets.push_back(ownerSets[i]);
                   }
                   stats_.dispatchEvents.push_back(std::move(ev));
               });
    }

    void invoke(TypeId owner, const std::string& name, size_t arity, const Value& recv,
                const std::vector<Value>& args, const OptCont& k) {
        const MethodInfo* mi = table_.ownMethod(owner, name, arity);
        if (!mi || mi->isAbstract) throw std::logic_error("no body to invoke");
        if (mi->native == NativeMethod::ObjectToString) {
            k(Value::strVal(renderObject(recv.addr)));
            return;
        }
        if (mi->native == NativeMethod::ObjectEquals) {
            const Value& o = args[0];
            k(Value::boolVal(o.kind == Value::Kind::Ref && o.addr == recv.addr));
            return;
        }
        auto fr = std::make_shared<Frame>();
        fr->thisRef = recv;
        for (size_t i = 0; i < args.size(); ++i)
            fr->locals[mi->decl->params[i].name] = args[i];
        frames_.push_back(fr);
        trail_.push_back([this] { frames_.pop_back(); });
        execBlock(mi->decl->body, fr, 0, [k] { k(std::nullopt); }, k);
    }

    // ---- type operations ----------------------------------------------------

    void doCast(const Expr& e, Value v, const ValCont& k) {
        if (v.kind == Value::Kind::Null) {
            k(std::move(v));
            return;
        }
        if (!e.castStaticallyValid) {
            exceptionLeaf("ClassCastException");
            return;
        }
        const HeapObject& obj = heap_.at(v.addr);
        if (!obj.isUnresolved()) {
            if (table_.isSubtypeOrSame(obj.concreteType, e.targetType))
                k(std::move(v));
            else
                exceptionLeaf("ClassCastException");
            return;
        }
        typeOpChoice(e, v, true, k);
    }

    void doInstanceOf(const Expr& e, Value v, const ValCont& k) {
        if (v.kind == Value::Kind::Null) {
            k(Value::boolVal(false));
            return;
        }
        if (!e.castStaticallyValid) {
            k(Value::boolVal(false));
            return;
        }
        const HeapObject& obj = heap_.at(v.addr);
        if (!obj.isUnresolved()) {
            k(Value::boolVal(table_.isSubtypeOrSame(obj.concreteType, e.targetType)));
            return;
        }
        typeOpChoice(e, v, false, k);
    }

    // Splits an unresolved receiver's applicable set against the target's
    // instantiable cone: the intersection passes, the rest fails.
    void typeOpChoice(const Expr& e, const Value& v, bool isCast, const ValCont& k) {
        TypeSet pre = store_.effectiveSet(v.addr);
        TypeSet cone = table_.instantiableCone(e.targetType);
        TypeSet pass = intersectSets(pre, cone);
        TypeSet fail = differenceSets(pre, cone);
        stats_.typeopEvents.push_back({isCast, pre, cone, pass, fail});
        std::vector<Alt> alts;
        if (!pass.empty()) {
            Alt alt;
            alt.label = "pass";
            alt.impose = {Constraint::typeSet(v.addr, pass)};
            if (isCast)
                alt.run = [v, k] { k(v); };
            else
                alt.run = [k] { k(Value::boolVal(true)); };
            alts.push_back(std::move(alt));
        }
        if (!fail.empty()) {
            Alt alt;
            alt.label = "fail";
            alt.impose = {Constraint::typeSet(v.addr, fail)};
            if (isCast)
                alt.run = [this] { exceptionLeaf("ClassCastException"); };
            else
                alt.run = [k] { k(Value::boolVal(false)); };
            alts.push_back(std::move(alt));
        }
        std::string site = std::string(isCast ? "cast@" : "instanceof@") +
                           std::to_string(e.loc.line);
        choose(CpKind::TypeOp, site, std::move(alts));
    }

    // ---- structural equality --------------------------------------------------

    struct Equation {
        enum class Kind { Type, Prim, Taut, Contra };
        Kind kind = Kind::Taut;
        HeapAddr a = 0, b = 0;  // Type
        SymInt l, r;            // Prim
    };

    enum class CollectStatus { Ok, Depth, Dead };

    // Walks two structures in lockstep, producing the primitive equations
    // whose conjunction is "structurally equal". Collection stops at the
    // first certain contradiction. Untouched fields of unresolved objects
    // materialize along the way.
    CollectStatus collectEquations(HeapAddr a, HeapAddr b, int depth,
                                   std::vector<Equation>& out) {
        ++stats_.structeqPairs;
        if (a == b) {
            out.push_back({});
            return CollectStatus::Ok;
        }
        if (depth >= opt_.maxStructEqDepth) return CollectStatus::Depth;
        const HeapObject& oa = heap_.at(a);
        const HeapObject& ob = heap_.at(b);
        TypeId frame;
        if (!oa.isUnresolved() && !ob.isUnresolved()) {
            if (oa.concreteType != ob.concreteType) {
                Equation eq;
                eq.kind = Equation::Kind::Contra;
                out.push_back(eq);
                return CollectStatus::Ok;
            }
            Equation eq;
            eq.kind = Equation::Kind::Taut;
            out.push_back(eq);
            frame = oa.concreteType;
        } else {
            Equation eq;
            eq.kind = Equation::Kind::Type;
            eq.a = a;
            eq.b = b;
            out.push_back(eq);
            if (!oa.isUnresolved())
                frame = oa.concreteType;
            else if (!ob.isUnresolved())
                frame = ob.concreteType;
            else
                frame = table_.commonClassAncestor(oa.declaredType, ob.declaredType);
        }
        for (const FieldInfo* fi : table_.allFieldsInOrder(frame)) {
            Value va, vb;
            if (!fetchForCompare(a, *fi, va) || !fetchForCompare(b, *fi, vb))
                return CollectStatus::Dead;
            switch (fi->type.kind) {
                case StaticType::Kind::Int:
                case StaticType::Kind::Bool: {
                    Equation eq;
                    eq.kind = Equation::Kind::Prim;
                    eq.l = va.num;
                    eq.r = vb.num;
                    out.push_back(eq);
                    break;
                }
                case StaticType::Kind::Str: {
                    Equation eq;
                    eq.kind = va.str == vb.str ? Equation::Kind::Taut : Equation::Kind::Contra;
                    out.push_back(eq);
                    if (eq.kind == Equation::Kind::Contra) return CollectStatus::Ok;
                    break;
                }
                case StaticType::Kind::Ref: {
                    bool na = va.kind == Value::Kind::Null;
                    bool nb = vb.kind == Value::Kind::Null;
                    if (na && nb) {
                        out.push_back({});
                        break;
                    }
                    if (na != nb) {
                        Equation eq;
                        eq.kind = Equation::Kind::Contra;
                        out.push_back(eq);
                        return CollectStatus::Ok;
                    }
                    CollectStatus st = collectEquations(va.addr, vb.addr, depth + 1, out);
                    if (st != CollectStatus::Ok) return st;
                    if (!out.empty() && out.back().kind == Equation::Kind::Contra)
                        return CollectStatus::Ok;
                    break;
                }
            }
        }
        return CollectStatus::Ok;
    }

    bool fetchForCompare(HeapAddr addr, const FieldInfo& fi, Value& out) {
        if (heap_.at(addr).isUnresolved() && !materializeField(addr, fi)) return false;
        out = heap_.at(addr).fields.at(FieldRef{fi.owner, fi.name});
        return true;
    }

    static Constraint positive(const Equation& eq) {
        if (eq.kind == Equation::Kind::Type) return Constraint::typeEq(eq.a, eq.b, false);
        return Constraint::arith(eq.l, Rel::Eq, eq.r);
    }
    static Constraint negation(const Equation& eq) {
        if (eq.kind == Equation::Kind::Type) return Constraint::typeEq(eq.a, eq.b, true);
        return Constraint::arith(eq.l, Rel::Ne, eq.r);
    }

    void structEq(const Expr& e, const Value& a, const Value& b, const ValCont& k) {
        bool na = a.kind == Value::Kind::Null;
        bool nb = b.kind == Value::Kind::Null;
        if (na || nb) {
            k(Value::boolVal(na && nb));
            return;
        }
        if (a.addr == b.addr) {
            k(Value::boolVal(true));
            return;
        }
        auto eqs = std::make_shared<std::vector<Equation>>();
        CollectStatus st = collectEquations(a.addr, b.addr, 0, *eqs);
        std::string site = "#=@" + std::to_string(e.loc.line);
        if (st == CollectStatus::Depth) {
            ++stats_.structeqDepthFailures;
            treeDead(site + ": depth limit of " + std::to_string(opt_.maxStructEqDepth));
            return;
        }
        if (st == CollectStatus::Dead) {
            treeDead(site + ": uninstantiable field type");
            return;
        }
        bool anyContra = false;
        bool anyUndecided = false;
        for (const auto& eq : *eqs) {
            anyContra |= eq.kind == Equation::Kind::Contra;
            anyUndecided |=
                eq.kind == Equation::Kind::Type || eq.kind == Equation::Kind::Prim;
        }
        std::vector<Alt> alts;
        if (!anyContra) {
            Alt alt;
            alt.label = "equal";
            for (const auto& eq : *eqs)
                if (eq.kind == Equation::Kind::Type || eq.kind == Equation::Kind::Prim)
                    alt.impose.push_back(positive(eq));
            alt.run = [k] { k(Value::boolVal(true)); };
            alts.push_back(std::move(alt));
        }
        if (anyContra || anyUndecided) {
            Alt alt;
            alt.label = "unequal";
            alt.run = [this, eqs, site, k] { falseChain(eqs, 0, site, k); };
            alts.push_back(std::move(alt));
        }
        choose(CpKind::StructEq, site, std::move(alts));
    }

    // Disjoint decomposition of "not all equations hold": alternative one
    // violates the first undecided equation, alternative two imposes it and
    // recurses. A contradiction certifies inequality outright.
    void falseChain(const std::shared_ptr<std::vector<Equation>>& eqs, size_t from,
                    const std::string& site, const ValCont& k) {
        size_t j = from;
        while (j < eqs->size() && (*eqs)[j].kind == Equation::Kind::Taut) ++j;
        if (j == eqs->size()) throw std::logic_error("inequality chain ran past the end");
        const Equation& eq = (*eqs)[j];
        if (eq.kind == Equation::Kind::Contra) {
            k(Value::boolVal(false));
            return;
        }
        bool more = false;
        for (size_t i = j + 1; i < eqs->size(); ++i)
            more |= (*eqs)[i].kind != Equation::Kind::Taut;
        std::vector<Alt> alts;
        alts.push_back({"ne", {negation(eq)}, {}, [k] { k(Value::boolVal(false)); }});
        if (more)
            alts.push_back({"eq", {positive(eq)}, {},
                            [this, eqs, j, site, k] { falseChain(eqs, j + 1, site, k); }});
        choose(CpKind::StructEq, site, std::move(alts));
    }

    // ---- statements ----------------------------------------------------------

    void execBlock(const std::vector<StmtPtr>& block, const FramePtr& fr, size_t i,
                   const Next& next, const OptCont& ret) {
        if (done_) return;
        if (i == block.size()) {
            next();
            return;
        }
        execStmt(*block[i], fr, [this, &block, fr, i, next, ret] {
            execBlock(block, fr, i + 1, next, ret);
        }, ret);
    }

    void execStmt(const Stmt& s, const FramePtr& fr, const Next& next, const OptCont& ret) {
        if (!step()) return;
        switch (s.kind) {
            case StmtKind::LocalDecl:
                execLocalDecl(s, fr, next);
                return;
            case StmtKind::Assign:
                if (s.target->kind == ExprKind::LocalRef) {
                    evalExpr(*s.value, fr, [this, &s, fr, next](Value v) {
                        bindLocal(fr, s.target->name, std::move(v));
                        next();
                    });
                } else {
                    // Field target: receiver first, then the value.
                    evalExpr(*s.target->lhs, fr, [this, &s, fr, next](const Value& recv) {
                        if (recv.kind == Value::Kind::Null) {
                            exceptionLeaf("NullPointerException");
                            return;
                        }
                        evalExpr(*s.value, fr, [this, &s, recv, next](Value v) {
                            setField(recv.addr,
                                     FieldRef{s.target->fieldOwner, s.target->name},
                                     std::move(v));
                            next();
                        });
                    });
                }
                return;
            case StmtKind::If:
                evalExpr(*s.value, fr, [this, &s, fr, next, ret](const Value& c) {
                    if (c.isGroundBool()) {
                        execBlock(c.groundBool() ? s.thenBlock : s.elseBlock, fr, 0, next,
                                  ret);
                        return;
                    }
                    std::string site = "if@" + std::to_string(s.loc.line);
                    std::vector<Alt> alts;
                    alts.push_back(
                        {"true",
                         {Constraint::arith(c.num, Rel::Eq, SymInt::constant(1))},
                         {},
                         [this, &s, fr, next, ret] {
                             execBlock(s.thenBlock, fr, 0, next, ret);
                         }});
                    alts.push_back(
                        {"false",
                         {Constraint::arith(c.num, Rel::Eq, SymInt::constant(0))},
                         {},
                         [this, &s, fr, next, ret] {
                             execBlock(s.elseBlock, fr, 0, next, ret);
                         }});
                    choose(CpKind::Cond, site, std::move(alts));
                });
                return;
            case StmtKind::Return:
                if (s.value)
                    evalExpr(*s.value, fr, [ret](Value v) { ret(std::move(v)); });
                else
                    ret(std::nullopt);
                return;
            case StmtKind::Fail:
                treeDead("fail@" + std::to_string(s.loc.line));
                return;
            case StmtKind::Println:
                evalExpr(*s.value, fr, [this, next](const Value& v) {
                    emitOutput(renderDisplay(v, false));
                    next();
                });
                return;
            case StmtKind::ExprStmt:
                evalCall(*s.value, fr, [next](const std::optional<Value>&) { next(); });
                return;
        }
        throw std::logic_error("bad statement kind");
    }

    void execLocalDecl(const Stmt& s, const FramePtr& fr, const Next& next) {
        if (s.isFree) {
            switch (s.declType.kind) {
                case StaticType::Kind::Int:
                    bindLocal(fr, s.name, Value::intVal(freshVar(s.name, s.name)));
                    break;
                case StaticType::Kind::Bool: {
                    SymInt b = freshVar(s.name, s.name);
                    store_.impose(Constraint::arith(b, Rel::Ge, SymInt::constant(0)));
                    store_.impose(Constraint::arith(b, Rel::Le, SymInt::constant(1)));
                    bindLocal(fr, s.name, Value::boolSym(b));
                    break;
                }
                case StaticType::Kind::Ref:
                    bindLocal(fr, s.name, Value::refVal(allocFree(s.declType.cls)));
                    break;
                case StaticType::Kind::Str:
                    throw std::logic_error("free String survived the checker");
            }
            next();
            return;
        }
        if (s.value) {
            evalExpr(*s.value, fr, [this, &s, fr, next](Value v) {
                bindLocal(fr, s.name, std::move(v));
                next();
            });
            return;
        }
        bindLocal(fr, s.name, defaultValue(s.declType));
        next();
    }

    // ---- members ---------------------------------------------------------------

    const ClassTable& table_;
    const EngineOptions& opt_;

    Heap heap_;
    ConstraintStore store_;
    std::vector<std::function<void()>> trail_;
    std::vector<FramePtr> frames_;
    std::vector<std::string> output_;

    VarId nextVar_ = 1;
    std::map<VarId, std::string> varNames_;
    std::map<VarId, std::string> varPaths_;

    EngineStats stats_;
    std::vector<Solution> solutions_;
    bool done_ = false;
    bool incomplete_ = false;
    std::string limitReason_;

    std::unique_ptr<TreeNode> treeRoot_;
    TreeNode* curTree_ = nullptr;
};

}  // namespace

RunResult runProgram(const Program& program, const ClassTable& table,
                     const std::string& entryName, const EngineOptions& options) {
    (void)program;  // must already be checked against `table`; kept for call-site clarity
    Interp interp(table, options);
    return interp.run(entryName);
}

}  // namespace minimuli
