#include "minimuli/constraints.hpp"

#include <algorithm>
#include <stdexcept>

#include "minimuli/diagnostics.hpp"

namespace minimuli {

Rel negateRel(Rel r) {
    switch (r) {
        case Rel::Eq: return Rel::Ne;
        case Rel::Ne: return Rel::Eq;
        case Rel::Lt: return Rel::Ge;
        case Rel::Le: return Rel::Gt;
        case Rel::Gt: return Rel::Le;
        case Rel::Ge: return Rel::Lt;
    }
    return Rel::Eq;
}

const char* relToken(Rel r) {
    switch (r) {
        case Rel::Eq: return "==";
        case Rel::Ne: return "!=";
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Gt: return ">";
        case Rel::Ge: return ">=";
    }
    return "==";
}

bool evalRel(Rel r, long long a, long long b) {
    switch (r) {
        case Rel::Eq: return a == b;
        case Rel::Ne: return a != b;
        case Rel::Lt: return a < b;
        case Rel::Le: return a <= b;
        case Rel::Gt: return a > b;
        case Rel::Ge: return a >= b;
    }
    return false;
}

Constraint Constraint::arith(SymInt lhs, Rel rel, SymInt rhs) {
    Constraint c;
    c.kind = Kind::Arith;
    c.lhs = std::move(lhs);
    c.rel = rel;
    c.rhs = std::move(rhs);
    return c;
}

Constraint Constraint::typeSet(HeapAddr obj, TypeSet set) {
    Constraint c;
    c.kind = Kind::TypeSet;
    c.obj = obj;
    c.set = std::move(set);
    return c;
}

Constraint Constraint::typeEq(HeapAddr a, HeapAddr b, bool negated) {
    Constraint c;
    c.kind = Kind::TypeEq;
    c.a = a;
    c.b = b;
    c.negated = negated;
    return c;
}

void ConstraintStore::imposeTypeSet(HeapAddr obj, const TypeSet& set, bool negated) {
    if (!negated) {
        impose(Constraint::typeSet(obj, set));
        return;
    }
    impose(Constraint::typeSet(obj, differenceSets(effectiveSet(obj), set)));
}

TypeSet ConstraintStore::effectiveSet(HeapAddr obj) const {
    TypeSet acc;
    bool first = true;
    for (const auto& c : items_) {
        if (c.kind != Constraint::Kind::TypeSet || c.obj != obj) continue;
        acc = first ? c.set : intersectSets(acc, c.set);
        first = false;
    }
    return acc;
}

std::vector<HeapAddr> ConstraintStore::constrainedObjects() const {
    std::set<HeapAddr> s;
    for (const auto& c : items_)
        if (c.kind == Constraint::Kind::TypeSet) s.insert(c.obj);
    return {s.begin(), s.end()};
}

void ConstraintStore::collectIntVars(std::set<VarId>& out) const {
    for (const auto& c : items_) {
        if (c.kind != Constraint::Kind::Arith) continue;
        c.lhs.collectVars(out);
        c.rhs.collectVars(out);
    }
}

void ConstraintStore::collectAddrs(std::set<HeapAddr>& out) const {
    for (const auto& c : items_) {
        if (c.kind == Constraint::Kind::TypeSet) out.insert(c.obj);
        if (c.kind == Constraint::Kind::TypeEq) {
            out.insert(c.a);
            out.insert(c.b);
        }
    }
}

namespace {

void spend(long long& budget) {
    if (--budget < 0) throw EngineLimitError("constraint search budget exhausted");
}

// Per-constraint variable sets, used to evaluate each constraint as soon as
// its last participant gets a value during search.
struct ArithPlan {
    std::vector<const Constraint*> ground;          // no variables
    std::vector<std::vector<const Constraint*>> at; // ready when var i assigned

    ArithPlan(const std::vector<Constraint>& items, const std::vector<VarId>& order) {
        std::map<VarId, size_t> pos;
        for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
        at.resize(order.size());
        for (const auto& c : items) {
            if (c.kind != Constraint::Kind::Arith) continue;
            std::set<VarId> vars;
            c.lhs.collectVars(vars);
            c.rhs.collectVars(vars);
            if (vars.empty()) {
                ground.push_back(&c);
                continue;
            }
            size_t ready = 0;
            for (VarId v : vars) {
                auto it = pos.find(v);
                if (it == pos.end())
                    throw std::logic_error("arith variable missing from search order");
                ready = std::max(ready, it->second);
            }
            at[ready].push_back(&c);
        }
    }

    static bool holds(const Constraint& c, const std::map<VarId, long long>& asg) {
        return evalRel(c.rel, c.lhs.eval(asg), c.rhs.eval(asg));
    }
};

struct TypeEqPlan {
    std::vector<const Constraint*> fixed;           // both endpoints concrete
    std::vector<std::vector<const Constraint*>> at; // ready when object i assigned

    TypeEqPlan(const std::vector<Constraint>& items, const std::vector<HeapAddr>& order,
               const std::map<HeapAddr, TypeId>& concrete) {
        std::map<HeapAddr, size_t> pos;
        for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
        at.resize(order.size());
        for (const auto& c : items) {
            if (c.kind != Constraint::Kind::TypeEq) continue;
            int ready = -1;
            for (HeapAddr end : {c.a, c.b}) {
                if (concrete.count(end)) continue;
                auto it = pos.find(end);
                if (it == pos.end())
                    throw std::logic_error("type-equality endpoint missing from search order");
                ready = std::max(ready, static_cast<int>(it->second));
            }
            if (ready < 0)
                fixed.push_back(&c);
            else
                at[static_cast<size_t>(ready)].push_back(&c);
        }
    }

    static bool holds(const Constraint& c, const std::map<HeapAddr, TypeId>& types) {
        return (types.at(c.a) == types.at(c.b)) != c.negated;
    }
};

}  // namespace

bool ConstraintStore::checkConsistency(long long lo, long long hi, long long& budget,
                                       const std::map<HeapAddr, TypeId>& concreteTypes) const {
    for (HeapAddr obj : constrainedObjects())
        if (effectiveSet(obj).empty()) return false;

    // Type side: only objects tied together by type equalities need search;
    // everything else is covered by the emptiness check above.
    std::set<HeapAddr> eqObjs;
    for (const auto& c : items_) {
        if (c.kind != Constraint::Kind::TypeEq) continue;
        if (!concreteTypes.count(c.a)) eqObjs.insert(c.a);
        if (!concreteTypes.count(c.b)) eqObjs.insert(c.b);
    }
    std::vector<HeapAddr> objOrder(eqObjs.begin(), eqObjs.end());
    std::vector<TypeSet> objDomain;
    for (HeapAddr obj : objOrder) {
        TypeSet dom = effectiveSet(obj);
        if (dom.empty()) throw std::logic_error("type-equality endpoint without a type set");
        objDomain.push_back(std::move(dom));
    }
    TypeEqPlan tplan(items_, objOrder, concreteTypes);
    std::map<HeapAddr, TypeId> types = concreteTypes;
    for (const Constraint* c : tplan.fixed)
        if (!TypeEqPlan::holds(*c, types)) return false;

    auto dfsTypes = [&](auto&& self, size_t i) -> bool {
        if (i == objOrder.size()) return true;
        for (TypeId t : objDomain[i]) {
            spend(budget);
            types[objOrder[i]] = t;
            bool ok = true;
            for (const Constraint* c : tplan.at[i])
                if (!TypeEqPlan::holds(*c, types)) {
                    ok = false;
                    break;
                }
            if (ok && self(self, i + 1)) return true;
        }
        types.erase(objOrder[i]);
        return false;
    };
    if (!dfsTypes(dfsTypes, 0)) return false;

    // Arithmetic side.
    std::set<VarId> varSet;
    collectIntVars(varSet);
    std::vector<VarId> varOrder(varSet.begin(), varSet.end());
    ArithPlan aplan(items_, varOrder);
    std::map<VarId, long long> ints;
    for (const Constraint* c : aplan.ground)
        if (!ArithPlan::holds(*c, ints)) return false;

    auto dfsInts = [&](auto&& self, size_t i) -> bool {
        if (i == varOrder.size()) return true;
        for (long long v = lo; v <= hi; ++v) {
            spend(budget);
            ints[varOrder[i]] = v;
            bool ok = true;
            for (const Constraint* c : aplan.at[i])
                if (!ArithPlan::holds(*c, ints)) {
                    ok = false;
                    break;
                }
            if (ok && self(self, i + 1)) return true;
        }
        ints.erase(varOrder[i]);
        return false;
    };
    return dfsInts(dfsInts, 0);
}

void ConstraintStore::enumerateAssignments(
    const std::vector<HeapAddr>& objects, const std::vector<VarId>& vars, long long lo,
    long long hi, long long& budget, const std::map<HeapAddr, TypeId>& concreteTypes,
    const std::function<bool(const StoreAssignment&)>& cb) const {
    std::vector<TypeSet> objDomain;
    for (HeapAddr obj : objects) {
        bool constrained = false;
        for (const auto& c : items_)
            if (c.kind == Constraint::Kind::TypeSet && c.obj == obj) {
                constrained = true;
                break;
            }
        if (!constrained) throw std::logic_error("enumerating an object without a type set");
        TypeSet dom = effectiveSet(obj);
        if (dom.empty()) return;
        objDomain.push_back(std::move(dom));
    }

    TypeEqPlan tplan(items_, objects, concreteTypes);
    ArithPlan aplan(items_, vars);

    StoreAssignment asg;
    std::map<HeapAddr, TypeId> types = concreteTypes;
    for (const Constraint* c : tplan.fixed)
        if (!TypeEqPlan::holds(*c, types)) return;
    for (const Constraint* c : aplan.ground)
        if (!ArithPlan::holds(*c, asg.ints)) return;

    auto dfsInts = [&](auto&& self, size_t i) -> bool {
        if (i == vars.size()) {
            for (const auto& [obj, t] : types)
                if (!concreteTypes.count(obj)) asg.objectTypes[obj] = t;
            return cb(asg);
        }
        for (long long v = lo; v <= hi; ++v) {
            spend(budget);
            asg.ints[vars[i]] = v;
            bool ok = true;
            for (const Constraint* c : aplan.at[i])
                if (!ArithPlan::holds(*c, asg.ints)) {
                    ok = false;
                    break;
                }
            if (ok && !self(self, i + 1)) return false;
        }
        asg.ints.erase(vars[i]);
        return true;
    };

    auto dfsObjs = [&](auto&& self, size_t i) -> bool {
        if (i == objects.size()) return dfsInts(dfsInts, 0);
        for (TypeId t : objDomain[i]) {
            spend(budget);
            types[objects[i]] = t;
            bool ok = true;
            for (const Constraint* c : tplan.at[i])
                if (!TypeEqPlan::holds(*c, types)) {
                    ok = false;
                    break;
                }
            if (ok && !self(self, i + 1)) return false;
        }
        types.erase(objects[i]);
        return true;
    };

    dfsObjs(dfsObjs, 0);
}

std::vector<std::string> ConstraintStore::dumpLines(const ClassTable& table) const {
    std::vector<std::string> out;
    out.reserve(items_.size());
    for (const auto& c : items_) {
        switch (c.kind) {
            case Constraint::Kind::Arith:
                out.push_back("ARITH " + c.lhs.render() + " " + relToken(c.rel) + " " +
                              c.rhs.render());
                break;
            case Constraint::Kind::TypeSet: {
                std::string s = "TYPESET @" + std::to_string(c.obj) + "∈{";
                for (size_t i = 0; i < c.set.size(); ++i) {
                    if (i) s += ",";
                    s += table.name(c.set[i]);
                }
                s += "}";
                out.push_back(std::move(s));
                break;
            }
            case Constraint::Kind::TypeEq:
                out.push_back(std::string("TYPEEQ") + (c.negated ? "!" : "") + " @" +
                              std::to_string(c.a) + " @" + std::to_string(c.b));
                break;
        }
    }
    return out;
}

}  // namespace minimuli
