#include "minimuli/class_table.hpp"

#include <algorithm>
#include <stdexcept>

#include "minimuli/diagnostics.hpp"

namespace minimuli {

TypeSet intersectSets(const TypeSet& a, const TypeSet& b) {
    TypeSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

TypeSet differenceSets(const TypeSet& a, const TypeSet& b) {
    TypeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool setContains(const TypeSet& s, TypeId t) {
    return std::binary_search(s.begin(), s.end(), t);
}

void insertIntoSet(TypeSet& s, TypeId t) {
    auto it = std::lower_bound(s.begin(), s.end(), t);
    if (it == s.end() || *it != t) s.insert(it, t);
}

namespace {

constexpr const char* kRootName = "Object";

StaticType resolveTypeName(const std::string& name, const std::map<std::string, TypeId>& byName,
                           SrcLoc loc) {
    if (name == "int") return StaticType::intType();
    if (name == "boolean") return StaticType::boolType();
    if (name == "String") return StaticType::strType();
    auto it = byName.find(name);
    if (it == byName.end())
        throw CompileError("unknown type name '" + name + "'", loc.line, loc.col);
    return StaticType::ref(it->second);
}

}  // namespace

ClassTable ClassTable::build(const Program& program) {
    ClassTable t;

    // Root type with built-in toString/equals.
    ClassInfo root;
    root.name = kRootName;
    root.id = kObject;
    {
        MethodInfo toString;
        toString.name = "toString";
        toString.ret = StaticType::strType();
        toString.native = NativeMethod::ObjectToString;
        toString.owner = kObject;
        root.methods.push_back(std::move(toString));

        MethodInfo equals;
        equals.name = "equals";
        equals.params = {StaticType::ref(kObject)};
        equals.ret = StaticType::boolType();
        equals.native = NativeMethod::ObjectEquals;
        equals.owner = kObject;
        root.methods.push_back(std::move(equals));
    }
    t.classes_.push_back(std::move(root));
    t.byName_[kRootName] = kObject;

    for (const auto& c : program.classes) {
        if (t.byName_.count(c.name))
            throw CompileError("duplicate class name '" + c.name + "'", c.loc.line, c.loc.col);
        ClassInfo ci;
        ci.name = c.name;
        ci.id = static_cast<TypeId>(t.classes_.size());
        ci.isInterface = c.isInterface;
        ci.decl = &c;
        t.byName_[c.name] = ci.id;
        t.classes_.push_back(std::move(ci));
    }

    // Link supertypes.
    for (auto& ci : t.classes_) {
        if (!ci.decl) continue;
        const ClassDecl& c = *ci.decl;
        if (c.extendsName) {
            auto it = t.byName_.find(*c.extendsName);
            if (it == t.byName_.end())
                throw CompileError("unknown type name '" + *c.extendsName + "'", c.loc.line,
                                   c.loc.col);
            const ClassInfo& sup = t.classes_[it->second];
            if (ci.isInterface) {
                if (!sup.isInterface)
                    throw CompileError("interface '" + ci.name + "' cannot extend a class",
                                       c.loc.line, c.loc.col);
                ci.interfaces.push_back(sup.id);
            } else {
                if (sup.isInterface)
                    throw CompileError("class '" + ci.name + "' cannot extend an interface",
                                       c.loc.line, c.loc.col);
                ci.superClass = sup.id;
            }
        } else if (!ci.isInterface) {
            ci.superClass = kObject;
        }
        for (const auto& iname : c.implementsNames) {
            if (ci.isInterface)
                throw CompileError("interface '" + ci.name + "' cannot use implements",
                                   c.loc.line, c.loc.col);
            auto it = t.byName_.find(iname);
            if (it == t.byName_.end())
                throw CompileError("unknown type name '" + iname + "'", c.loc.line, c.loc.col);
            if (!t.classes_[it->second].isInterface)
                throw CompileError("'" + iname + "' is not an interface", c.loc.line, c.loc.col);
            ci.interfaces.push_back(it->second);
        }
    }

    // Acyclicity over all supertype edges.
    {
        std::vector<int> state(t.classes_.size(), 0);
        auto visit = [&](auto&& self, TypeId v) -> void {
            state[v] = 1;
            const ClassInfo& ci = t.classes_[v];
            auto step = [&](TypeId u) {
                if (state[u] == 1)
                    throw CompileError("inheritance cycle involving '" + t.classes_[v].name + "'",
                                       ci.decl ? ci.decl->loc.line : 0,
                                       ci.decl ? ci.decl->loc.col : 0);
                if (state[u] == 0) self(self, u);
            };
            if (ci.superClass != kNoType) step(ci.superClass);
            for (TypeId u : ci.interfaces) step(u);
            state[v] = 2;
        };
        for (TypeId v = 0; v < t.classes_.size(); ++v)
            if (state[v] == 0) visit(visit, v);
    }

    // Members: resolve signatures, infer abstractness.
    for (auto& ci : t.classes_) {
        if (!ci.decl) continue;
        const ClassDecl& c = *ci.decl;
        if (ci.isInterface && !c.fields.empty())
            throw CompileError("interface '" + ci.name + "' cannot declare fields",
                               c.fields[0].loc.line, c.fields[0].loc.col);
        for (const auto& f : c.fields) {
            for (const auto& prev : ci.fields)
                if (prev.name == f.name)
                    throw CompileError("duplicate field '" + f.name + "' in '" + ci.name + "'",
                                       f.loc.line, f.loc.col);
            FieldInfo fi;
            fi.name = f.name;
            fi.type = resolveTypeName(f.typeName, t.byName_, f.loc);
            fi.owner = ci.id;
            ci.fields.push_back(std::move(fi));
        }
        for (const auto& m : c.methods) {
            MethodInfo mi;
            mi.name = m.name;
            mi.ret = resolveTypeName(m.retTypeName, t.byName_, m.loc);
            for (const auto& p : m.params)
                mi.params.push_back(resolveTypeName(p.typeName, t.byName_, p.loc));
            mi.owner = ci.id;
            mi.decl = &m;
            if (ci.isInterface) {
                if (m.hasBody)
                    throw CompileError("interface method '" + m.name + "' cannot have a body",
                                       m.loc.line, m.loc.col);
                mi.isAbstract = true;
            } else {
                if (m.isAbstract && m.hasBody)
                    throw CompileError("abstract method '" + m.name + "' cannot have a body",
                                       m.loc.line, m.loc.col);
                if (!m.isAbstract && !m.hasBody)
                    throw CompileError("method '" + m.name + "' needs a body or 'abstract'",
                                       m.loc.line, m.loc.col);
                mi.isAbstract = m.isAbstract;
            }
            for (const auto& prev : ci.methods)
                if (prev.name == mi.name && prev.params.size() == mi.params.size())
                    throw CompileError("duplicate method '" + mi.name + "' in '" + ci.name + "'",
                                       m.loc.line, m.loc.col);
            ci.isAbstract = ci.isAbstract || mi.isAbstract;
            ci.methods.push_back(std::move(mi));
        }
        if (ci.isInterface) ci.isAbstract = true;
    }

    // Subtype edges and transitive ancestor sets.
    t.children_.assign(t.classes_.size(), {});
    for (const auto& ci : t.classes_) {
        if (ci.superClass != kNoType) t.children_[ci.superClass].push_back(ci.id);
        for (TypeId u : ci.interfaces) t.children_[u].push_back(ci.id);
        if (ci.isInterface && ci.interfaces.empty() && ci.decl)
            t.children_[kObject].push_back(ci.id);  // interfaces sit under the root, too
    }
    t.ancestors_.assign(t.classes_.size(), {});
    for (TypeId v = 0; v < t.classes_.size(); ++v) {
        const ClassInfo& ci = t.classes_[v];
        TypeSet& anc = t.ancestors_[v];
        auto absorb = [&](TypeId u) {
            insertIntoSet(anc, u);
            for (TypeId w : t.ancestors_[u]) insertIntoSet(anc, w);
        };
        if (ci.superClass != kNoType) absorb(ci.superClass);
        for (TypeId u : ci.interfaces) absorb(u);
        if (ci.decl && ci.isInterface) insertIntoSet(anc, kObject);
        // Declaration order puts supertypes at lower ids only when the guest
        // declares them first; a second pass closes the remaining cases.
    }
    // Ancestor sets may be incomplete when a subtype is declared before its
    // supertype; iterate to a fixed point (hierarchies are tiny).
    for (bool changed = true; changed;) {
        changed = false;
        for (TypeId v = 0; v < t.classes_.size(); ++v) {
            TypeSet& anc = t.ancestors_[v];
            size_t before = anc.size();
            TypeSet direct = anc;
            for (TypeId u : direct)
                for (TypeId w : t.ancestors_[u]) insertIntoSet(anc, w);
            if (anc.size() != before) changed = true;
        }
    }

    // Override compatibility and implementation completeness.
    for (const auto& ci : t.classes_) {
        for (const auto& mi : ci.methods) {
            for (TypeId a : t.ancestors_[ci.id]) {
                const MethodInfo* base = t.ownMethod(a, mi.name, mi.params.size());
                if (base && (base->params != mi.params || base->ret != mi.ret))
                    throw CompileError("method '" + mi.name + "' in '" + ci.name +
                                           "' conflicts with the declaration in '" +
                                           t.classes_[a].name + "'",
                                       mi.decl ? mi.decl->loc.line : 0,
                                       mi.decl ? mi.decl->loc.col : 0);
            }
        }
        if (ci.isInterface || ci.isAbstract) continue;
        for (TypeId a : t.ancestors_[ci.id]) {
            for (const auto& base : t.classes_[a].methods) {
                if (!base.isAbstract) continue;
                if (t.dispatchOwner(ci.id, base.name, base.params.size()) == kNoType)
                    throw CompileError("class '" + ci.name + "' does not implement '" + base.name +
                                           "' declared in '" + t.classes_[a].name + "'",
                                       ci.decl ? ci.decl->loc.line : 0,
                                       ci.decl ? ci.decl->loc.col : 0);
            }
        }
    }

    return t;
}

std::optional<TypeId> ClassTable::lookup(const std::string& name) const {
    auto it = byName_.find(name);
    if (it == byName_.end()) return std::nullopt;
    return it->second;
}

bool ClassTable::isInstantiable(TypeId t) const {
    const ClassInfo& ci = classes_.at(t);
    return !ci.isInterface && !ci.isAbstract;
}

bool ClassTable::isSubtypeOrSame(TypeId sub, TypeId sup) const {
    return sub == sup || setContains(ancestors_.at(sub), sup);
}

TypeSet ClassTable::getSubtypes(TypeId t) const {
    TypeSet out;
    std::vector<TypeId> work = children_.at(t);
    while (!work.empty()) {
        TypeId v = work.back();
        work.pop_back();
        if (setContains(out, v)) continue;
        insertIntoSet(out, v);
        for (TypeId u : children_[v]) work.push_back(u);
    }
    return out;
}

TypeSet ClassTable::relevantTypes(TypeId t) const {
    TypeSet out = getSubtypes(t);
    if (isInstantiable(t)) insertIntoSet(out, t);
    return out;
}

TypeSet ClassTable::coneOf(TypeId t) const {
    TypeSet out = getSubtypes(t);
    insertIntoSet(out, t);
    return out;
}

TypeSet ClassTable::instantiableCone(TypeId t) const {
    TypeSet out;
    for (TypeId u : coneOf(t))
        if (isInstantiable(u)) out.push_back(u);
    return out;
}

TypeId ClassTable::dispatchOwner(TypeId c, const std::string& name, size_t arity) const {
    for (TypeId v = c; v != kNoType; v = classes_.at(v).superClass) {
        const MethodInfo* mi = ownMethod(v, name, arity);
        if (mi && !mi->isAbstract) return v;
    }
    return kNoType;
}

TypeSet ClassTable::getImplementations(const TypeSet& candidates, const std::string& name,
                                       size_t arity) const {
    TypeSet owners;
    for (TypeId c : candidates) {
        if (!isInstantiable(c)) continue;
        TypeId o = dispatchOwner(c, name, arity);
        if (o == kNoType)
            throw std::logic_error("no implementation of '" + name + "' reachable from '" +
                                   classes_.at(c).name + "'");
        insertIntoSet(owners, o);
    }
    return owners;
}

TypeSet ClassTable::instanceTypesForImplementation(TypeId owner, const std::string& name,
                                                   size_t arity, const TypeSet& universe) const {
    const MethodInfo* mi = ownMethod(owner, name, arity);
    if (!mi || mi->isAbstract)
        throw std::logic_error("'" + classes_.at(owner).name + "' declares no body for '" + name +
                               "'");
    TypeSet out;
    for (TypeId c : universe)
        if (isInstantiable(c) && dispatchOwner(c, name, arity) == owner) out.push_back(c);
    return out;
}

const FieldInfo* ClassTable::resolveField(TypeId staticCls, const std::string& name) const {
    for (TypeId v = staticCls; v != kNoType; v = classes_.at(v).superClass) {
        for (const auto& f : classes_[v].fields)
            if (f.name == name) return &f;
    }
    return nullptr;
}

const MethodInfo* ClassTable::ownMethod(TypeId cls, const std::string& name, size_t arity) const {
    for (const auto& m : classes_.at(cls).methods)
        if (m.name == name && m.params.size() == arity) return &m;
    return nullptr;
}

const MethodInfo* ClassTable::resolveMethod(TypeId staticCls, const std::string& name,
                                            size_t arity) const {
    // Class chain first, then interfaces, then the root built-ins.
    for (TypeId v = staticCls; v != kNoType; v = classes_.at(v).superClass) {
        if (const MethodInfo* m = ownMethod(v, name, arity)) return m;
    }
    for (TypeId a : ancestors_.at(staticCls)) {
        if (const MethodInfo* m = ownMethod(a, name, arity)) return m;
    }
    return ownMethod(kObject, name, arity);
}

std::vector<const FieldInfo*> ClassTable::allFieldsInOrder(TypeId t) const {
    std::vector<TypeId> chain;
    for (TypeId v = t; v != kNoType; v = classes_.at(v).superClass) chain.push_back(v);
    std::vector<const FieldInfo*> out;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        for (const auto& f : classes_[*it].fields) out.push_back(&f);
    return out;
}

TypeId ClassTable::commonClassAncestor(TypeId a, TypeId b) const {
    for (TypeId v = a; v != kNoType; v = classes_.at(v).superClass) {
        if (classes_.at(v).isInterface) continue;
        if (isSubtypeOrSame(b, v)) return v;
    }
    return kObject;
}

}  // namespace minimuli
