// Immutable class hierarchy with the subtype-set queries that drive
// non-deterministic dispatch and type tests on unresolved objects.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minimuli/ast.hpp"

namespace minimuli {

// Sorted, duplicate-free vector of TypeIds. Id order equals declaration
// order (the implicit root type first), so iterating a TypeSet also walks
// declaration order.
using TypeSet = std::vector<TypeId>;

TypeSet intersectSets(const TypeSet& a, const TypeSet& b);
TypeSet differenceSets(const TypeSet& a, const TypeSet& b);
bool setContains(const TypeSet& s, TypeId t);
void insertIntoSet(TypeSet& s, TypeId t);

enum class NativeMethod { None, ObjectToString, ObjectEquals };

struct MethodInfo {
    std::string name;
    std::vector<StaticType> params;
    StaticType ret;
    bool isAbstract = false;
    NativeMethod native = NativeMethod::None;
    TypeId owner = kNoType;
    const MethodDecl* decl = nullptr;  // null for built-ins
};

struct FieldInfo {
    std::string name;
    StaticType type;
    TypeId owner = kNoType;
};

struct ClassInfo {
    std::string name;
    TypeId id = kNoType;
    bool isInterface = false;
    bool isAbstract = false;            // interfaces are always abstract
    TypeId superClass = kNoType;        // root type has none
    std::vector<TypeId> interfaces;     // direct: implements (class) / extends (interface)
    std::vector<FieldInfo> fields;      // own declarations, in order
    std::vector<MethodInfo> methods;    // own declarations, in order
    const ClassDecl* decl = nullptr;    // null for the root type
};

class ClassTable {
public:
    // Builds the table from a parsed program: resolves names, validates the
    // hierarchy (single class extension, interface rules, acyclicity,
    // implementation completeness, signature conflicts). Throws CompileError.
    static ClassTable build(const Program& program);

    static constexpr TypeId kObject = 0;

    size_t size() const { return classes_.size(); }
    const ClassInfo& info(TypeId t) const { return classes_.at(t); }
    const std::string& name(TypeId t) const { return classes_.at(t).name; }
    std::optional<TypeId> lookup(const std::string& name) const;

    bool isInstantiable(TypeId t) const;
    // True when `sub` equals `sup` or transitively extends/implements it.
    bool isSubtypeOrSame(TypeId sub, TypeId sup) const;

    // All strict transitive subtypes of t (classes and interfaces).
    TypeSet getSubtypes(TypeId t) const;
    // getSubtypes(t), plus t itself when t is non-abstract.
    TypeSet relevantTypes(TypeId t) const;
    // t plus all of its strict subtypes.
    TypeSet coneOf(TypeId t) const;
    // Non-abstract classes in coneOf(t); initial applicable set of a free
    // object declared with static type t.
    TypeSet instantiableCone(TypeId t) const;

    // Class whose body a virtual call on a concrete instance of `c` runs:
    // nearest ancestor-or-self declaring a non-abstract (name, arity) body.
    // kNoType when nothing matches.
    TypeId dispatchOwner(TypeId c, const std::string& name, size_t arity) const;

    // Owners of the method bodies the instantiable members of `candidates`
    // dispatch to. Throws when a candidate has no implementation at all.
    TypeSet getImplementations(const TypeSet& candidates, const std::string& name,
                               size_t arity) const;

    // Instantiable members of `universe` whose dispatch lands on `owner`'s
    // body. `owner` must declare a non-abstract (name, arity).
    TypeSet instanceTypesForImplementation(TypeId owner, const std::string& name, size_t arity,
                                           const TypeSet& universe) const;

    // Static member resolution, walking superclasses and interfaces; the
    // root type's built-ins are the final fallback for methods.
    const FieldInfo* resolveField(TypeId staticCls, const std::string& name) const;
    const MethodInfo* resolveMethod(TypeId staticCls, const std::string& name,
                                    size_t arity) const;
    const MethodInfo* ownMethod(TypeId cls, const std::string& name, size_t arity) const;

    // Field frame of a concrete instance, root-first in declaration order.
    std::vector<const FieldInfo*> allFieldsInOrder(TypeId t) const;

    // Most-derived common superclass (classes only; falls back to the root).
    TypeId commonClassAncestor(TypeId a, TypeId b) const;

private:
    std::vector<ClassInfo> classes_;
    std::map<std::string, TypeId> byName_;
    std::vector<std::vector<TypeId>> children_;   // direct subtype edges
    std::vector<TypeSet> ancestors_;              // strict, transitive
};

}  // namespace minimuli
