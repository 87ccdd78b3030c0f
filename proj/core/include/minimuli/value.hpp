// Runtime values. Integers always carry a symbolic expression tree; a ground
// integer is a constant tree. Booleans reuse the integer representation with
// a 0/1 domain so free booleans and comparison results share one constraint
// vocabulary.

#pragma once

#include <cstdint>
#include <string>

#include "minimuli/ast.hpp"
#include "minimuli/symint.hpp"

namespace minimuli {

using HeapAddr = std::uint32_t;

struct Value {
    enum class Kind { Int, Bool, Str, Ref, Null };

    Kind kind = Kind::Null;
    SymInt num;       // Int and Bool (0 = false, 1 = true)
    std::string str;  // Str
    HeapAddr addr = 0;

    static Value intVal(SymInt v) {
        Value out;
        out.kind = Kind::Int;
        out.num = std::move(v);
        return out;
    }
    static Value intConst(long long v) { return intVal(SymInt::constant(v)); }
    static Value boolVal(bool b) {
        Value out;
        out.kind = Kind::Bool;
        out.num = SymInt::constant(b ? 1 : 0);
        return out;
    }
    static Value boolSym(SymInt v) {
        Value out;
        out.kind = Kind::Bool;
        out.num = std::move(v);
        return out;
    }
    static Value strVal(std::string s) {
        Value out;
        out.kind = Kind::Str;
        out.str = std::move(s);
        return out;
    }
    static Value refVal(HeapAddr a) {
        Value out;
        out.kind = Kind::Ref;
        out.addr = a;
        return out;
    }
    static Value nullVal() { return Value{}; }

    bool isRefLike() const { return kind == Kind::Ref || kind == Kind::Null; }
    bool isGroundBool() const { return kind == Kind::Bool && num.isConst(); }
    bool groundBool() const { return num.constValue() != 0; }
};

// Identifies a field slot by its declaring class, so a redeclared name in a
// subclass occupies a distinct slot from the one it hides.
struct FieldRef {
    TypeId owner = kNoType;
    std::string name;

    bool operator<(const FieldRef& o) const {
        if (owner != o.owner) return owner < o.owner;
        return name < o.name;
    }
    bool operator==(const FieldRef& o) const { return owner == o.owner && name == o.name; }
};

}  // namespace minimuli
