// Constraint store: an ordered list of arithmetic relations, applicable-type
// sets, and type-equality links. The store is the single backtrackable fact
// base of a run; a mark is an index into the list and undo truncates to it.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "minimuli/class_table.hpp"
#include "minimuli/symint.hpp"
#include "minimuli/value.hpp"

namespace minimuli {

enum class Rel { Eq, Ne, Lt, Le, Gt, Ge };

Rel negateRel(Rel r);
const char* relToken(Rel r);
bool evalRel(Rel r, long long a, long long b);

struct Constraint {
    enum class Kind { Arith, TypeSet, TypeEq };
    Kind kind = Kind::Arith;

    // Arith: lhs rel rhs over symbolic integers.
    SymInt lhs, rhs;
    Rel rel = Rel::Eq;

    // TypeSet: obj's concrete type lies in `set`.
    HeapAddr obj = 0;
    TypeSet set;

    // TypeEq: a and b have equal (negated: unequal) concrete types.
    HeapAddr a = 0, b = 0;
    bool negated = false;

    static Constraint arith(SymInt lhs, Rel rel, SymInt rhs);
    static Constraint typeSet(HeapAddr obj, TypeSet set);
    static Constraint typeEq(HeapAddr a, HeapAddr b, bool negated);
};

// One full assignment over the objects and integer variables handed to
// enumerateAssignments.
struct StoreAssignment {
    std::map<HeapAddr, TypeId> objectTypes;
    std::map<VarId, long long> ints;
};

class ConstraintStore {
public:
    using Mark = std::size_t;

    Mark mark() const { return items_.size(); }
    void popToMark(Mark m) { items_.resize(m); }
    std::size_t size() const { return items_.size(); }
    const std::vector<Constraint>& items() const { return items_; }

    void impose(Constraint c) { items_.push_back(std::move(c)); }

    // Applicable-type imposition. A negated set is resolved immediately: the
    // stored constraint is the complement of `set` within obj's current
    // effective set, so the store only ever holds positive sets.
    void imposeTypeSet(HeapAddr obj, const TypeSet& set, bool negated);

    // Intersection of every type set imposed on obj; empty when none is.
    TypeSet effectiveSet(HeapAddr obj) const;

    // Objects with at least one type-set constraint, ascending.
    std::vector<HeapAddr> constrainedObjects() const;

    void collectIntVars(std::set<VarId>& out) const;
    void collectAddrs(std::set<HeapAddr>& out) const;

    // Satisfiability over integer domain [lo, hi], with concrete object types
    // supplied for type-equality endpoints that are not free. Type and
    // arithmetic facts never share variables, so they are checked
    // independently. Spends one unit of `budget` per assignment attempt and
    // throws EngineLimitError when it runs out.
    bool checkConsistency(long long lo, long long hi, long long& budget,
                          const std::map<HeapAddr, TypeId>& concreteTypes) const;

    // Enumerates every store-satisfying assignment over exactly `objects`
    // (types drawn from their effective sets, ascending id order) and `vars`
    // (values lo..hi), objects as the outer odometer and variables inner.
    // The callback returns false to stop early. Budget as above.
    void enumerateAssignments(const std::vector<HeapAddr>& objects,
                              const std::vector<VarId>& vars, long long lo, long long hi,
                              long long& budget,
                              const std::map<HeapAddr, TypeId>& concreteTypes,
                              const std::function<bool(const StoreAssignment&)>& cb) const;

    // One line per constraint, in imposition order.
    std::vector<std::string> dumpLines(const ClassTable& table) const;

private:
    std::vector<Constraint> items_;
};

}  // namespace minimuli
