#include <doctest.h>

#include "minimuli/class_table.hpp"
#include "minimuli/diagnostics.hpp"
#include "minimuli/parser.hpp"
#include "support/sources.hpp"

using namespace minimuli;

namespace {

TypeSet named(const ClassTable& t, std::initializer_list<const char*> names) {
    TypeSet s;
    for (const char* n : names) insertIntoSet(s, *t.lookup(n));
    return s;
}

}  // namespace

TEST_CASE("set helpers keep vectors sorted and duplicate-free") {
    TypeSet s;
    insertIntoSet(s, 3);
    insertIntoSet(s, 1);
    insertIntoSet(s, 3);
    CHECK(s == TypeSet{1, 3});
    CHECK(setContains(s, 3));
    CHECK_FALSE(setContains(s, 2));
    CHECK(intersectSets({1, 2, 3}, {2, 3, 4}) == TypeSet{2, 3});
    CHECK(differenceSets({1, 2, 3}, {2}) == TypeSet{1, 3});
    CHECK(intersectSets({1}, {}) == TypeSet{});
}

TEST_CASE("linear class chain: cones, subtypes, dispatch owners") {
    auto c = testsupport::compileCorpus("dispatch.muli");
    const ClassTable& t = c.table;
    TypeId A = *t.lookup("A"), B = *t.lookup("B"), C = *t.lookup("C"), D = *t.lookup("D");

    CHECK(t.name(ClassTable::kObject) == "Object");
    CHECK(t.isSubtypeOrSame(D, A));
    CHECK(t.isSubtypeOrSame(D, ClassTable::kObject));
    CHECK_FALSE(t.isSubtypeOrSame(A, D));

    CHECK(t.getSubtypes(A) == named(t, {"B", "C", "D"}));
    CHECK(t.coneOf(A) == named(t, {"A", "B", "C", "D"}));
    CHECK(t.instantiableCone(A) == named(t, {"A", "B", "C", "D"}));
    CHECK(t.relevantTypes(A) == named(t, {"A", "B", "C", "D"}));

    // Every concrete type dispatches m/0 to the nearest body above it.
    CHECK(t.dispatchOwner(A, "m", 0) == A);
    CHECK(t.dispatchOwner(B, "m", 0) == B);
    CHECK(t.dispatchOwner(C, "m", 0) == B);
    CHECK(t.dispatchOwner(D, "m", 0) == D);
    CHECK(t.dispatchOwner(A, "missing", 0) == kNoType);
    // Root built-ins resolve for every class.
    CHECK(t.dispatchOwner(C, "toString", 0) == ClassTable::kObject);

    CHECK(t.getImplementations(t.instantiableCone(A), "m", 0) == named(t, {"A", "B", "D"}));
    TypeSet universe = t.instantiableCone(A);
    CHECK(t.instanceTypesForImplementation(A, "m", 0, universe) == named(t, {"A"}));
    CHECK(t.instanceTypesForImplementation(B, "m", 0, universe) == named(t, {"B", "C"}));
    CHECK(t.instanceTypesForImplementation(D, "m", 0, universe) == named(t, {"D"}));
}

TEST_CASE("interface hierarchy: abstract nodes drop out of instantiable cones") {
    auto c = testsupport::compileCorpus("shapes.muli");
    const ClassTable& t = c.table;
    TypeId shape = *t.lookup("Shape");

    CHECK(t.info(shape).isInterface);
    CHECK_FALSE(t.isInstantiable(shape));
    CHECK(t.coneOf(shape) == named(t, {"Shape", "Square", "Rectangle"}));
    CHECK(t.instantiableCone(shape) == named(t, {"Square", "Rectangle"}));
    // An interface is abstract, so relevantTypes excludes it.
    CHECK(t.relevantTypes(shape) == named(t, {"Square", "Rectangle"}));

    CHECK(t.getImplementations(t.instantiableCone(shape), "area", 0) ==
          named(t, {"Square", "Rectangle"}));
    // A candidate set with no implementation anywhere is a logic error.
    CHECK_THROWS(t.getImplementations(t.instantiableCone(shape), "perimeter", 0));
}

TEST_CASE("field hiding keeps one slot per declaring class") {
    auto c = testsupport::compileCorpus("fields.muli");
    const ClassTable& t = c.table;
    TypeId A = *t.lookup("A"), B = *t.lookup("B");

    const FieldInfo* viaA = t.resolveField(A, "i");
    const FieldInfo* viaB = t.resolveField(B, "i");
    REQUIRE(viaA != nullptr);
    REQUIRE(viaB != nullptr);
    CHECK(viaA->owner == A);
    CHECK(viaB->owner == B);

    auto frame = t.allFieldsInOrder(B);
    REQUIRE(frame.size() == 2);
    CHECK(frame[0]->owner == A);  // root-first
    CHECK(frame[1]->owner == B);
    CHECK(t.allFieldsInOrder(A).size() == 1);
}

TEST_CASE("method resolution walks supertypes and ends at the built-ins") {
    auto c = testsupport::compileCorpus("equals.muli");
    const ClassTable& t = c.table;
    TypeId P = *t.lookup("P"), Q = *t.lookup("Q");

    const MethodInfo* own = t.ownMethod(Q, "equals", 1);
    REQUIRE(own != nullptr);
    CHECK(own->owner == Q);
    CHECK(t.ownMethod(Q, "toString", 0) == nullptr);

    const MethodInfo* inherited = t.resolveMethod(Q, "toString", 0);
    REQUIRE(inherited != nullptr);
    CHECK(inherited->owner == ClassTable::kObject);
    CHECK(inherited->native == NativeMethod::ObjectToString);

    const MethodInfo* eq = t.resolveMethod(ClassTable::kObject, "equals", 1);
    REQUIRE(eq != nullptr);
    CHECK(eq->native == NativeMethod::ObjectEquals);
    CHECK(t.dispatchOwner(P, "equals", 1) == P);
    CHECK(t.dispatchOwner(Q, "equals", 1) == Q);
    CHECK(t.resolveMethod(P, "nothing", 3) == nullptr);
}

TEST_CASE("common class ancestor ignores interfaces and falls back to the root") {
    auto shapes = testsupport::compileCorpus("shapes.muli");
    const ClassTable& t = shapes.table;
    TypeId sq = *t.lookup("Square"), re = *t.lookup("Rectangle");
    // Square and Rectangle only share an interface; class-wise they meet at the root.
    CHECK(t.commonClassAncestor(sq, re) == ClassTable::kObject);
    CHECK(t.commonClassAncestor(sq, sq) == sq);

    auto chain = testsupport::compileCorpus("dispatch.muli");
    const ClassTable& u = chain.table;
    CHECK(u.commonClassAncestor(*u.lookup("D"), *u.lookup("B")) == *u.lookup("B"));
    CHECK(u.commonClassAncestor(*u.lookup("C"), *u.lookup("D")) == *u.lookup("C"));
}

TEST_CASE("hierarchy validation rejects malformed programs") {
    CHECK_THROWS_AS(ClassTable::build(parse("class A {} class A {}")), CompileError);
    CHECK_THROWS_AS(ClassTable::build(parse("class A extends Missing {}")), CompileError);
    CHECK_THROWS_AS(ClassTable::build(parse("class A extends B {} class B extends A {}")),
                    CompileError);
    CHECK_THROWS_AS(ClassTable::build(parse("interface I {} class A extends I {}")),
                    CompileError);
    CHECK_THROWS_AS(ClassTable::build(parse("class B {} class A implements B {}")),
                    CompileError);
    // Concrete class must implement its interface obligations.
    CHECK_THROWS_AS(ClassTable::build(parse("interface I { int f(); } class A implements I {}")),
                    CompileError);
    // Reusing the root type's name is rejected.
    CHECK_THROWS_AS(ClassTable::build(parse("class Object {}")), CompileError);
    // A class carrying its own abstract redeclaration stays abstract and is exempt.
    Program ok = parse("interface I { int f(); } class A implements I { abstract int f(); }");
    ClassTable t = ClassTable::build(ok);
    CHECK(t.info(*t.lookup("A")).isAbstract);
    CHECK_FALSE(t.isInstantiable(*t.lookup("A")));
}
