// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any fail. Random criteria are seeded, so a
// run is reproducible.

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "minimuli/engine.hpp"
#include "minimuli/solution_format.hpp"
#include "oracles/concrete_interp.hpp"
#include "oracles/store_oracle.hpp"
#include "oracles/structeq_checker.hpp"
#include "support/gen_hierarchy.hpp"
#include "support/gen_program.hpp"
#include "support/sources.hpp"

using namespace minimuli;

namespace {

int failures = 0;
std::string detail;

void report(int n, const char* desc, bool ok) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", n, desc);
    if (!ok) {
        if (!detail.empty()) std::printf("        %s\n", detail.c_str());
        ++failures;
    }
    detail.clear();
}

bool expect(bool cond, const std::string& msg) {
    if (!cond && detail.empty()) detail = msg;
    return cond;
}

EngineOptions baseOpts() {
    EngineOptions o;
    o.domainLo = 1;
    o.domainHi = 16;
    return o;
}

RunResult runCorpus(const std::string& name, const std::string& entry = "main",
                    const EngineOptions& o = baseOpts()) {
    auto c = testsupport::compileCorpus(name);
    return runProgram(c.prog, c.table, entry, o);
}

std::vector<std::string> labelLines(const Solution& s) {
    std::vector<std::string> out;
    for (const auto& lab : s.labelings) out.push_back(labelingLine(lab));
    return out;
}

// --- criterion 1 -----------------------------------------------------------

bool criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    RunResult r = runCorpus("shapes.muli");
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    bool ok = expect(r.solutions.size() == 2, "expected 2 solutions");
    if (!ok) return false;
    ok &= expect(labelLines(r.solutions[0]) == std::vector<std::string>{"@1=Square _w1=4"},
                 "square branch labelings wrong");
    ok &= expect(labelLines(r.solutions[1]) ==
                     std::vector<std::string>{"@1=Rectangle _w2=1 _h3=16",
                                              "@1=Rectangle _w2=2 _h3=8",
                                              "@1=Rectangle _w2=4 _h3=4",
                                              "@1=Rectangle _w2=8 _h3=2",
                                              "@1=Rectangle _w2=16 _h3=1"},
                 "rectangle branch labelings wrong");
    for (const Solution& s : r.solutions)
        ok &= expect(s.output == std::vector<std::string>{"area is 16"}, "output wrong");
    ok &= expect(!r.incomplete, "search did not finish");
    ok &= expect(ms < 1000, "took " + std::to_string(ms) + "ms");
    return ok;
}

// --- criterion 2 -----------------------------------------------------------

bool criterion2() {
    auto c = testsupport::compileCorpus("dispatch.muli");
    RunResult r = runProgram(c.prog, c.table, "main", baseOpts());
    bool ok = expect(r.solutions.size() == 3, "expected 3 solutions");
    if (!ok) return false;
    ok &= expect(r.solutions[0].valueText == "1" && r.solutions[1].valueText == "2" &&
                     r.solutions[2].valueText == "3",
                 "solution values wrong");
    ok &= expect(r.stats.dispatchChoicePoints == 1, "expected exactly one dispatch branch");
    ok &= expect(r.stats.dispatchEvents.size() == 1, "expected one dispatch event");
    if (!ok) return false;
    const DispatchEvent& ev = r.stats.dispatchEvents[0];
    TypeId A = *c.table.lookup("A"), B = *c.table.lookup("B"), C = *c.table.lookup("C"),
           D = *c.table.lookup("D");
    ok &= expect(ev.preSet == TypeSet{A, B, C, D}, "pre set wrong");
    ok &= expect(ev.owners == TypeSet{A, B, D}, "implementation owners wrong");
    ok &= expect(ev.sets.size() == 3 && ev.sets[0] == TypeSet{A} &&
                     ev.sets[1] == TypeSet{B, C} && ev.sets[2] == TypeSet{D},
                 "per-owner instance sets wrong");
    return ok;
}

// --- criterion 3 -----------------------------------------------------------

bool criterion3() {
    std::mt19937_64 rng(77001);
    auto pick = [&](int lo, int hi) {
        return static_cast<int>(rng() % static_cast<unsigned long long>(hi - lo + 1)) + lo;
    };
    int branched = 0, committed = 0, ruledOut = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        testsupport::GenHierarchy h = testsupport::randomHierarchy(rng, pick(3, 8));
        int n = static_cast<int>(h.names.size());
        int t = pick(0, n - 1);
        if (h.instantiableCone(t).empty()) t = 0;
        int u = pick(0, n - 1);

        std::string src = h.source + "class Zz { int main() { " + h.names[size_t(t)] +
                          " x free; if (x instanceof " + h.names[size_t(u)] +
                          ") { return 1; } return 0; } }";
        EngineOptions o = baseOpts();
        o.label = EngineOptions::LabelMode::Off;
        auto c = testsupport::compileSource(src);
        RunResult r = runProgram(c.prog, c.table, "main", o);

        // Expectations straight from the recorded edge list.
        auto toIds = [&](const std::set<int>& s) {
            TypeSet out;
            for (int i : s) insertIntoSet(out, *c.table.lookup(h.names[size_t(i)]));
            return out;
        };
        TypeSet pre = toIds(h.instantiableCone(t));
        TypeSet cone = toIds(h.instantiableCone(u));
        TypeSet pass = intersectSets(pre, cone);
        TypeSet fail = differenceSets(pre, pass);

        if (pass.empty()) {
            ++ruledOut;
            if (!expect(r.stats.typeopEvents.empty(), "event on a statically impossible test") ||
                !expect(r.solutions.size() == 1 && r.solutions[0].valueText == "0",
                        "impossible test should return 0 once")) {
                detail += " (iteration " + std::to_string(iter) + ")";
                return false;
            }
            continue;
        }
        bool ok = expect(r.stats.typeopEvents.size() == 1, "expected one type-test event");
        if (ok) {
            const TypeOpEvent& ev = r.stats.typeopEvents[0];
            ok &= expect(!ev.isCast, "event mislabeled as cast");
            ok &= expect(ev.pre == pre, "pre set disagrees with the edge-list oracle");
            ok &= expect(ev.targetCone == cone, "target cone disagrees");
            ok &= expect(ev.pass == pass, "pass split disagrees");
            ok &= expect(ev.fail == fail, "fail split disagrees");
        }
        if (ok) {
            if (fail.empty()) {
                ++committed;
                ok &= expect(r.solutions.size() == 1 && r.solutions[0].valueText == "1",
                             "all-pass test should return 1 once");
                ok &= expect(r.stats.typeopChoicePoints == 0,
                             "single-survivor split must not branch");
            } else {
                ++branched;
                ok &= expect(r.solutions.size() == 2 && r.solutions[0].valueText == "1" &&
                                 r.solutions[1].valueText == "0",
                             "two-way split should return 1 then 0");
                ok &= expect(r.stats.typeopChoicePoints == 1, "expected one branch point");
            }
        }
        if (!ok) {
            detail += " (iteration " + std::to_string(iter) + ", program:\n" + src + ")";
            return false;
        }
    }
    // The generator must exercise all three shapes.
    return expect(branched >= 100, "too few branching cases: " + std::to_string(branched)) &&
           expect(committed >= 20, "too few all-pass cases: " + std::to_string(committed)) &&
           expect(ruledOut >= 20, "too few impossible cases: " + std::to_string(ruledOut));
}

// --- criterion 4 -----------------------------------------------------------

bool criterion4() {
    std::mt19937_64 rng(77002);
    auto pick = [&](long long lo, long long hi) {
        return static_cast<long long>(rng() % static_cast<unsigned long long>(hi - lo + 1)) +
               lo;
    };
    const TypeSet universe{1, 2, 3};
    auto tree = [&](auto&& self, int depth) -> SymInt {
        long long r = pick(0, depth <= 0 ? 1 : 2);
        if (r == 0) return SymInt::constant(pick(-4, 4));
        if (r == 1) return SymInt::variable(static_cast<VarId>(pick(1, 2)), "v");
        SymInt::Op ops[] = {SymInt::Op::Add, SymInt::Op::Sub, SymInt::Op::Mul};
        return SymInt::binary(ops[pick(0, 2)], self(self, depth - 1), self(self, depth - 1));
    };
    auto randomSubset = [&]() {
        TypeSet s;
        while (s.empty())
            for (TypeId t : universe)
                if (pick(0, 1)) insertIntoSet(s, t);
        return s;
    };

    int satisfiable = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        ConstraintStore store;
        testoracle::StoreProblem p;
        p.universe = universe;
        p.lo = -3;
        p.hi = 3;
        p.concreteTypes = {{90, 2}};
        long long nObj = pick(1, 2);
        for (HeapAddr o = 1; o <= static_cast<HeapAddr>(nObj); ++o) {
            p.objects.push_back(o);
            store.imposeTypeSet(o, randomSubset(), false);
            if (pick(0, 2) == 0) store.imposeTypeSet(o, randomSubset(), pick(0, 1) == 1);
        }
        for (long long i = 0, nEq = pick(0, 2); i < nEq; ++i)
            store.impose(Constraint::typeEq(
                static_cast<HeapAddr>(pick(1, nObj)),
                pick(0, 3) == 0 ? 90 : static_cast<HeapAddr>(pick(1, nObj)),
                pick(0, 1) == 1));
        p.vars = {1, 2};
        for (long long i = 0, nA = pick(0, 3); i < nA; ++i)
            store.impose(
                Constraint::arith(tree(tree, 2), static_cast<Rel>(pick(0, 5)), tree(tree, 2)));

        p.items = store.items();
        auto expected = testoracle::bruteForceAssignments(p);
        std::vector<StoreAssignment> actual;
        long long budget = 10'000'000;
        store.enumerateAssignments(p.objects, p.vars, p.lo, p.hi, budget, p.concreteTypes,
                                   [&](const StoreAssignment& a) {
                                       actual.push_back(a);
                                       return true;
                                   });
        if (!expect(actual.size() == expected.size(),
                    "assignment counts differ at iteration " + std::to_string(iter) + ": " +
                        std::to_string(actual.size()) + " vs " +
                        std::to_string(expected.size())))
            return false;
        for (size_t i = 0; i < actual.size(); ++i)
            if (!expect(testoracle::renderAssignment(actual[i]) ==
                            testoracle::renderAssignment(expected[i]),
                        "assignment order differs at iteration " + std::to_string(iter)))
                return false;
        long long budget2 = 10'000'000;
        if (!expect(store.checkConsistency(p.lo, p.hi, budget2, p.concreteTypes) ==
                        !expected.empty(),
                    "consistency verdict differs at iteration " + std::to_string(iter)))
            return false;
        if (!expected.empty()) ++satisfiable;
    }
    return expect(satisfiable > 50 && satisfiable < 950,
                  "degenerate satisfiability mix: " + std::to_string(satisfiable));
}

// --- criterion 5 -----------------------------------------------------------

bool criterion5() {
    const std::vector<std::pair<std::string, std::string>> entries = {
        {"shapes.muli", "main"},       {"dispatch.muli", "main"},
        {"fields.muli", "main"},       {"refeq.muli", "main"},
        {"typeops.muli", "castCase"},  {"typeops.muli", "instCase"},
        {"typeops.muli", "invalidCast"}, {"typeops.muli", "invalidInst"},
        {"structeq.muli", "main"},     {"structeq_free.muli", "main"},
        {"equals.muli", "direct"},     {"equals.muli", "flipped"},
        {"arith.muli", "main"},        {"trivial.muli", "f"},
        {"allfail.muli", "main"},      {"cycle.muli", "main"},
        {"nested_free.muli", "main"}};
    for (const auto& [file, entry] : entries) {
        RunResult r = runCorpus(file, entry);
        if (!expect(r.stats.fingerprintMismatches == 0,
                    file + " " + entry + ": " +
                        std::to_string(r.stats.fingerprintMismatches) +
                        " imperfect undo(s) detected"))
            return false;
        if (!expect(!r.incomplete, file + " " + entry + ": search incomplete")) return false;
    }
    return true;
}

// --- criterion 6 -----------------------------------------------------------

bool criterion6() {
    RunResult r = runCorpus("refeq.muli");
    bool ok = expect(r.stats.refEqEvals == 3, "expected 3 reference comparisons, saw " +
                                                  std::to_string(r.stats.refEqEvals));
    ok &= expect(r.stats.refEqStoreDelta == 0, "reference equality grew the store");
    ok &= expect(r.stats.condChoicePoints == 0 && r.stats.dispatchChoicePoints == 0 &&
                     r.stats.typeopChoicePoints == 0 && r.stats.structeqChoicePoints == 0,
                 "reference equality branched");
    ok &= expect(r.solutions.size() == 1 &&
                     r.solutions[0].output ==
                         std::vector<std::string>{"false", "true", "false"},
                 "comparison results wrong");
    return ok;
}

// --- criterion 7 -----------------------------------------------------------

bool criterion7() {
    const char* bodyA = "if (a #= b) { if (a.width + b.height == 5) { return 1; } } fail();";
    const char* bodyB = "if (b #= a) { if (a.width + b.height == 5) { return 1; } } fail();";
    auto makeSrc = [](const char* body) {
        return std::string(
                   "class Rectangle { int width; int height; }\n"
                   "class Main { int main() { Rectangle a free; Rectangle b free; ") +
               body + " } }";
    };
    auto ca = testsupport::compileSource(makeSrc(bodyA));
    auto cb = testsupport::compileSource(makeSrc(bodyB));
    EngineOptions o = baseOpts();
    o.domainHi = 8;
    RunResult ra = runProgram(ca.prog, ca.table, "main", o);
    RunResult rb = runProgram(cb.prog, cb.table, "main", o);

    bool ok = expect(ra.solutions.size() == 1 && rb.solutions.size() == 1,
                     "each orientation should succeed exactly once");
    if (!ok) return false;
    ok &= expect(ra.stats.structeqPairs == rb.stats.structeqPairs,
                 "operand order changed the amount of structural work");
    ok &= expect(testoracle::canonicalLabelings(ra.solutions[0]) ==
                     testoracle::canonicalLabelings(rb.solutions[0]),
                 "operand order changed the solution set");
    ok &= expect(!ra.solutions[0].labelings.empty(), "no labelings to validate");

    // Every labeled witness must satisfy structural equality as checked by
    // independent object reconstruction.
    for (const auto& lab : ra.solutions[0].labelings) {
        auto objs = testoracle::objectsFromLabeling(lab);
        ok &= expect(objs.size() == 2, "expected two labeled objects");
        if (objs.size() == 2)
            ok &= expect(testoracle::structurallyEqual(objs.at(1), objs.at(2)),
                         "a labeled witness is not structurally equal");
    }

    // The concrete-pattern program: witnesses match the pattern exactly when
    // the run returned 1.
    RunResult rc = runCorpus("structeq.muli");
    ok &= expect(rc.solutions.size() == 3, "pattern program should have 3 solutions");
    if (!ok) return ok;
    for (size_t i = 0; i < rc.solutions.size(); ++i) {
        bool shouldMatch = rc.solutions[i].valueText == "1";
        for (const auto& lab : rc.solutions[i].labelings) {
            auto objs = testoracle::objectsFromLabeling(lab);
            if (!objs.count(1)) continue;
            const testoracle::LabeledObject& w = objs.at(1);
            bool matches = w.type == "Rectangle" && w.fields.count("width") &&
                           w.fields.count("height") && w.fields.at("width") == 3 &&
                           w.fields.at("height") == 4;
            if (!expect(matches == shouldMatch,
                        "solution " + std::to_string(i + 1) +
                            " has a witness on the wrong side of the pattern"))
                return false;
        }
    }
    return ok;
}

// --- criterion 8 -----------------------------------------------------------

bool criterion8() {
    std::mt19937_64 rng(77003);
    testsupport::GroundProgramGen gen(rng);
    int returns = 0, exceptions = 0, failed = 0, voids = 0;
    for (int iter = 0; iter < 200; ++iter) {
        std::string src = gen.generate();
        auto c = testsupport::compileSource(src);
        testoracle::COutcome expected = testoracle::ConcreteInterp(c.prog).run("main");

        EngineOptions o;  // stock domain; ground programs never label
        o.label = EngineOptions::LabelMode::Off;
        RunResult r = runProgram(c.prog, c.table, "main", o);

        bool ok = expect(r.stats.condChoicePoints == 0 && r.stats.dispatchChoicePoints == 0 &&
                             r.stats.typeopChoicePoints == 0 &&
                             r.stats.structeqChoicePoints == 0,
                         "a ground program branched");
        if (ok && expected.kind == testoracle::COutcome::K::Failed) {
            ++failed;
            ok &= expect(r.solutions.empty(), "oracle failed but the engine found solutions");
        } else if (ok) {
            ok &= expect(r.solutions.size() == 1, "expected exactly one solution");
            if (ok) {
                const Solution& s = r.solutions[0];
                if (expected.kind == testoracle::COutcome::K::Exception) {
                    ++exceptions;
                    ok &= expect(s.kind == Solution::Kind::Exception &&
                                     s.exceptionName == expected.exceptionName,
                                 "exception disagrees: engine " + s.valueText + "/" +
                                     s.exceptionName + " vs oracle " +
                                     expected.exceptionName);
                } else {
                    ++returns;
                    if (!expected.hasValue) ++voids;
                    ok &= expect(s.kind == Solution::Kind::Return, "kind disagrees");
                    ok &= expect(s.valueText == expected.valueText(),
                                 "value disagrees: engine " + s.valueText + " vs oracle " +
                                     expected.valueText());
                }
                ok &= expect(s.output == expected.output, "output disagrees");
            }
        }
        if (!ok) {
            detail += " (iteration " + std::to_string(iter) + ", program:\n" + src + ")";
            return false;
        }
    }
    return expect(returns >= 100, "too few returning programs: " + std::to_string(returns)) &&
           expect(exceptions >= 5, "too few exception programs: " + std::to_string(exceptions)) &&
           expect(failed >= 5, "too few failing programs: " + std::to_string(failed)) &&
           expect(voids >= 5, "too few valueless returns: " + std::to_string(voids));
}

}  // namespace

int main() {
    report(1, "the canonical free-shape program finds its full solution set quickly",
           criterion1());
    report(2, "dispatch on a free receiver branches once with the exact implementation split",
           criterion2());
    report(3, "type tests split applicable sets per an edge-list oracle on 1000 random hierarchies",
           criterion3());
    report(4, "store enumeration matches brute force on 1000 random constraint stores",
           criterion4());
    report(5, "every backtrack restores the exact engine state across the whole corpus",
           criterion5());
    report(6, "reference equality decides immediately: no branching, no new constraints",
           criterion6());
    report(7, "structural equality is symmetric and its witnesses verify independently",
           criterion7());
    report(8, "200 random ground programs agree with a reference interpreter", criterion8());
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
