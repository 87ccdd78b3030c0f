#include <benchmark/benchmark.h>

#include <string>

#include "minimuli/class_table.hpp"
#include "minimuli/constraints.hpp"
#include "minimuli/engine.hpp"
#include "minimuli/parser.hpp"
#include "minimuli/typecheck.hpp"

namespace {

const char* kShapes = R"(
interface Shape { int area(); }
class Square implements Shape {
    int width;
    int area() { return width * width; }
}
class Rectangle implements Shape {
    int width;
    int height;
    int area() { return width * height; }
}
class Main {
    int main() {
        Shape s free;
        int a = s.area();
        if (a == 16) { println("hit"); } else { fail(); }
    }
}
)";

const char* kDispatch = R"(
class A { int m() { return 1; } }
class B extends A { int m() { return 2; } }
class C extends B { int m() { return 3; } }
class D extends C { int m() { return 4; } }
class E extends D { int m() { return 5; } }
class F extends E { int m() { return 6; } }
class Main {
    int main() {
        A a free;
        return a.m();
    }
}
)";

const char* kStructEq = R"(
class Rectangle {
    int width;
    int height;
}
class Main {
    int main() {
        Rectangle a free;
        Rectangle b free;
        if (a #= b) {
            if (a.width + b.height == 5) { return 1; }
        }
        fail();
    }
}
)";

struct Compiled {
    minimuli::Program prog;
    minimuli::ClassTable table;
};

Compiled compile(const char* src) {
    minimuli::Program prog = minimuli::parse(src);
    minimuli::ClassTable table = minimuli::ClassTable::build(prog);
    minimuli::typecheck(prog, table);
    return {std::move(prog), std::move(table)};
}

minimuli::EngineOptions baseOptions() {
    minimuli::EngineOptions opt;
    opt.domainLo = 1;
    opt.domainHi = 16;
    return opt;
}

void BM_Parse(benchmark::State& state) {
    std::string src = kShapes;
    for (auto _ : state) benchmark::DoNotOptimize(minimuli::parse(src));
}
BENCHMARK(BM_Parse);

void BM_RunShapes(benchmark::State& state) {
    Compiled c = compile(kShapes);
    minimuli::EngineOptions opt = baseOptions();
    opt.label = minimuli::EngineOptions::LabelMode::Off;
    for (auto _ : state)
        benchmark::DoNotOptimize(minimuli::runProgram(c.prog, c.table, "main", opt));
}
BENCHMARK(BM_RunShapes);

void BM_LabelShapes(benchmark::State& state) {
    Compiled c = compile(kShapes);
    minimuli::EngineOptions opt = baseOptions();
    for (auto _ : state)
        benchmark::DoNotOptimize(minimuli::runProgram(c.prog, c.table, "main", opt));
}
BENCHMARK(BM_LabelShapes);

void BM_Dispatch(benchmark::State& state) {
    Compiled c = compile(kDispatch);
    minimuli::EngineOptions opt = baseOptions();
    for (auto _ : state)
        benchmark::DoNotOptimize(minimuli::runProgram(c.prog, c.table, "main", opt));
}
BENCHMARK(BM_Dispatch);

void BM_StructEq(benchmark::State& state) {
    Compiled c = compile(kStructEq);
    minimuli::EngineOptions opt = baseOptions();
    for (auto _ : state)
        benchmark::DoNotOptimize(minimuli::runProgram(c.prog, c.table, "main", opt));
}
BENCHMARK(BM_StructEq);

void BM_Consistency(benchmark::State& state) {
    using minimuli::Constraint;
    using minimuli::Rel;
    using minimuli::SymInt;
    minimuli::ConstraintStore store;
    SymInt x = SymInt::variable(1, "x");
    SymInt y = SymInt::variable(2, "y");
    SymInt z = SymInt::variable(3, "z");
    store.impose(Constraint::arith(SymInt::add(x, y), Rel::Eq, SymInt::mul(z, z)));
    store.impose(Constraint::arith(x, Rel::Lt, y));
    store.impose(Constraint::arith(z, Rel::Gt, SymInt::constant(2)));
    for (auto _ : state) {
        long long budget = 100000000;
        benchmark::DoNotOptimize(store.checkConsistency(1, 16, budget, {}));
    }
}
BENCHMARK(BM_Consistency);

}  // namespace

BENCHMARK_MAIN();
