#pragma once

#include <string>

#include "minimuli/ast.hpp"
#include "minimuli/class_table.hpp"

namespace minimuli {

// Annotates the program in place: expression types, field/method resolution,
// implicit receivers, static cast feasibility. Bare identifiers that name a
// field of the enclosing class are rewritten into explicit field accesses on
// `this`. Throws CompileError on any violation.
void typecheck(Program& program, const ClassTable& table);

struct EntryPoint {
    TypeId cls = kNoType;
    const MethodInfo* method = nullptr;
};

// The run entry point: the unique zero-parameter method with a body named
// `name`, searched across all classes. Throws CompileError when the name is
// missing or matches more than one declaration.
EntryPoint findEntry(const ClassTable& table, const std::string& name);

}  // namespace minimuli
