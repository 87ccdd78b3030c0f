#pragma once

#include <string>

#include "minimuli/ast.hpp"

namespace minimuli {

// Parses guest source into a raw (unchecked) program. Throws CompileError
// with source position and the expected-token set on syntax errors.
Program parse(const std::string& source);

}  // namespace minimuli
