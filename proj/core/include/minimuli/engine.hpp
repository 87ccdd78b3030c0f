// Search engine: a continuation-passing interpreter whose non-deterministic
// points (symbolic conditions, virtual calls on unresolved receivers, type
// tests, structural equality) become depth-first explored choice points over
// a backtrackable heap + constraint store.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minimuli/ast.hpp"
#include "minimuli/class_table.hpp"
#include "minimuli/constraints.hpp"
#include "minimuli/heap.hpp"
#include "minimuli/value.hpp"

namespace minimuli {

struct EngineOptions {
    long long domainLo = -128;  // integer labeling/consistency domain
    long long domainHi = 127;
    long long maxSteps = 10000;         // evaluation steps before giving up
    int maxStructEqDepth = 64;          // nested object pairs in one '#='
    long long consistencyGuard = 4000000;  // search nodes per store check
    bool stopAfterFirst = false;

    enum class LabelMode { Off, First, All };
    LabelMode label = LabelMode::All;

    bool recordTree = false;  // build the search-tree structure for export
};

struct LabelEntry {
    std::string display;     // "_w2" or "@1"
    std::string stablePath;  // "@1.Rectangle.width" for fields, name for locals
    bool isType = false;
    long long intValue = 0;   // when !isType
    std::string typeName;     // when isType
    VarId var = 0;
    HeapAddr addr = 0;
};
using Labeling = std::vector<LabelEntry>;

struct ObjectSnapshot {
    TypeId concreteType = kNoType;
    TypeId declaredType = kNoType;
    bool createdFree = false;
    std::map<FieldRef, Value> fields;
    TypeSet applicable;  // effective type set at the leaf (unresolved objects)
};

// One search-tree leaf: a completed run of the entry method.
struct Solution {
    enum class Kind { Return, Exception };
    Kind kind = Kind::Return;
    std::optional<Value> value;  // empty: the method completed without a value
    std::string exceptionName;
    std::string valueText;
    std::vector<std::string> constraintDump;
    std::vector<std::string> output;
    std::vector<Labeling> labelings;
    std::map<HeapAddr, ObjectSnapshot> heap;
};

struct DispatchEvent {
    std::string site;
    TypeSet preSet;                 // receiver's applicable set at the call
    TypeSet owners;                 // classes whose bodies survive
    std::vector<TypeSet> sets;      // instance types funneled to each owner
};

// A cast or instanceof on an unresolved receiver: pre ∩ cone(target) passes,
// pre ∖ cone(target) fails.
struct TypeOpEvent {
    bool isCast = false;
    TypeSet pre;
    TypeSet targetCone;
    TypeSet pass;
    TypeSet fail;
};

struct EngineStats {
    long long steps = 0;
    long long condChoicePoints = 0;
    long long dispatchChoicePoints = 0;
    long long typeopChoicePoints = 0;
    long long structeqChoicePoints = 0;
    long long structeqPairs = 0;          // object pairs visited by '#='
    long long structeqDepthFailures = 0;  // '#=' branches abandoned at the depth cap
    long long refEqEvals = 0;             // '=='/'!=' on references
    long long refEqStoreDelta = 0;        // store growth across those (invariantly 0)
    long long fingerprintMismatches = 0;  // state not restored exactly after an undo
    std::vector<DispatchEvent> dispatchEvents;
    std::vector<TypeOpEvent> typeopEvents;
};

struct TreeNode {
    std::string label;
    std::string edge;  // label on the edge from the parent
    std::vector<std::unique_ptr<TreeNode>> children;
};

struct RunResult {
    std::vector<Solution> solutions;
    bool incomplete = false;  // a resource limit cut the search short
    std::string limitReason;
    EngineStats stats;
    std::unique_ptr<TreeNode> tree;  // present when EngineOptions::recordTree
};

// Runs the entry method of a type-checked program. The program must have been
// checked against exactly this table.
RunResult runProgram(const Program& program, const ClassTable& table,
                     const std::string& entryName, const EngineOptions& options);

}  // namespace minimuli
