// Symbolic integer expressions: immutable trees over constants, logic
// variables, and +, -, *. Construction folds constant operands, so a tree
// without variables is always a single constant node.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>

namespace minimuli {

using VarId = std::uint32_t;

class SymInt {
public:
    enum class Op { Add, Sub, Mul };

    SymInt() : SymInt(constant(0)) {}

    static SymInt constant(long long value);
    // `hint` seeds the display name: variable 3 hinted "width" renders "_w3".
    static SymInt variable(VarId id, const std::string& hint);
    static SymInt binary(Op op, const SymInt& lhs, const SymInt& rhs);
    static SymInt add(const SymInt& a, const SymInt& b) { return binary(Op::Add, a, b); }
    static SymInt sub(const SymInt& a, const SymInt& b) { return binary(Op::Sub, a, b); }
    static SymInt mul(const SymInt& a, const SymInt& b) { return binary(Op::Mul, a, b); }

    bool isConst() const;
    long long constValue() const;  // requires isConst()

    void collectVars(std::set<VarId>& out) const;
    bool hasVars() const;

    // Evaluates under a total assignment of the variables that occur.
    long long eval(const std::map<VarId, long long>& assignment) const;

    std::string render() const;

private:
    struct Node;
    explicit SymInt(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

}  // namespace minimuli
