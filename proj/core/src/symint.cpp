#include "minimuli/symint.hpp"

#include <stdexcept>

namespace minimuli {

struct SymInt::Node {
    enum class Kind { Const, Var, Bin } kind;
    long long value = 0;   // Const
    VarId var = 0;         // Var
    std::string name;      // Var display name
    Op op = Op::Add;       // Bin
    std::shared_ptr<const Node> lhs, rhs;
};

SymInt SymInt::constant(long long value) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Const;
    n->value = value;
    return SymInt(std::move(n));
}

SymInt SymInt::variable(VarId id, const std::string& hint) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Var;
    n->var = id;
    n->name = "_";
    n->name += hint.empty() ? 'v' : hint[0];
    n->name += std::to_string(id);
    return SymInt(std::move(n));
}

static long long applyOp(SymInt::Op op, long long a, long long b) {
    switch (op) {
        case SymInt::Op::Add: return a + b;
        case SymInt::Op::Sub: return a - b;
        case SymInt::Op::Mul: return a * b;
    }
    return 0;
}

SymInt SymInt::binary(Op op, const SymInt& lhs, const SymInt& rhs) {
    // Folds only fully constant operands; 0 * x stays symbolic on purpose.
    if (lhs.isConst() && rhs.isConst())
        return constant(applyOp(op, lhs.constValue(), rhs.constValue()));
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Bin;
    n->op = op;
    n->lhs = lhs.node_;
    n->rhs = rhs.node_;
    return SymInt(std::move(n));
}

bool SymInt::isConst() const { return node_->kind == Node::Kind::Const; }

long long SymInt::constValue() const {
    if (!isConst()) throw std::logic_error("constValue on a symbolic expression");
    return node_->value;
}

void SymInt::collectVars(std::set<VarId>& out) const {
    auto walk = [&out](auto&& self, const Node* n) -> void {
        switch (n->kind) {
            case Node::Kind::Const:
                return;
            case Node::Kind::Var:
                out.insert(n->var);
                return;
            case Node::Kind::Bin:
                self(self, n->lhs.get());
                self(self, n->rhs.get());
                return;
        }
    };
    walk(walk, node_.get());
}

bool SymInt::hasVars() const {
    // Constant folding keeps any variable-free tree a single constant node.
    return !isConst();
}

long long SymInt::eval(const std::map<VarId, long long>& assignment) const {
    auto walk = [&assignment](auto&& self, const Node* n) -> long long {
        switch (n->kind) {
            case Node::Kind::Const:
                return n->value;
            case Node::Kind::Var: {
                auto it = assignment.find(n->var);
                if (it == assignment.end())
                    throw std::logic_error("eval: unassigned variable " + n->name);
                return it->second;
            }
            case Node::Kind::Bin:
                return applyOp(n->op, self(self, n->lhs.get()), self(self, n->rhs.get()));
        }
        return 0;
    };
    return walk(walk, node_.get());
}

std::string SymInt::render() const {
    std::string out;
    auto walk = [&out](auto&& self, const Node* n) -> void {
        switch (n->kind) {
            case Node::Kind::Const:
                out += std::to_string(n->value);
                return;
            case Node::Kind::Var:
                out += n->name;
                return;
            case Node::Kind::Bin:
                out += '(';
                self(self, n->lhs.get());
                out += n->op == Op::Add ? " + " : n->op == Op::Sub ? " - " : " * ";
                self(self, n->rhs.get());
                out += ')';
                return;
        }
    };
    walk(walk, node_.get());
    return out;
}

}  // namespace minimuli
