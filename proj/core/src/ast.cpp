// Canonical pretty-printer. Binary expressions print fully parenthesized so
// the output reparses to a structurally identical tree.

#include "minimuli/ast.hpp"

namespace minimuli {

bool isComparison(BinOp op) {
    switch (op) {
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge:
        case BinOp::Eq:
        case BinOp::Ne:
            return true;
        default:
            return false;
    }
}

const char* binOpToken(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::StructEq: return "#=";
    }
    return "?";
}

namespace {

std::string escapeString(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

void printExprInto(const Expr& e, std::string& out) {
    switch (e.kind) {
        case ExprKind::IntLit:
            out += std::to_string(e.intValue);
            break;
        case ExprKind::BoolLit:
            out += e.boolValue ? "true" : "false";
            break;
        case ExprKind::StrLit:
            out += '"';
            out += escapeString(e.strValue);
            out += '"';
            break;
        case ExprKind::LocalRef:
            out += e.name;
            break;
        case ExprKind::ThisRef:
            out += "this";
            break;
        case ExprKind::FieldGet:
            if (e.lhs) {
                printExprInto(*e.lhs, out);
                out += '.';
            }
            out += e.name;
            break;
        case ExprKind::Call:
            if (e.lhs) {
                printExprInto(*e.lhs, out);
                out += '.';
            }
            out += e.name;
            out += '(';
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                printExprInto(*e.args[i], out);
            }
            out += ')';
            break;
        case ExprKind::New:
            out += "new ";
            out += e.name;
            out += '(';
            for (size_t i = 0; i < e.args.size(); ++i) {
                if (i) out += ", ";
                printExprInto(*e.args[i], out);
            }
            out += ')';
            break;
        case ExprKind::Binary:
            out += '(';
            printExprInto(*e.lhs, out);
            out += ' ';
            out += binOpToken(e.op);
            out += ' ';
            printExprInto(*e.rhs, out);
            out += ')';
            break;
        case ExprKind::Cast:
            out += "((";
            out += e.name;
            out += ')';
            printExprInto(*e.lhs, out);
            out += ')';
            break;
        case ExprKind::InstanceOf:
            out += '(';
            printExprInto(*e.lhs, out);
            out += " instanceof ";
            out += e.name;
            out += ')';
            break;
    }
}

void printStmtInto(const Stmt& s, std::string& out, int depth);

void printBlockInto(const std::vector<StmtPtr>& b, std::string& out, int depth) {
    out += "{\n";
    for (const auto& s : b) printStmtInto(*s, out, depth + 1);
    out.append(static_cast<size_t>(depth) * 4, ' ');
    out += "}";
}

void printStmtInto(const Stmt& s, std::string& out, int depth) {
    out.append(static_cast<size_t>(depth) * 4, ' ');
    switch (s.kind) {
        case StmtKind::LocalDecl:
            out += s.typeName;
            out += ' ';
            out += s.name;
            if (s.isFree) {
                out += " free";
            } else if (s.value) {
                out += " = ";
                printExprInto(*s.value, out);
            }
            out += ";\n";
            break;
        case StmtKind::Assign:
            printExprInto(*s.target, out);
            out += " = ";
            printExprInto(*s.value, out);
            out += ";\n";
            break;
        case StmtKind::If:
            out += "if (";
            printExprInto(*s.value, out);
            out += ") ";
            printBlockInto(s.thenBlock, out, depth);
            if (!s.elseBlock.empty()) {
                out += " else ";
                printBlockInto(s.elseBlock, out, depth);
            }
            out += "\n";
            break;
        case StmtKind::Return:
            out += "return";
            if (s.value) {
                out += ' ';
                printExprInto(*s.value, out);
            }
            out += ";\n";
            break;
        case StmtKind::Fail:
            out += "fail();\n";
            break;
        case StmtKind::Println:
            out += "println(";
            printExprInto(*s.value, out);
            out += ");\n";
            break;
        case StmtKind::ExprStmt:
            printExprInto(*s.value, out);
            out += ";\n";
            break;
    }
}

}  // namespace

std::string printExpr(const Expr& e) {
    std::string out;
    printExprInto(e, out);
    return out;
}

std::string printProgram(const Program& p) {
    std::string out;
    for (const auto& c : p.classes) {
        out += c.isInterface ? "interface " : "class ";
        out += c.name;
        if (c.extendsName) {
            out += " extends ";
            out += *c.extendsName;
        }
        if (!c.implementsNames.empty()) {
            out += " implements ";
            for (size_t i = 0; i < c.implementsNames.size(); ++i) {
                if (i) out += ", ";
                out += c.implementsNames[i];
            }
        }
        out += " {\n";
        for (const auto& f : c.fields) {
            out += "    ";
            out += f.typeName;
            out += ' ';
            out += f.name;
            out += ";\n";
        }
        for (const auto& m : c.methods) {
            out += "    ";
            if (m.isAbstract) out += "abstract ";
            out += m.retTypeName;
            out += ' ';
            out += m.name;
            out += '(';
            for (size_t i = 0; i < m.params.size(); ++i) {
                if (i) out += ", ";
                out += m.params[i].typeName;
                out += ' ';
                out += m.params[i].name;
            }
            out += ')';
            if (!m.hasBody) {
                out += ";\n";
            } else {
                out += ' ';
                printBlockInto(m.body, out, 1);
                out += "\n";
            }
        }
        out += "}\n";
    }
    return out;
}

}  // namespace minimuli
