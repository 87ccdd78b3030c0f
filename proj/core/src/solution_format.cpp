#include "minimuli/solution_format.hpp"

#include <json.hpp>

namespace minimuli {

namespace {

std::string headline(const Solution& s, size_t idx) {
    std::string line = "solution " + std::to_string(idx) + ": ";
    if (s.kind == Solution::Kind::Return)
        line += "RETURN " + s.valueText;
    else
        line += "EXCEPTION " + s.exceptionName;
    return line;
}

}  // namespace

std::string labelingLine(const Labeling& lab) {
    std::string line;
    for (const LabelEntry& e : lab) {
        if (!line.empty()) line += " ";
        line += e.display + "=";
        line += e.isType ? e.typeName : std::to_string(e.intValue);
    }
    return line;
}

std::string formatText(const RunResult& rr) {
    std::string out;
    for (size_t i = 0; i < rr.solutions.size(); ++i) {
        const Solution& s = rr.solutions[i];
        out += headline(s, i + 1) + "\n";
        if (!s.output.empty()) {
            out += "  output:\n";
            for (const auto& line : s.output) out += "    " + line + "\n";
        }
        if (!s.constraintDump.empty()) {
            out += "  constraints:\n";
            for (const auto& line : s.constraintDump) out += "    " + line + "\n";
        }
        if (!s.labelings.empty()) {
            out += "  labelings:\n";
            for (const auto& lab : s.labelings) out += "    " + labelingLine(lab) + "\n";
        }
    }
    out += rr.solutions.size() == 1 ? "1 solution\n"
                                    : std::to_string(rr.solutions.size()) + " solutions\n";
    if (rr.incomplete) out += "search incomplete: " + rr.limitReason + "\n";
    return out;
}

std::string formatJsonl(const RunResult& rr) {
    using nlohmann::json;
    std::string out;
    for (size_t i = 0; i < rr.solutions.size(); ++i) {
        const Solution& s = rr.solutions[i];
        json j;
        j["solution"] = i + 1;
        j["kind"] = s.kind == Solution::Kind::Return ? "RETURN" : "EXCEPTION";
        if (s.kind == Solution::Kind::Return)
            j["value"] = s.valueText;
        else
            j["exception"] = s.exceptionName;
        j["output"] = s.output;
        j["constraints"] = s.constraintDump;
        json labs = json::array();
        for (const auto& lab : s.labelings) {
            json entries = json::array();
            for (const LabelEntry& e : lab) {
                json entry;
                entry["name"] = e.display;
                entry["path"] = e.stablePath;
                if (e.isType)
                    entry["type"] = e.typeName;
                else
                    entry["int"] = e.intValue;
                entries.push_back(std::move(entry));
            }
            labs.push_back(std::move(entries));
        }
        j["labelings"] = std::move(labs);
        out += j.dump() + "\n";
    }
    json summary;
    summary["summary"] = true;
    summary["solutions"] = rr.solutions.size();
    summary["incomplete"] = rr.incomplete;
    if (rr.incomplete) summary["limitReason"] = rr.limitReason;
    summary["stats"] = {
        {"steps", rr.stats.steps},
        {"condChoicePoints", rr.stats.condChoicePoints},
        {"dispatchChoicePoints", rr.stats.dispatchChoicePoints},
        {"typeopChoicePoints", rr.stats.typeopChoicePoints},
        {"structeqChoicePoints", rr.stats.structeqChoicePoints},
        {"structeqPairs", rr.stats.structeqPairs},
        {"structeqDepthFailures", rr.stats.structeqDepthFailures},
        {"refEqEvals", rr.stats.refEqEvals},
        {"fingerprintMismatches", rr.stats.fingerprintMismatches},
    };
    out += summary.dump() + "\n";
    return out;
}

namespace {

std::string dotEscape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

void writeDotNode(const TreeNode& n, std::ostream& os, int& counter, int self) {
    os << "  n" << self << " [label=\"" << dotEscape(n.label) << "\"];\n";
    for (const auto& child : n.children) {
        int id = ++counter;
        os << "  n" << self << " -> n" << id;
        if (!child->edge.empty()) os << " [label=\"" << dotEscape(child->edge) << "\"]";
        os << ";\n";
        writeDotNode(*child, os, counter, id);
    }
}

}  // namespace

void writeDot(const TreeNode& root, std::ostream& os) {
    os << "digraph search {\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    int counter = 0;
    writeDotNode(root, os, counter, 0);
    os << "}\n";
}

}  // namespace minimuli
