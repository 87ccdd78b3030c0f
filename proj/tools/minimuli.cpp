// Command-line front end.
//
// Exit codes: 0 at least one solution, 1 no solutions, 2 compile error,
// 3 a resource limit cut the search short (even if solutions were found).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "minimuli/class_table.hpp"
#include "minimuli/diagnostics.hpp"
#include "minimuli/engine.hpp"
#include "minimuli/parser.hpp"
#include "minimuli/solution_format.hpp"
#include "minimuli/typecheck.hpp"

namespace {

bool parseDomain(const std::string& s, long long& lo, long long& hi) {
    auto pos = s.find("..");
    if (pos == std::string::npos || pos == 0 || pos + 2 >= s.size()) return false;
    try {
        size_t used = 0;
        lo = std::stoll(s.substr(0, pos), &used);
        if (used != pos) return false;
        std::string rest = s.substr(pos + 2);
        hi = std::stoll(rest, &used);
        if (used != rest.size()) return false;
    } catch (const std::exception&) {
        return false;
    }
    return lo <= hi;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimuli: explores every execution of a program with free variables"};
    app.set_version_flag("--version", "minimuli 0.1.0");
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "search a source file for solutions");
    std::string file;
    std::string entry = "main";
    std::string mode = "all";
    std::string domain = "1..16";
    std::string label = "all";
    std::string treePath;
    std::string format = "text";
    long long maxSteps = 10000;
    int maxDepth = 64;
    run->add_option("file", file, "source file")->required()->check(CLI::ExistingFile);
    run->add_option("--entry", entry, "entry method name (default: main)");
    run->add_option("--mode", mode, "'all' solutions or stop after 'one'")
        ->check(CLI::IsMember({"all", "one"}));
    run->add_option("--domain", domain,
                    "integer domain LO..HI for consistency checks and labeling "
                    "(default: 1..16)");
    run->add_option("--max-steps", maxSteps, "evaluation step budget");
    run->add_option("--max-structeq-depth", maxDepth, "object nesting bound for '#='");
    run->add_option("--label", label, "assignment enumeration per solution")
        ->check(CLI::IsMember({"off", "first", "all"}));
    run->add_option("--tree", treePath, "write the search tree as DOT to this file");
    run->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "jsonl"}));

    CLI11_PARSE(app, argc, argv);

    long long lo = 1, hi = 16;
    if (!parseDomain(domain, lo, hi)) {
        std::cerr << "invalid --domain '" << domain << "': expected LO..HI with LO <= HI\n";
        return 64;
    }

    std::ifstream in(file);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string source = buf.str();

    try {
        minimuli::Program prog = minimuli::parse(source);
        minimuli::ClassTable table = minimuli::ClassTable::build(prog);
        minimuli::typecheck(prog, table);

        minimuli::EngineOptions opt;
        opt.domainLo = lo;
        opt.domainHi = hi;
        opt.maxSteps = maxSteps;
        opt.maxStructEqDepth = maxDepth;
        opt.stopAfterFirst = mode == "one";
        opt.label = label == "off"     ? minimuli::EngineOptions::LabelMode::Off
                    : label == "first" ? minimuli::EngineOptions::LabelMode::First
                                       : minimuli::EngineOptions::LabelMode::All;
        opt.recordTree = !treePath.empty();

        minimuli::RunResult rr = minimuli::runProgram(prog, table, entry, opt);

        std::cout << (format == "jsonl" ? minimuli::formatJsonl(rr)
                                        : minimuli::formatText(rr));
        if (!treePath.empty() && rr.tree) {
            std::ofstream os(treePath);
            minimuli::writeDot(*rr.tree, os);
            if (!os) {
                std::cerr << "cannot write tree file '" << treePath << "'\n";
                return 74;
            }
        }
        if (rr.incomplete) return 3;
        return rr.solutions.empty() ? 1 : 0;
    } catch (const minimuli::CompileError& e) {
        std::cerr << file << ":" << e.what() << "\n";
        return 2;
    } catch (const minimuli::EngineLimitError& e) {
        std::cerr << "limit: " << e.what() << "\n";
        return 3;
    }
}
