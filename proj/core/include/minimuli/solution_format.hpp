// Renderers for run results: a human-readable text report, a line-delimited
// JSON stream, and a DOT export of the recorded search tree.

#pragma once

#include <ostream>
#include <string>

#include "minimuli/engine.hpp"

namespace minimuli {

// "@1=Rectangle _w2=2 _h3=8": one labeling as a single space-joined line.
std::string labelingLine(const Labeling& lab);

// One block per solution (headline, then indented output / constraints /
// labelings sections, each omitted when empty), then a summary line and, for
// a cut-short search, the reason.
std::string formatText(const RunResult& rr);

// One JSON object per solution plus a trailing summary object with the
// search statistics.
std::string formatJsonl(const RunResult& rr);

void writeDot(const TreeNode& root, std::ostream& os);

}  // namespace minimuli
