#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace minimuli {

// Error in guest source: syntax, class-table construction, or type checking.
// `expected` carries the token alternatives for syntax errors.
class CompileError : public std::runtime_error {
public:
    CompileError(std::string message, int line, int col,
                 std::vector<std::string> expected = {})
        : std::runtime_error(format(message, line, col, expected)),
          message_(std::move(message)),
          line_(line),
          col_(col),
          expected_(std::move(expected)) {}

    const std::string& message() const { return message_; }
    int line() const { return line_; }
    int col() const { return col_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    static std::string format(const std::string& message, int line, int col,
                              const std::vector<std::string>& expected) {
        std::string s = std::to_string(line) + ":" + std::to_string(col) + ": " + message;
        if (!expected.empty()) {
            s += " (expected ";
            for (size_t i = 0; i < expected.size(); ++i) {
                if (i) s += ", ";
                s += expected[i];
            }
            s += ")";
        }
        return s;
    }

    std::string message_;
    int line_;
    int col_;
    std::vector<std::string> expected_;
};

// Search exceeded a configured resource bound (enumeration guard).
class EngineLimitError : public std::runtime_error {
public:
    explicit EngineLimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace minimuli
