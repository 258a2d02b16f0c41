#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace openbook {

// Thrown by every file/text reader. `line` is 1-based; 0 means "not tied to
// a specific line".
class ParseError : public std::runtime_error {
public:
    explicit ParseError(std::string msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg
                                  : std::move(msg)),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Thrown when an operation's precondition fails (as opposed to an input that
// parses and merely violates axioms, which is a ValidationReport matter).
// `code` is a stable machine-readable tag, e.g. "NonGenericSlice".
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(std::string code, std::string msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct ValidationIssue {
    std::string code;    // "MalformedGeometry", "axiom(ii)", "SlopeViolation", ...
    std::string where;   // offending edge/slice/vertex, human readable
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }

    void add(std::string code, std::string where, std::string detail) {
        issues.push_back({std::move(code), std::move(where), std::move(detail)});
    }

    // True when some issue carries the given code.
    bool has(const std::string& code) const {
        for (const auto& i : issues)
            if (i.code == code) return true;
        return false;
    }

    // Distinct codes, in first-appearance order.
    std::vector<std::string> codes() const {
        std::vector<std::string> out;
        for (const auto& i : issues) {
            bool seen = false;
            for (const auto& c : out) seen = seen || c == i.code;
            if (!seen) out.push_back(i.code);
        }
        return out;
    }
};

} // namespace openbook
