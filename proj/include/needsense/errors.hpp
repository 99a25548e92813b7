#pragma once

#include <stdexcept>
#include <string>

namespace needsense {

// Input-document error carrying a 1-based source position.
// column == 0 means the format is line-oriented and tracks no column.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& message, int line = 0, int column = 0)
        : std::runtime_error(format(message, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, int line, int column) {
        if (line <= 0) return message;
        if (column <= 0) return "line " + std::to_string(line) + ": " + message;
        return "line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + message;
    }

    int line_;
    int column_;
};

// A structurally valid rule set that cannot run against the given catalog or
// baselines: unknown target feature, required-only target, missing baseline.
class RuleSemanticsError : public std::runtime_error {
public:
    explicit RuleSemanticsError(const std::string& message) : std::runtime_error(message) {}
};

// Calibration input contained no usable samples.
class CalibrationError : public std::runtime_error {
public:
    explicit CalibrationError(const std::string& message) : std::runtime_error(message) {}
};

} // namespace needsense
