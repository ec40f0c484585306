#pragma once

#include <stdexcept>
#include <string>

namespace ddisac {

/// Raised when an argument violates a documented precondition
/// (dimension mismatch, out-of-range index, negative variance, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A precoder block must be scaled to nonzero power but carries none.
class DegeneratePrecoder : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed campaign configuration. `line()` is 0 for problems that are
/// not tied to a specific line (missing file, bad override).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace ddisac
