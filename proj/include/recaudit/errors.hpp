/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace recaudit {

/// Error categories map 1:1 onto CLI exit codes so callers can partition
/// failures without parsing messages. 0 is reserved for success, 1 for
/// unclassified failures.
enum class ErrorCategory : int {
    Parse = 2,            // malformed input text / unknown label strings
    Parameter = 3,        // argument outside its documented domain
    Integrity = 4,        // data violates a structural invariant
    IncompleteLabels = 5, // selected videos lack annotations
    NonConvergence = 6,   // iterative solver flagged, strict mode on
    Io = 7,               // missing/unreadable/unwritable files
};

inline const char* to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Parse: return "parse";
        case ErrorCategory::Parameter: return "parameter";
        case ErrorCategory::Integrity: return "integrity";
        case ErrorCategory::IncompleteLabels: return "incomplete-labels";
        case ErrorCategory::NonConvergence: return "non-convergence";
        case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

  private:
    ErrorCategory category_;
};

class ParseError : public Error {
  public:
    explicit ParseError(const std::string& what, std::int64_t line = -1)
        : Error(ErrorCategory::Parse,
                line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    /// 1-based input line, -1 when not applicable.
    std::int64_t line() const noexcept { return line_; }

  private:
    std::int64_t line_;
};

class ParameterError : public Error {
  public:
    explicit ParameterError(const std::string& what) : Error(ErrorCategory::Parameter, what) {}
};

class IntegrityError : public Error {
  public:
    explicit IntegrityError(const std::string& what) : Error(ErrorCategory::Integrity, what) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::Io, what) {}
};

class NonConvergenceError : public Error {
  public:
    explicit NonConvergenceError(const std::string& what)
        : Error(ErrorCategory::NonConvergence, what) {}
};

/// Annotation holes block the audit; the offending ids travel with the error
/// so the CLI can emit a gap list for the annotators.
class IncompleteLabelsError : public Error {
  public:
    IncompleteLabelsError(const std::string& what, std::vector<std::string> missing)
        : Error(ErrorCategory::IncompleteLabels, what), missing_(std::move(missing)) {}

    const std::vector<std::string>& missing_ids() const noexcept { return missing_; }

  private:
    std::vector<std::string> missing_;
};

} // namespace recaudit
