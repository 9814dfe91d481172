#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blockgrader {

enum class ErrorCode {
    // document / DSL parsing
    MalformedElement,
    NoBlocks,
    DuplicateTag,
    EmptyTag,
    DuplicateTagInGroup,
    Schema,
    // multigraph validation
    UnknownTag,
    Cycle,
    NoFinal,
    MultipleFinal,
    SelfDependency,
    FinalDistractor,
    DistractorDependency,
    // engine
    UnknownStart,
    InvalidMultigraph,
    OracleCapExceeded,
    SolutionCapExceeded,
    // grading
    InvalidSubmission,
    InvalidPolicy,
    // files
    Io,
};

/// Stable identifier used in diagnostics and JSON output, e.g. "CycleError".
std::string_view error_name(ErrorCode code);

/// 1-based line/column; line 0 means "no source position".
struct SourcePos {
    std::size_t line = 0;
    std::size_t column = 0;

    bool known() const { return line != 0; }
    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    ErrorCode code = ErrorCode::InvalidMultigraph;
    std::string message;
    SourcePos pos;
};

/// "3:14: error: CycleError: ..." (position omitted when unknown).
std::string format_diagnostic(const Diagnostic& d);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, SourcePos pos = {});

    ErrorCode code() const noexcept { return code_; }
    const SourcePos& pos() const noexcept { return pos_; }
    /// Message without the error-name prefix that what() carries.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    SourcePos pos_;
    std::string detail_;
};

/// Raised by build_multigraph; carries every error found, not just the first.
/// code() is the code of the first error.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

class CapExceededError : public Error {
public:
    CapExceededError(ErrorCode code, std::size_t limit, const std::string& message);

    std::size_t limit() const noexcept { return limit_; }

private:
    std::size_t limit_;
};

}  // namespace blockgrader
