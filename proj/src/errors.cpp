#include "blockgrader/errors.hpp"

namespace blockgrader {

std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedElement: return "MalformedElementError";
        case ErrorCode::NoBlocks: return "NoBlocksError";
        case ErrorCode::DuplicateTag: return "DuplicateTagError";
        case ErrorCode::EmptyTag: return "EmptyTagError";
        case ErrorCode::DuplicateTagInGroup: return "DuplicateTagInGroupError";
        case ErrorCode::Schema: return "SchemaError";
        case ErrorCode::UnknownTag: return "UnknownTagError";
        case ErrorCode::Cycle: return "CycleError";
        case ErrorCode::NoFinal: return "NoFinalError";
        case ErrorCode::MultipleFinal: return "MultipleFinalError";
        case ErrorCode::SelfDependency: return "SelfDependencyError";
        case ErrorCode::FinalDistractor: return "FinalDistractorError";
        case ErrorCode::DistractorDependency: return "DistractorDependencyError";
        case ErrorCode::UnknownStart: return "UnknownStartError";
        case ErrorCode::InvalidMultigraph: return "InvalidMultigraphError";
        case ErrorCode::OracleCapExceeded: return "OracleCapExceeded";
        case ErrorCode::SolutionCapExceeded: return "SolutionCapExceeded";
        case ErrorCode::InvalidSubmission: return "InvalidSubmissionError";
        case ErrorCode::InvalidPolicy: return "InvalidPolicyError";
        case ErrorCode::Io: return "IoError";
    }
    return "Error";
}

std::string format_diagnostic(const Diagnostic& d) {
    std::string out;
    if (d.pos.known()) {
        out += std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) + ": ";
    }
    out += d.severity == Severity::Error ? "error: " : "warning: ";
    out += error_name(d.code);
    out += ": ";
    out += d.message;
    return out;
}

Error::Error(ErrorCode code, const std::string& message, SourcePos pos)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code), pos_(pos), detail_(message) {}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error) return d.message;
    }
    return "invalid problem";
}

ErrorCode first_code(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error) return d.code;
    }
    return ErrorCode::InvalidMultigraph;
}

SourcePos first_pos(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error) return d.pos;
    }
    return {};
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(first_code(diagnostics), summarize(diagnostics), first_pos(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

CapExceededError::CapExceededError(ErrorCode code, std::size_t limit, const std::string& message)
    : Error(code, message), limit_(limit) {}

}  // namespace blockgrader
