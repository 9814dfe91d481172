#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockgrader/model.hpp"

namespace blockgrader {

struct ProblemFile {
    std::string id;  // file name without extension
    std::filesystem::path path;
};

/// Regular, non-hidden files of a flat problems directory, sorted by file
/// name.
std::vector<ProblemFile> list_problem_files(const std::filesystem::path& dir);

/// Throws Error(Io).
std::string read_text_file(const std::filesystem::path& path);

/// Title from a `<!-- title: ... -->` comment, otherwise `fallback`.
std::string extract_title(std::string_view text, const std::string& fallback);

struct ProblemCheck {
    std::optional<ProblemMultigraph> graph;  // set iff ok()
    std::vector<Diagnostic> diagnostics;     // warnings and every error found

    bool ok() const;
};

/// Like load_problem_text, but collects diagnostics instead of throwing.
ProblemCheck check_problem_text(std::string_view text);

struct LoadedProblem {
    std::string id;
    std::string title;
    ProblemMultigraph graph;
};

LoadedProblem load_problem_file(const ProblemFile& file);

}  // namespace blockgrader
