#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "blockgrader/model.hpp"

namespace blockgrader {

/// Canonical JSON form of a problem:
///
///     {"blocks": [{"depends": [["A"], ...], "distractor": false, "final": false,
///                  "indent": 0, "tag": "B", "text": "..."}, ...],
///      "version": "1"}
///
/// Keys are sorted and blocks keep authored order, so output is byte-stable.
std::string to_canonical(const ProblemMultigraph& m);

/// Throws Error(Schema) naming the offending field path (e.g.
/// "blocks[2].indent"), or ValidationError for multigraph violations.
ProblemMultigraph from_canonical(std::string_view text);

/// Accepts either the element format or canonical JSON (first non-blank
/// character '{').
ProblemMultigraph load_problem_text(std::string_view text);

struct SubmissionDocument {
    std::optional<std::string> problem_id;
    Submission submission;
};

/// {"problem_id": "...", "placed": [{"tag": "A", "indent": 0}, ...]};
/// problem_id is optional and indent defaults to 0.
SubmissionDocument parse_submission(std::string_view text);
SubmissionDocument submission_from_json(const nlohmann::json& j);
nlohmann::json submission_to_json(const SubmissionDocument& doc);

nlohmann::json report_to_json(const GradeReport& report);
nlohmann::json stats_to_json(const StatsReport& stats);
nlohmann::json dag_to_json(const CollapsedDag& dag, std::size_t id);

}  // namespace blockgrader
