#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blockgrader/errors.hpp"
#include "blockgrader/model.hpp"

namespace blockgrader {

/// One `<pl-answer ...>text</pl-answer>` element as written.
struct ParsedAnswerElement {
    std::string tag;
    std::string depends_expr;
    int indent = 0;
    bool is_final = false;
    bool is_distractor = false;
    std::string text;
    SourcePos pos;

    friend bool operator==(const ParsedAnswerElement&, const ParsedAnswerElement&) = default;
};

struct ParsedDocument {
    std::vector<ParsedAnswerElement> elements;  // document order
    std::vector<Diagnostic> warnings;
};

/// Parses the `depends` mini-language:
///
///     depends ::= group ('|' group)*
///     group   ::= <empty> | tag (',' tag)*
///
/// Whitespace around tags and separators is ignored. A blank expression means
/// "no dependencies" and yields no groups; a blank segment between pipes is an
/// explicit "no prerequisite" alternative and yields an empty group.
std::vector<DependencyGroup> parse_depends(std::string_view expr);

/// Tags may not contain whitespace, quotes, angle brackets, ',' or '|'.
bool is_valid_tag(std::string_view tag);

/// Scans a problem document for answer elements. Everything outside the
/// elements (and inside `<!-- -->` comments) is ignored. Throws Error with the
/// element position on malformed input.
ParsedDocument parse_problem(std::string_view text);

/// Resolves each element's depends expression. DSL errors are rethrown with
/// the element's position.
std::vector<BlockSpec> to_block_specs(const std::vector<ParsedAnswerElement>& elements);

/// Element document -> validated multigraph.
ProblemMultigraph parse_problem_multigraph(std::string_view text);

}  // namespace blockgrader
