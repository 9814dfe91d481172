#include "blockgrader/parser.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace blockgrader {

namespace {

constexpr std::string_view kOpenTag = "<pl-answer";
constexpr std::string_view kCloseTag = "</pl-answer>";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

// Drops whole blank lines from both ends; everything else is kept verbatim.
std::string trim_blank_lines(std::string_view s) {
    while (true) {
        auto nl = s.find('\n');
        if (nl == std::string_view::npos || !is_blank(s.substr(0, nl))) break;
        s.remove_prefix(nl + 1);
    }
    while (true) {
        auto nl = s.rfind('\n');
        if (nl == std::string_view::npos || !is_blank(s.substr(nl + 1))) break;
        s.remove_suffix(s.size() - nl);
    }
    if (is_blank(s)) return {};
    return std::string(s);
}

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {
        line_starts_.push_back(0);
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '\n') line_starts_.push_back(i + 1);
        }
    }

    ParsedDocument run() {
        ParsedDocument doc;
        std::set<std::string> tags;
        while (true) {
            std::size_t start = next_element(pos_);
            if (start == std::string_view::npos) break;
            pos_ = start;
            auto element = read_element(doc.warnings);
            if (!tags.insert(element.tag).second) {
                throw Error(ErrorCode::DuplicateTag, "tag \"" + element.tag + "\" is defined more than once",
                            element.pos);
            }
            doc.elements.push_back(std::move(element));
        }
        if (doc.elements.empty()) throw Error(ErrorCode::NoBlocks, "document contains no <pl-answer> elements");
        return doc;
    }

private:
    SourcePos at(std::size_t offset) const {
        auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
        std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
        return {line, offset - line_starts_[line - 1] + 1};
    }

    [[noreturn]] void fail(const std::string& message, std::size_t offset) const {
        throw Error(ErrorCode::MalformedElement, message, at(offset));
    }

    bool opens_element(std::size_t i) const {
        if (text_.compare(i, kOpenTag.size(), kOpenTag) != 0) return false;
        std::size_t after = i + kOpenTag.size();
        return after < text_.size() && (is_space(text_[after]) || text_[after] == '>' || text_[after] == '/');
    }

    // Offset of the next element opener at or after `from`, skipping comments.
    std::size_t next_element(std::size_t from) const {
        std::size_t i = from;
        while (i < text_.size()) {
            std::size_t lt = text_.find('<', i);
            if (lt == std::string_view::npos) return lt;
            if (text_.compare(lt, 4, "<!--") == 0) {
                std::size_t end = text_.find("-->", lt + 4);
                if (end == std::string_view::npos) return std::string_view::npos;
                i = end + 3;
                continue;
            }
            if (opens_element(lt)) return lt;
            i = lt + 1;
        }
        return std::string_view::npos;
    }

    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    }

    ParsedAnswerElement read_element(std::vector<Diagnostic>& warnings) {
        const std::size_t element_start = pos_;
        ParsedAnswerElement out;
        out.pos = at(element_start);
        pos_ += kOpenTag.size();

        std::set<std::string> seen;
        bool has_tag = false;
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) fail("unterminated <pl-answer> start tag", element_start);
            if (text_[pos_] == '>') {
                ++pos_;
                break;
            }
            if (text_[pos_] == '/') fail("<pl-answer> must have a closing </pl-answer>", element_start);

            const std::size_t name_start = pos_;
            while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '=' && text_[pos_] != '>' &&
                   text_[pos_] != '/') {
                ++pos_;
            }
            std::string name(text_.substr(name_start, pos_ - name_start));
            if (name.empty()) fail("expected attribute name", pos_);
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != '=') fail("attribute \"" + name + "\" has no value", name_start);
            ++pos_;
            skip_space();
            if (pos_ >= text_.size()) fail("unterminated <pl-answer> start tag", element_start);
            if (text_[pos_] == '\'') fail("attribute \"" + name + "\" must use double quotes", pos_);
            if (text_[pos_] != '"') fail("attribute \"" + name + "\" value must be double-quoted", pos_);
            const std::size_t value_start = ++pos_;
            std::size_t close = text_.find('"', value_start);
            if (close == std::string_view::npos) fail("unterminated value for attribute \"" + name + "\"", name_start);
            std::string_view value = text_.substr(value_start, close - value_start);
            pos_ = close + 1;

            if (!seen.insert(name).second) fail("duplicate attribute \"" + name + "\"", name_start);
            apply_attribute(out, name, value, name_start, warnings);
            if (name == "tag") has_tag = true;
        }
        if (!has_tag) fail("<pl-answer> is missing the tag attribute", element_start);

        const std::size_t body_start = pos_;
        std::size_t close = text_.find(kCloseTag, body_start);
        std::size_t nested = next_element(body_start);
        if (close == std::string_view::npos || (nested != std::string_view::npos && nested < close)) {
            fail("unclosed <pl-answer> element \"" + out.tag + "\"", element_start);
        }
        out.text = trim_blank_lines(text_.substr(body_start, close - body_start));
        pos_ = close + kCloseTag.size();
        return out;
    }

    bool parse_bool(std::string_view value, const std::string& name, std::size_t offset) const {
        if (value == "true") return true;
        if (value == "false") return false;
        fail("attribute \"" + name + "\" must be \"true\" or \"false\"", offset);
    }

    void apply_attribute(ParsedAnswerElement& out, const std::string& name, std::string_view value,
                         std::size_t offset, std::vector<Diagnostic>& warnings) const {
        if (name == "tag") {
            std::string_view tag = trim(value);
            if (tag.empty()) fail("tag attribute is empty", offset);
            if (!is_valid_tag(tag)) fail("invalid tag \"" + std::string(value) + "\"", offset);
            out.tag = std::string(tag);
        } else if (name == "depends") {
            out.depends_expr = std::string(value);
        } else if (name == "indent") {
            std::string_view digits = trim(value);
            int indent = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), indent);
            if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() || indent < 0) {
                fail("indent must be a non-negative integer, got \"" + std::string(value) + "\"", offset);
            }
            out.indent = indent;
        } else if (name == "final") {
            out.is_final = parse_bool(value, name, offset);
        } else if (name == "distractor") {
            out.is_distractor = out.is_distractor || parse_bool(value, name, offset);
        } else if (name == "correct") {
            out.is_distractor = out.is_distractor || !parse_bool(value, name, offset);
        } else {
            warnings.push_back({Severity::Warning, ErrorCode::MalformedElement,
                                "ignoring unsupported attribute \"" + name + "\"", at(offset)});
        }
    }

    std::string_view text_;
    std::vector<std::size_t> line_starts_;
    std::size_t pos_ = 0;
};

}  // namespace

bool is_valid_tag(std::string_view tag) {
    if (tag.empty()) return false;
    return std::none_of(tag.begin(), tag.end(), [](char c) {
        return is_space(c) || c == ',' || c == '|' || c == '"' || c == '\'' || c == '<' || c == '>';
    });
}

std::vector<DependencyGroup> parse_depends(std::string_view expr) {
    std::vector<DependencyGroup> groups;
    if (is_blank(expr)) return groups;

    std::size_t start = 0;
    while (true) {
        std::size_t bar = expr.find('|', start);
        std::string_view segment = expr.substr(start, bar == std::string_view::npos ? bar : bar - start);

        DependencyGroup group;
        if (!is_blank(segment)) {
            std::size_t tag_start = 0;
            while (true) {
                std::size_t comma = segment.find(',', tag_start);
                std::string_view tag =
                    trim(segment.substr(tag_start, comma == std::string_view::npos ? comma : comma - tag_start));
                if (tag.empty()) {
                    throw Error(ErrorCode::EmptyTag, "empty tag in depends \"" + std::string(expr) + "\"");
                }
                if (!is_valid_tag(tag)) {
                    throw Error(ErrorCode::MalformedElement,
                                "invalid tag \"" + std::string(tag) + "\" in depends \"" + std::string(expr) + "\"");
                }
                if (std::find(group.members.begin(), group.members.end(), tag) != group.members.end()) {
                    throw Error(ErrorCode::DuplicateTagInGroup,
                                "tag \"" + std::string(tag) + "\" repeated within one group of \"" +
                                    std::string(expr) + "\"");
                }
                group.members.emplace_back(tag);
                if (comma == std::string_view::npos) break;
                tag_start = comma + 1;
            }
        }
        groups.push_back(std::move(group));
        if (bar == std::string_view::npos) break;
        start = bar + 1;
    }
    return groups;
}

ParsedDocument parse_problem(std::string_view text) { return Scanner(text).run(); }

std::vector<BlockSpec> to_block_specs(const std::vector<ParsedAnswerElement>& elements) {
    std::vector<BlockSpec> specs;
    specs.reserve(elements.size());
    for (const auto& e : elements) {
        BlockSpec spec;
        spec.block = Block{e.tag, e.text, e.indent, e.is_final, e.is_distractor};
        spec.pos = e.pos;
        try {
            spec.groups = parse_depends(e.depends_expr);
        } catch (const Error& err) {
            throw Error(err.code(), "block \"" + e.tag + "\": " + err.detail(), e.pos);
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

ProblemMultigraph parse_problem_multigraph(std::string_view text) {
    auto doc = parse_problem(text);
    auto specs = to_block_specs(doc.elements);
    return build_multigraph(specs);
}

}  // namespace blockgrader
