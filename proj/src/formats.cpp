#include "blockgrader/formats.hpp"

#include <set>

#include "blockgrader/parser.hpp"

namespace blockgrader {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::Schema, (path.empty() ? std::string("<root>") : path) + ": " + what);
}

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed, const std::string& path) {
    for (const auto& [key, value] : object.items()) {
        if (!allowed.count(key)) schema_error(path.empty() ? key : path + "." + key, "unknown field");
    }
}

const json& require(const json& object, const std::string& key, const std::string& path) {
    auto it = object.find(key);
    if (it == object.end()) schema_error(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

std::string get_string(const json& value, const std::string& path) {
    if (!value.is_string()) schema_error(path, "expected string");
    return value.get<std::string>();
}

bool get_bool(const json& value, const std::string& path) {
    if (!value.is_boolean()) schema_error(path, "expected boolean");
    return value.get<bool>();
}

int get_indent(const json& value, const std::string& path) {
    if (!value.is_number_integer()) schema_error(path, "expected integer");
    auto v = value.get<long long>();
    if (v < 0 || v > 1'000'000) schema_error(path, "expected a non-negative integer");
    return static_cast<int>(v);
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Schema, std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

std::string to_canonical(const ProblemMultigraph& m) {
    json blocks = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto& b = m.block(i);
        json depends = json::array();
        for (const auto& g : m.groups(i)) depends.push_back(g.members);
        blocks.push_back({{"tag", b.tag},
                          {"text", b.text},
                          {"indent", b.indent},
                          {"final", b.is_final},
                          {"distractor", b.is_distractor},
                          {"depends", std::move(depends)}});
    }
    json doc = {{"version", "1"}, {"blocks", std::move(blocks)}};
    return doc.dump(2) + "\n";
}

ProblemMultigraph from_canonical(std::string_view text) {
    json doc = parse_json(text);
    if (!doc.is_object()) schema_error("", "expected object");
    reject_unknown_keys(doc, {"version", "blocks"}, "");
    if (get_string(require(doc, "version", ""), "version") != "1") schema_error("version", "unsupported version");
    const json& blocks = require(doc, "blocks", "");
    if (!blocks.is_array()) schema_error("blocks", "expected array");

    std::vector<BlockSpec> specs;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string path = "blocks[" + std::to_string(i) + "]";
        const json& entry = blocks[i];
        if (!entry.is_object()) schema_error(path, "expected object");
        reject_unknown_keys(entry, {"tag", "text", "indent", "final", "distractor", "depends"}, path);

        BlockSpec spec;
        spec.block.tag = get_string(require(entry, "tag", path), path + ".tag");
        if (!spec.block.tag.empty() && !is_valid_tag(spec.block.tag)) schema_error(path + ".tag", "invalid tag");
        if (entry.contains("text")) spec.block.text = get_string(entry["text"], path + ".text");
        if (entry.contains("indent")) spec.block.indent = get_indent(entry["indent"], path + ".indent");
        if (entry.contains("final")) spec.block.is_final = get_bool(entry["final"], path + ".final");
        if (entry.contains("distractor")) spec.block.is_distractor = get_bool(entry["distractor"], path + ".distractor");
        if (entry.contains("depends")) {
            const json& depends = entry["depends"];
            if (!depends.is_array()) schema_error(path + ".depends", "expected array of arrays");
            for (std::size_t g = 0; g < depends.size(); ++g) {
                const std::string gpath = path + ".depends[" + std::to_string(g) + "]";
                if (!depends[g].is_array()) schema_error(gpath, "expected array of tags");
                DependencyGroup group;
                for (std::size_t k = 0; k < depends[g].size(); ++k) {
                    group.members.push_back(get_string(depends[g][k], gpath + "[" + std::to_string(k) + "]"));
                }
                spec.groups.push_back(std::move(group));
            }
        }
        specs.push_back(std::move(spec));
    }
    return build_multigraph(specs);
}

ProblemMultigraph load_problem_text(std::string_view text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return from_canonical(text);
    return parse_problem_multigraph(text);
}

SubmissionDocument submission_from_json(const json& j) {
    if (!j.is_object()) schema_error("", "expected object");
    reject_unknown_keys(j, {"problem_id", "placed"}, "");
    SubmissionDocument doc;
    if (j.contains("problem_id")) doc.problem_id = get_string(j["problem_id"], "problem_id");
    const json& placed = require(j, "placed", "");
    if (!placed.is_array()) schema_error("placed", "expected array");
    for (std::size_t i = 0; i < placed.size(); ++i) {
        const std::string path = "placed[" + std::to_string(i) + "]";
        const json& entry = placed[i];
        if (!entry.is_object()) schema_error(path, "expected object");
        reject_unknown_keys(entry, {"tag", "indent"}, path);
        Placement p;
        p.tag = get_string(require(entry, "tag", path), path + ".tag");
        if (entry.contains("indent")) p.indent = get_indent(entry["indent"], path + ".indent");
        doc.submission.placed.push_back(std::move(p));
    }
    return doc;
}

SubmissionDocument parse_submission(std::string_view text) { return submission_from_json(parse_json(text)); }

json submission_to_json(const SubmissionDocument& doc) {
    json placed = json::array();
    for (const auto& p : doc.submission.placed) placed.push_back({{"tag", p.tag}, {"indent", p.indent}});
    json out = {{"placed", std::move(placed)}};
    if (doc.problem_id) out["problem_id"] = *doc.problem_id;
    return out;
}

json report_to_json(const GradeReport& report) {
    return {{"score", report.score},
            {"exact", report.exact},
            {"edit_distance", report.edit_distance},
            {"best_dag", report.best_dag},
            {"first_error_index",
             report.first_error_index ? json(*report.first_error_index) : json(nullptr)},
            {"message", report.message}};
}

json stats_to_json(const StatsReport& stats) {
    return {{"n", stats.n}, {"m", stats.m}, {"d", stats.d}, {"bound", stats.bound}};
}

json dag_to_json(const CollapsedDag& dag, std::size_t id) {
    json edges = json::array();
    for (const auto& [from, to] : dag.edges) edges.push_back({from, to});
    json chosen = json::object();
    for (const auto& [tag, group] : dag.chosen_group) chosen[tag] = group;
    return {{"id", id}, {"nodes", dag.nodes}, {"edges", std::move(edges)}, {"chosen_group", std::move(chosen)}};
}

}  // namespace blockgrader
