#include "blockgrader/model.hpp"

#include <algorithm>
#include <set>

namespace blockgrader {

std::optional<std::size_t> ProblemMultigraph::find(const std::string& tag) const {
    auto it = index_.find(tag);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t ProblemMultigraph::index_of(const std::string& tag) const {
    auto it = index_.find(tag);
    if (it == index_.end()) throw Error(ErrorCode::UnknownTag, "unknown block tag \"" + tag + "\"");
    return it->second;
}

namespace {

void add_error(std::vector<Diagnostic>& out, ErrorCode code, std::string message, SourcePos pos) {
    out.push_back({Severity::Error, code, std::move(message), pos});
}

void add_warning(std::vector<Diagnostic>& out, ErrorCode code, std::string message, SourcePos pos) {
    out.push_back({Severity::Warning, code, std::move(message), pos});
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// prereqs[v] = union of all group members of v, as indices. Returns one cycle
// in edge direction (u -> v meaning v depends on u), or empty.
std::vector<std::size_t> find_cycle(const std::vector<std::vector<std::size_t>>& prereqs) {
    enum class Mark { White, Gray, Black };
    const std::size_t n = prereqs.size();
    std::vector<Mark> mark(n, Mark::White);
    std::vector<std::size_t> parent(n, n);

    for (std::size_t root = 0; root < n; ++root) {
        if (mark[root] != Mark::White) continue;
        // (node, next prerequisite position)
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        mark[root] = Mark::Gray;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next == prereqs[v].size()) {
                mark[v] = Mark::Black;
                stack.pop_back();
                continue;
            }
            std::size_t u = prereqs[v][next++];
            if (mark[u] == Mark::Gray) {
                // v depends on u and parent[w] depends on w, so walking the
                // parent chain from v back to u follows edge direction.
                std::vector<std::size_t> cycle{u};
                for (std::size_t w = v; w != u; w = parent[w]) cycle.push_back(w);
                cycle.push_back(u);
                return cycle;
            }
            if (mark[u] == Mark::White) {
                mark[u] = Mark::Gray;
                parent[u] = v;
                stack.emplace_back(u, 0);
            }
        }
    }
    return {};
}

}  // namespace

std::vector<Diagnostic> validate(std::span<const BlockSpec> specs) {
    std::vector<Diagnostic> out;
    if (specs.empty()) {
        add_error(out, ErrorCode::NoBlocks, "problem defines no blocks", {});
        return out;
    }

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& s = specs[i];
        if (s.block.tag.empty()) {
            add_error(out, ErrorCode::EmptyTag, "block has an empty tag", s.pos);
            continue;
        }
        if (!index.emplace(s.block.tag, i).second) {
            add_error(out, ErrorCode::DuplicateTag, "tag \"" + s.block.tag + "\" is defined more than once", s.pos);
        }
        if (s.block.indent < 0) {
            add_error(out, ErrorCode::MalformedElement,
                      "block \"" + s.block.tag + "\" has negative indent " + std::to_string(s.block.indent), s.pos);
        }
        if (s.block.is_final && s.block.is_distractor) {
            add_error(out, ErrorCode::FinalDistractor,
                      "block \"" + s.block.tag + "\" cannot be both final and a distractor", s.pos);
        }
        if (s.block.is_distractor && !s.groups.empty()) {
            add_error(out, ErrorCode::DistractorDependency,
                      "distractor block \"" + s.block.tag + "\" must not declare dependencies", s.pos);
        }
    }

    std::vector<std::string> finals;
    SourcePos second_final;
    for (const auto& s : specs) {
        if (!s.block.is_final) continue;
        finals.push_back(s.block.tag);
        if (finals.size() == 2) second_final = s.pos;
    }
    if (finals.empty()) {
        add_error(out, ErrorCode::NoFinal, "no block is marked final", {});
    } else if (finals.size() > 1) {
        add_error(out, ErrorCode::MultipleFinal, "more than one block is marked final: " + join(finals, ", "),
                  second_final);
    }

    std::vector<std::vector<std::size_t>> prereqs(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& s = specs[i];
        if (s.block.is_distractor) continue;
        for (const auto& group : s.groups) {
            std::set<std::string> seen;
            for (const auto& member : group.members) {
                if (!seen.insert(member).second) {
                    add_error(out, ErrorCode::DuplicateTagInGroup,
                              "block \"" + s.block.tag + "\" lists \"" + member + "\" twice in one group", s.pos);
                    continue;
                }
                if (member == s.block.tag) {
                    add_error(out, ErrorCode::SelfDependency, "block \"" + member + "\" depends on itself", s.pos);
                    continue;
                }
                auto it = index.find(member);
                if (it == index.end()) {
                    add_error(out, ErrorCode::UnknownTag,
                              "block \"" + s.block.tag + "\" depends on unknown tag \"" + member + "\"", s.pos);
                    continue;
                }
                if (specs[it->second].block.is_distractor) {
                    add_error(out, ErrorCode::DistractorDependency,
                              "block \"" + s.block.tag + "\" depends on distractor \"" + member + "\"", s.pos);
                    continue;
                }
                if (std::find(prereqs[i].begin(), prereqs[i].end(), it->second) == prereqs[i].end()) {
                    prereqs[i].push_back(it->second);
                }
            }
        }
    }

    auto cycle = find_cycle(prereqs);
    if (!cycle.empty()) {
        std::vector<std::string> tags;
        for (auto i : cycle) tags.push_back(specs[i].block.tag);
        add_error(out, ErrorCode::Cycle, "dependency cycle: " + join(tags, " -> "), specs[cycle.front()].pos);
    }

    if (finals.size() == 1 && cycle.empty()) {
        const std::size_t final_index = index.at(finals.front());
        std::vector<bool> reaches(specs.size(), false);
        std::vector<std::size_t> stack{final_index};
        reaches[final_index] = true;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto u : prereqs[v]) {
                if (!reaches[u]) {
                    reaches[u] = true;
                    stack.push_back(u);
                }
            }
        }
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const auto& s = specs[i];
            if (s.block.is_distractor || s.block.tag.empty() || reaches[i]) continue;
            add_warning(out, ErrorCode::InvalidMultigraph,
                        "block \"" + s.block.tag + "\" is not a prerequisite of the final block and never appears in a solution",
                        s.pos);
        }
    }
    return out;
}

ProblemMultigraph build_multigraph(std::span<const BlockSpec> specs) {
    auto diagnostics = validate(specs);
    bool failed = std::any_of(diagnostics.begin(), diagnostics.end(),
                              [](const Diagnostic& d) { return d.severity == Severity::Error; });
    if (failed) throw ValidationError(std::move(diagnostics));

    ProblemMultigraph m;
    m.blocks_.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        m.blocks_.push_back(specs[i].block);
        m.index_.emplace(specs[i].block.tag, i);
        if (specs[i].block.is_final) m.final_index_ = i;
    }
    m.groups_.resize(specs.size());
    m.group_indices_.resize(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        m.groups_[i] = specs[i].groups;
        for (const auto& g : specs[i].groups) {
            std::vector<std::size_t> resolved;
            resolved.reserve(g.members.size());
            for (const auto& member : g.members) resolved.push_back(m.index_.at(member));
            m.group_indices_[i].push_back(std::move(resolved));
        }
    }
    return m;
}

std::string CollapsedDag::canonical_key() const {
    std::string out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += ',';
        out += nodes[i];
    }
    out += '|';
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i) out += ',';
        out += edges[i].first;
        out += '>';
        out += edges[i].second;
    }
    return out;
}

bool CollapsedDag::contains(const std::string& tag) const {
    return std::binary_search(nodes.begin(), nodes.end(), tag);
}

}  // namespace blockgrader
