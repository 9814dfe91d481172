#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <tuple>

#include "blockgrader/graph.hpp"

namespace blockgrader {

namespace {

bool is_keyword(std::string_view id) {
    static constexpr std::array<std::string_view, 6> kKeywords{"node", "edge", "graph", "digraph", "subgraph",
                                                               "strict"};
    return std::any_of(kKeywords.begin(), kKeywords.end(), [&](std::string_view kw) {
        return kw.size() == id.size() && std::equal(kw.begin(), kw.end(), id.begin(), [](char a, char b) {
                   return a == std::tolower(static_cast<unsigned char>(b));
               });
    });
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

// Bare identifiers when DOT allows them, quoted strings otherwise.
std::string dot_id(std::string_view tag) {
    bool bare = !tag.empty() && !std::isdigit(static_cast<unsigned char>(tag.front())) && !is_keyword(tag) &&
                std::all_of(tag.begin(), tag.end(), [](char c) {
                    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                });
    return bare ? std::string(tag) : quote(tag);
}

constexpr std::array<std::string_view, 6> kPalette{"black", "blue", "red", "darkgreen", "orange", "purple"};

}  // namespace

std::string export_dot(const ProblemMultigraph& m) {
    std::vector<const Block*> blocks;
    for (const auto& b : m.blocks()) blocks.push_back(&b);
    std::sort(blocks.begin(), blocks.end(), [](const Block* a, const Block* b) { return a->tag < b->tag; });

    // (from, to, group)
    std::vector<std::tuple<std::string, std::string, std::size_t>> edges;
    for (std::size_t v = 0; v < m.size(); ++v) {
        const auto& groups = m.groups(v);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (const auto& u : groups[g].members) edges.emplace_back(u, m.block(v).tag, g);
        }
    }
    std::sort(edges.begin(), edges.end());

    std::ostringstream out;
    out << "digraph multigraph {\n";
    for (const auto* b : blocks) {
        out << "  " << dot_id(b->tag) << " [label=" << quote(b->tag);
        if (b->is_final) out << ", shape=doublecircle";
        if (b->is_distractor) out << ", style=dashed";
        out << "];\n";
    }
    for (const auto& [from, to, group] : edges) {
        out << "  " << dot_id(from) << " -> " << dot_id(to) << " [label=\"" << group << "\", color=\""
            << kPalette[group % kPalette.size()] << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_dot(const CollapsedDag& dag, const std::string& name) {
    std::ostringstream out;
    out << "digraph " << dot_id(name) << " {\n";
    for (const auto& tag : dag.nodes) out << "  " << dot_id(tag) << ";\n";
    for (const auto& [from, to] : dag.edges) out << "  " << dot_id(from) << " -> " << dot_id(to) << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace blockgrader
