#include "blockgrader/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

namespace blockgrader {

PartialGraph::PartialGraph(const ProblemMultigraph& m) : m_(&m), remaining_(m.size()) {
    for (std::size_t v = 0; v < m.size(); ++v) {
        remaining_[v].resize(m.groups(v).size());
        for (std::size_t g = 0; g < remaining_[v].size(); ++g) remaining_[v][g] = g;
    }
}

void PartialGraph::restrict_to(std::size_t v, std::size_t group) {
    auto& alts = remaining_.at(v);
    if (std::find(alts.begin(), alts.end(), group) == alts.end()) {
        throw Error(ErrorCode::InvalidMultigraph, "alternative " + std::to_string(group) + " of block \"" +
                                                      m_->block(v).tag + "\" is not available");
    }
    alts.assign(1, group);
}

namespace {

struct IndexEdge {
    std::size_t from;
    std::size_t to;
    std::size_t group;
};

struct IndexTraversal {
    std::optional<std::size_t> halt;
    std::vector<std::size_t> visited;
    std::vector<IndexEdge> edges;
};

template <typename Halt>
IndexTraversal dfs_until_index(const Halt& halt, const PartialGraph& graph, std::size_t start, TieBreak order) {
    const auto& m = graph.multigraph();
    IndexTraversal out;
    std::vector<bool> seen(m.size(), false);
    std::vector<std::size_t> stack{start};

    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        if (seen[v]) continue;
        seen[v] = true;

        std::vector<IndexEdge> incoming;
        for (std::size_t g : graph.remaining(v)) {
            for (std::size_t u : m.group_indices(v)[g]) incoming.push_back({u, v, g});
        }
        out.visited.push_back(v);
        out.edges.insert(out.edges.end(), incoming.begin(), incoming.end());
        if (halt(v)) {
            out.halt = v;
            return out;
        }
        if (order == TieBreak::Reverse) std::reverse(incoming.begin(), incoming.end());
        for (const auto& e : incoming) {
            if (!seen[e.from]) stack.push_back(e.from);
        }
    }
    return out;
}

std::size_t start_index(const ProblemMultigraph& m, const std::string& start) {
    auto index = m.find(start);
    if (!index) throw Error(ErrorCode::UnknownStart, "start block \"" + start + "\" does not exist");
    return *index;
}

CollapsedDag make_dag(const ProblemMultigraph& m, const std::vector<std::size_t>& nodes,
                      const std::vector<std::optional<std::size_t>>& choice) {
    CollapsedDag dag;
    for (std::size_t v : nodes) {
        const auto& tag = m.block(v).tag;
        dag.nodes.push_back(tag);
        if (!choice[v]) continue;
        dag.chosen_group.emplace(tag, *choice[v]);
        for (std::size_t u : m.group_indices(v)[*choice[v]]) dag.edges.emplace_back(m.block(u).tag, tag);
    }
    std::sort(dag.nodes.begin(), dag.nodes.end());
    std::sort(dag.edges.begin(), dag.edges.end());
    dag.edges.erase(std::unique(dag.edges.begin(), dag.edges.end()), dag.edges.end());
    return dag;
}

}  // namespace

TraversalResult dfs_until(const HaltPredicate& halt, const PartialGraph& graph, const std::string& start,
                          TieBreak order) {
    const auto& m = graph.multigraph();
    auto raw = dfs_until_index([&](std::size_t v) { return halt(m.block(v).tag); }, graph, start_index(m, start),
                               order);
    TraversalResult out;
    if (raw.halt) out.halt_node = m.block(*raw.halt).tag;
    for (auto v : raw.visited) out.visited.push_back(m.block(v).tag);
    for (const auto& e : raw.edges) out.edges.push_back({m.block(e.from).tag, m.block(e.to).tag, e.group});
    return out;
}

TraversalResult dfs_until(const HaltPredicate& halt, const ProblemMultigraph& graph, const std::string& start,
                          TieBreak order) {
    return dfs_until(halt, PartialGraph(graph), start, order);
}

std::vector<CollapsedDag> collapse(const ProblemMultigraph& m, CollapseOptions options) {
    const std::size_t final_index = m.final_index();
    std::set<CollapsedDag> found;
    std::deque<PartialGraph> pending;
    pending.emplace_back(m);

    while (!pending.empty()) {
        PartialGraph g = std::move(pending.front());
        pending.pop_front();

        auto ambiguous = [&](std::size_t v) { return g.remaining(v).size() > 1; };
        auto trace = dfs_until_index(ambiguous, g, final_index, options.order);

        if (!trace.halt) {
            std::vector<std::optional<std::size_t>> choice(m.size());
            for (std::size_t v : trace.visited) {
                if (!g.remaining(v).empty()) choice[v] = g.remaining(v).front();
            }
            found.insert(make_dag(m, trace.visited, choice));
            continue;
        }

        // One copy per alternative of the halting block; traversal of each
        // copy restarts from the final block.
        std::vector<std::size_t> alternatives = g.remaining(*trace.halt);
        if (options.order == TieBreak::Reverse) std::reverse(alternatives.begin(), alternatives.end());
        for (std::size_t alt : alternatives) {
            PartialGraph split = g;
            split.restrict_to(*trace.halt, alt);
            pending.push_back(std::move(split));
        }
    }
    return {found.begin(), found.end()};
}

std::uint64_t collapse_bound(const ProblemMultigraph& m) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t bound = 1;
    for (std::size_t v = 0; v < m.size(); ++v) {
        if (m.block(v).is_distractor) continue;
        std::uint64_t c = std::max<std::uint64_t>(1, m.groups(v).size());
        bound = bound > kMax / c ? kMax : bound * c;
    }
    return bound;
}

std::vector<CollapsedDag> brute_force_collapse(const ProblemMultigraph& m, std::size_t cap) {
    const std::uint64_t bound = collapse_bound(m);
    if (bound > cap) {
        throw CapExceededError(ErrorCode::OracleCapExceeded, cap,
                               std::to_string(bound) + " alternative combinations exceed the oracle cap of " +
                                   std::to_string(cap));
    }

    std::vector<std::size_t> choosers;  // blocks with at least one alternative
    for (std::size_t v = 0; v < m.size(); ++v) {
        if (!m.groups(v).empty()) choosers.push_back(v);
    }

    std::set<CollapsedDag> found;
    std::vector<std::size_t> digits(choosers.size(), 0);
    while (true) {
        std::vector<std::optional<std::size_t>> choice(m.size());
        for (std::size_t i = 0; i < choosers.size(); ++i) choice[choosers[i]] = digits[i];

        // keep only blocks with a path to the final block
        std::vector<bool> keep(m.size(), false);
        std::vector<std::size_t> stack{m.final_index()};
        keep[m.final_index()] = true;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            if (!choice[v]) continue;
            for (std::size_t u : m.group_indices(v)[*choice[v]]) {
                if (!keep[u]) {
                    keep[u] = true;
                    stack.push_back(u);
                }
            }
        }
        std::vector<std::size_t> nodes;
        for (std::size_t v = 0; v < m.size(); ++v) {
            if (keep[v]) nodes.push_back(v);
        }
        found.insert(make_dag(m, nodes, choice));

        // mixed-radix increment
        std::size_t i = 0;
        for (; i < choosers.size(); ++i) {
            if (++digits[i] < m.groups(choosers[i]).size()) break;
            digits[i] = 0;
        }
        if (i == choosers.size()) break;
    }
    return {found.begin(), found.end()};
}

std::vector<std::vector<std::string>> enumerate_topological_orders(const CollapsedDag& dag, std::size_t limit) {
    const std::size_t n = dag.nodes.size();
    auto index_of = [&](const std::string& tag) {
        return static_cast<std::size_t>(std::lower_bound(dag.nodes.begin(), dag.nodes.end(), tag) - dag.nodes.begin());
    };
    std::vector<std::vector<std::size_t>> dependents(n);
    std::vector<std::size_t> pending_prereqs(n, 0);
    for (const auto& [from, to] : dag.edges) {
        std::size_t u = index_of(from);
        std::size_t v = index_of(to);
        if (u >= n || v >= n || dag.nodes[u] != from || dag.nodes[v] != to) {
            throw Error(ErrorCode::InvalidMultigraph, "edge " + from + " -> " + to + " leaves the DAG's node set");
        }
        dependents[u].push_back(v);
        ++pending_prereqs[v];
    }

    std::vector<std::vector<std::string>> orders;
    std::vector<std::size_t> current;
    std::vector<bool> placed(n, false);

    // Candidates are tried in node (tag) order, so orders come out sorted.
    auto extend = [&](auto&& self) -> void {
        if (current.size() == n) {
            if (orders.size() == limit) {
                throw CapExceededError(ErrorCode::SolutionCapExceeded, limit,
                                       "more than " + std::to_string(limit) + " topological orders");
            }
            std::vector<std::string> order;
            order.reserve(n);
            for (auto v : current) order.push_back(dag.nodes[v]);
            orders.push_back(std::move(order));
            return;
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (placed[v] || pending_prereqs[v] != 0) continue;
            placed[v] = true;
            current.push_back(v);
            for (auto w : dependents[v]) --pending_prereqs[w];
            self(self);
            for (auto w : dependents[v]) ++pending_prereqs[w];
            current.pop_back();
            placed[v] = false;
        }
    };
    extend(extend);
    if (orders.empty() && n > 0) {
        throw Error(ErrorCode::InvalidMultigraph, "DAG edges contain a cycle");
    }
    return orders;
}

StatsReport stats(const ProblemMultigraph& m) {
    StatsReport report;
    for (std::size_t v = 0; v < m.size(); ++v) {
        if (m.block(v).is_distractor) continue;
        ++report.n;
        for (const auto& g : m.groups(v)) report.m += g.members.size();
    }
    report.d = collapse(m).size();
    report.bound = collapse_bound(m);
    return report;
}

}  // namespace blockgrader
