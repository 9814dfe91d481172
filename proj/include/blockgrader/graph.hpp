#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "blockgrader/model.hpp"

namespace blockgrader {

/// Order in which a node's incoming edges are pushed during traversal and in
/// which alternatives are split during collapse. Results never depend on it.
enum class TieBreak { Forward, Reverse };

/// A multigraph with some blocks restricted to a subset of their
/// alternatives. A fresh PartialGraph has every alternative available.
class PartialGraph {
public:
    explicit PartialGraph(const ProblemMultigraph& m);

    const ProblemMultigraph& multigraph() const noexcept { return *m_; }

    /// Indices (into m.groups(v)) of the alternatives still allowed for v.
    const std::vector<std::size_t>& remaining(std::size_t v) const { return remaining_.at(v); }

    /// Keeps only alternative `group` of block v.
    void restrict_to(std::size_t v, std::size_t group);

private:
    const ProblemMultigraph* m_;
    std::vector<std::vector<std::size_t>> remaining_;
};

struct TraversedEdge {
    std::string from;  // prerequisite
    std::string to;    // dependent
    std::size_t group = 0;

    friend bool operator==(const TraversedEdge&, const TraversedEdge&) = default;
    friend auto operator<=>(const TraversedEdge&, const TraversedEdge&) = default;
};

struct TraversalResult {
    std::optional<std::string> halt_node;
    std::vector<std::string> visited;  // visit order
    std::vector<TraversedEdge> edges;  // incoming edges of every visited node
};

using HaltPredicate = std::function<bool(const std::string& tag)>;

/// Depth-first search backward along incoming edges from `start`, stopping at
/// the first popped node that satisfies `halt`. Each node is visited at most
/// once. Throws Error(UnknownStart) when `start` is not a block.
TraversalResult dfs_until(const HaltPredicate& halt, const PartialGraph& graph, const std::string& start,
                          TieBreak order = TieBreak::Forward);
TraversalResult dfs_until(const HaltPredicate& halt, const ProblemMultigraph& graph, const std::string& start,
                          TieBreak order = TieBreak::Forward);

struct CollapseOptions {
    TieBreak order = TieBreak::Forward;
};

/// All distinct monochrome DAGs of `m`, sorted by canonical form.
std::vector<CollapsedDag> collapse(const ProblemMultigraph& m, CollapseOptions options = {});

inline constexpr std::size_t kDefaultOracleCap = 4096;

/// Reference enumeration over every combination of alternatives. Throws
/// CapExceededError(OracleCapExceeded) when the combination count exceeds
/// `cap`.
std::vector<CollapsedDag> brute_force_collapse(const ProblemMultigraph& m, std::size_t cap = kDefaultOracleCap);

inline constexpr std::size_t kDefaultSolutionCap = 10'000;

/// Every topological order of dag.nodes, lexicographic by tag. Throws
/// CapExceededError(SolutionCapExceeded) as soon as more than `limit` exist.
std::vector<std::vector<std::string>> enumerate_topological_orders(const CollapsedDag& dag,
                                                                   std::size_t limit = kDefaultSolutionCap);

/// Product of max(1, alternatives) over the non-distractor blocks, saturating
/// at UINT64_MAX.
std::uint64_t collapse_bound(const ProblemMultigraph& m);

StatsReport stats(const ProblemMultigraph& m);

std::string export_dot(const ProblemMultigraph& m);
std::string export_dot(const CollapsedDag& dag, const std::string& name = "dag");

}  // namespace blockgrader
