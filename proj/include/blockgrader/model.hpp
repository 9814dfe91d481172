#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blockgrader/errors.hpp"

namespace blockgrader {

/// One draggable unit of a problem.
struct Block {
    std::string tag;
    std::string text;
    int indent = 0;
    bool is_final = false;
    bool is_distractor = false;

    friend bool operator==(const Block&, const Block&) = default;
};

/// One alternative set of prerequisites ("color"). All members must precede
/// the dependent block when this alternative is chosen. May be empty, which
/// means "no prerequisite".
struct DependencyGroup {
    std::vector<std::string> members;

    friend bool operator==(const DependencyGroup&, const DependencyGroup&) = default;
};

/// Authoring-level description of one block before validation.
struct BlockSpec {
    Block block;
    std::vector<DependencyGroup> groups;
    SourcePos pos;
};

/// Validated dependency multigraph. Edge u -> v means "v depends on u"; the
/// alternatives are stored on the dependent block. Immutable once built.
class ProblemMultigraph {
public:
    /// Blocks in authored (block-bank) order, distractors included.
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    std::size_t size() const noexcept { return blocks_.size(); }

    const Block& block(std::size_t index) const { return blocks_.at(index); }
    const Block& block(const std::string& tag) const { return blocks_.at(index_of(tag)); }

    /// Alternatives of the block at `index`, in authored order. Empty for
    /// source blocks and distractors.
    const std::vector<DependencyGroup>& groups(std::size_t index) const { return groups_.at(index); }
    const std::vector<DependencyGroup>& groups(const std::string& tag) const { return groups_.at(index_of(tag)); }

    /// Same alternatives with members resolved to block indices.
    const std::vector<std::vector<std::size_t>>& group_indices(std::size_t index) const {
        return group_indices_.at(index);
    }

    std::optional<std::size_t> find(const std::string& tag) const;
    /// Throws Error(UnknownTag) when absent.
    std::size_t index_of(const std::string& tag) const;
    bool contains(const std::string& tag) const { return find(tag).has_value(); }

    const std::string& final_tag() const { return blocks_.at(final_index_).tag; }
    std::size_t final_index() const noexcept { return final_index_; }

    friend bool operator==(const ProblemMultigraph& a, const ProblemMultigraph& b) {
        return a.blocks_ == b.blocks_ && a.groups_ == b.groups_ && a.final_index_ == b.final_index_;
    }

private:
    friend ProblemMultigraph build_multigraph(std::span<const BlockSpec> specs);
    ProblemMultigraph() = default;

    std::vector<Block> blocks_;
    std::vector<std::vector<DependencyGroup>> groups_;
    std::vector<std::vector<std::vector<std::size_t>>> group_indices_;
    std::map<std::string, std::size_t> index_;
    std::size_t final_index_ = 0;
};

/// Every violated multigraph invariant in `specs` produces one
/// error diagnostic; suspicious but legal shapes produce warnings.
std::vector<Diagnostic> validate(std::span<const BlockSpec> specs);

/// Throws ValidationError listing every error found by validate().
ProblemMultigraph build_multigraph(std::span<const BlockSpec> specs);

/// A monochrome dependency DAG: one chosen alternative per retained block and
/// only the blocks that reach the final block.
struct CollapsedDag {
    std::vector<std::string> nodes;                        // sorted
    std::map<std::string, std::size_t> chosen_group;       // only nodes with groups
    std::vector<std::pair<std::string, std::string>> edges;  // sorted (u, v): v depends on u

    /// "A,B,F|A>B,B>F"; two DAGs are the same iff their keys are equal.
    std::string canonical_key() const;

    bool contains(const std::string& tag) const;

    /// Equality and ordering look only at the canonical (nodes, edges) form.
    friend bool operator==(const CollapsedDag& a, const CollapsedDag& b) {
        return a.nodes == b.nodes && a.edges == b.edges;
    }
    friend bool operator<(const CollapsedDag& a, const CollapsedDag& b) {
        if (a.nodes != b.nodes) return a.nodes < b.nodes;
        return a.edges < b.edges;
    }
};

struct Placement {
    std::string tag;
    int indent = 0;

    friend bool operator==(const Placement&, const Placement&) = default;
    friend auto operator<=>(const Placement&, const Placement&) = default;
};

/// The student's arranged sequence.
struct Submission {
    std::vector<Placement> placed;
};

struct GradeReport {
    double score = 0.0;
    bool exact = false;
    std::size_t best_dag = 0;  // index into collapse() output
    std::size_t edit_distance = 0;
    std::size_t closest_length = 0;
    std::optional<std::size_t> first_error_index;
    std::string message;
};

struct StatsReport {
    std::size_t n = 0;  // blocks excluding distractors
    std::size_t m = 0;  // sum of group sizes
    std::size_t d = 0;  // distinct collapsed DAGs
    std::uint64_t bound = 1;  // product of max(1, groups per block), saturating
};

}  // namespace blockgrader
