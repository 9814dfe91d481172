#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blockgrader/graph.hpp"
#include "blockgrader/model.hpp"

namespace blockgrader {

struct GradingPolicy {
    bool indent_strict = true;
    double score_floor = 0.0;                      // 0 <= floor < 1
    std::size_t solution_cap = kDefaultSolutionCap;  // per collapsed DAG
};

/// Throws Error(InvalidPolicy) when a field is out of range.
void check_policy(const GradingPolicy& policy);

/// Unit-cost Levenshtein distance. Elements are equal when tags match and,
/// under indent_strict, indents match too.
std::size_t edit_distance(std::span<const Placement> a, std::span<const Placement> b, bool indent_strict);

/// Every distinct correct (order, declared indent) sequence over all collapsed
/// DAGs, lexicographic. Throws CapExceededError(SolutionCapExceeded) when there
/// are more than `limit`.
std::vector<std::vector<Placement>> enumerate_solutions(const ProblemMultigraph& m,
                                                        std::size_t limit = kDefaultSolutionCap);

/// Throws Error(UnknownTag) for tags outside the problem and
/// Error(InvalidSubmission) for repeated tags or negative indents.
void check_submission(const ProblemMultigraph& m, const Submission& submission);

struct Feedback {
    std::optional<std::size_t> first_error_index;
    std::string message;
};

/// Grades submissions against one problem. Collapsing and solution
/// enumeration happen once, in the constructor; grade() is then const and
/// safe to call concurrently.
class Grader {
public:
    Grader(const ProblemMultigraph& m, GradingPolicy policy = {});

    const ProblemMultigraph& problem() const noexcept { return *m_; }
    const GradingPolicy& policy() const noexcept { return policy_; }
    const std::vector<CollapsedDag>& dags() const noexcept { return dags_; }
    /// solutions()[i] are the topological orders of dags()[i] with declared indents.
    const std::vector<std::vector<std::vector<Placement>>>& solutions() const noexcept { return solutions_; }

    GradeReport grade(const Submission& submission) const;

    /// Top-down check against dags()[report.best_dag]: the first position whose
    /// block is not in that DAG, sits at the wrong indent, or precedes one of
    /// its chosen prerequisites.
    Feedback feedback(const Submission& submission, const GradeReport& report) const;

private:
    const ProblemMultigraph* m_;
    GradingPolicy policy_;
    std::vector<CollapsedDag> dags_;
    std::vector<std::vector<std::vector<Placement>>> solutions_;
};

GradeReport grade(const ProblemMultigraph& m, const Submission& submission, const GradingPolicy& policy = {});

Feedback feedback(const ProblemMultigraph& m, const Submission& submission, const GradeReport& report,
                  const GradingPolicy& policy = {});

}  // namespace blockgrader
