#include "blockgrader/grader.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace blockgrader {

void check_policy(const GradingPolicy& policy) {
    if (!(policy.score_floor >= 0.0 && policy.score_floor < 1.0)) {
        throw Error(ErrorCode::InvalidPolicy, "score_floor must be in [0, 1)");
    }
    if (policy.solution_cap == 0) throw Error(ErrorCode::InvalidPolicy, "solution_cap must be positive");
}

std::size_t edit_distance(std::span<const Placement> a, std::span<const Placement> b, bool indent_strict) {
    auto same = [indent_strict](const Placement& x, const Placement& y) {
        return x.tag == y.tag && (!indent_strict || x.indent == y.indent);
    };
    // single rolling row over b
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t above = row[j];
            row[j] = std::min({above + 1, row[j - 1] + 1, diagonal + (same(a[i - 1], b[j - 1]) ? 0 : 1)});
            diagonal = above;
        }
    }
    return row[b.size()];
}

namespace {

std::vector<Placement> with_indents(const ProblemMultigraph& m, const std::vector<std::string>& order) {
    std::vector<Placement> out;
    out.reserve(order.size());
    for (const auto& tag : order) out.push_back({tag, m.block(tag).indent});
    return out;
}

}  // namespace

std::vector<std::vector<Placement>> enumerate_solutions(const ProblemMultigraph& m, std::size_t limit) {
    std::set<std::vector<Placement>> unique;
    for (const auto& dag : collapse(m)) {
        for (const auto& order : enumerate_topological_orders(dag, limit)) {
            unique.insert(with_indents(m, order));
            if (unique.size() > limit) {
                throw CapExceededError(ErrorCode::SolutionCapExceeded, limit,
                                       "more than " + std::to_string(limit) + " correct solutions");
            }
        }
    }
    return {unique.begin(), unique.end()};
}

void check_submission(const ProblemMultigraph& m, const Submission& submission) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < submission.placed.size(); ++i) {
        const auto& p = submission.placed[i];
        if (!m.contains(p.tag)) {
            throw Error(ErrorCode::UnknownTag, "position " + std::to_string(i + 1) + ": unknown block tag \"" +
                                                   p.tag + "\"");
        }
        if (!seen.insert(p.tag).second) {
            throw Error(ErrorCode::InvalidSubmission, "block \"" + p.tag + "\" is placed more than once");
        }
        if (p.indent < 0) {
            throw Error(ErrorCode::InvalidSubmission, "position " + std::to_string(i + 1) + ": negative indent");
        }
    }
}

Grader::Grader(const ProblemMultigraph& m, GradingPolicy policy) : m_(&m), policy_(policy) {
    check_policy(policy_);
    dags_ = collapse(m);
    solutions_.reserve(dags_.size());
    for (const auto& dag : dags_) {
        std::vector<std::vector<Placement>> orders;
        for (const auto& order : enumerate_topological_orders(dag, policy_.solution_cap)) {
            orders.push_back(with_indents(m, order));
        }
        solutions_.push_back(std::move(orders));
    }
}

GradeReport Grader::grade(const Submission& submission) const {
    check_submission(*m_, submission);

    // Closest solution: smallest distance, then the longest solution, then the
    // canonically smallest DAG (dags_ is sorted, so the lowest index).
    std::optional<std::size_t> best_distance;
    std::size_t best_length = 0;
    std::size_t best_dag = 0;
    for (std::size_t i = 0; i < dags_.size(); ++i) {
        for (const auto& solution : solutions_[i]) {
            std::size_t d = edit_distance(submission.placed, solution, policy_.indent_strict);
            bool better = !best_distance || d < *best_distance ||
                          (d == *best_distance && solution.size() > best_length);
            if (better) {
                best_distance = d;
                best_length = solution.size();
                best_dag = i;
            }
        }
    }

    GradeReport report;
    report.edit_distance = best_distance.value_or(0);
    report.closest_length = best_length;
    report.best_dag = best_dag;
    report.exact = report.edit_distance == 0;
    if (report.exact) {
        report.score = 1.0;
    } else {
        double recovered = report.edit_distance >= best_length
                               ? 0.0
                               : static_cast<double>(best_length - report.edit_distance) /
                                     static_cast<double>(best_length);
        report.score = std::max(policy_.score_floor, recovered);
    }

    auto fb = feedback(submission, report);
    report.first_error_index = fb.first_error_index;
    report.message = std::move(fb.message);
    return report;
}

Feedback Grader::feedback(const Submission& submission, const GradeReport& report) const {
    if (report.exact) return {std::nullopt, "Correct."};

    const auto& dag = dags_.at(report.best_dag);
    std::set<std::string> earlier;
    for (std::size_t i = 0; i < submission.placed.size(); ++i) {
        const auto& p = submission.placed[i];
        const std::string position = std::to_string(i + 1);
        if (!dag.contains(p.tag)) {
            return {i, "Block " + position + " does not belong in this solution."};
        }
        if (policy_.indent_strict && p.indent != m_->block(p.tag).indent) {
            return {i, "Block " + position + " has the wrong indentation."};
        }
        auto chosen = dag.chosen_group.find(p.tag);
        if (chosen != dag.chosen_group.end()) {
            const auto& members = m_->groups(p.tag)[chosen->second].members;
            bool ready = std::all_of(members.begin(), members.end(),
                                     [&](const std::string& tag) { return earlier.count(tag) != 0; });
            if (!ready) return {i, "Block " + position + " is out of order."};
        }
        earlier.insert(p.tag);
    }
    if (submission.placed.empty()) return {std::nullopt, "No blocks placed."};
    return {std::nullopt, "All " + std::to_string(submission.placed.size()) +
                              " placed blocks are correct so far, but the solution is incomplete."};
}

GradeReport grade(const ProblemMultigraph& m, const Submission& submission, const GradingPolicy& policy) {
    return Grader(m, policy).grade(submission);
}

Feedback feedback(const ProblemMultigraph& m, const Submission& submission, const GradeReport& report,
                  const GradingPolicy& policy) {
    return Grader(m, policy).feedback(submission, report);
}

}  // namespace blockgrader
