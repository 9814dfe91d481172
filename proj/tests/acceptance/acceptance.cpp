// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "blockgrader/cli.hpp"
#include "blockgrader/formats.hpp"
#include "blockgrader/grader.hpp"
#include "blockgrader/graph.hpp"
#include "blockgrader/parser.hpp"
#include "blockgrader/problem_store.hpp"
#include "support/oracles.hpp"

using namespace blockgrader;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
    auto start = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << std::fixed << std::setprecision(3) << seconds
              << " s)";
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << std::endl;
}

std::set<std::string> keys(const std::vector<CollapsedDag>& dags) {
    std::set<std::string> out;
    for (const auto& d : dags) out.insert(d.canonical_key());
    return out;
}

std::vector<ProblemMultigraph> random_corpus(std::size_t count) {
    std::mt19937_64 rng(0x5eed);
    std::vector<ProblemMultigraph> out;
    oracle::RandomProblemOptions opt;
    opt.max_blocks = 10;
    opt.max_groups = 3;
    opt.max_bound = 256;
    opt.distractor_chance = 0.2;
    while (out.size() < count) out.push_back(build_multigraph(oracle::random_problem(rng, opt)));
    return out;
}

// Explicit solution list from the reference implementations; empty when the
// problem has more than `cap` solutions.
std::vector<std::vector<Placement>> oracle_solutions(const ProblemMultigraph& m, std::size_t cap) {
    std::set<std::vector<Placement>> unique;
    for (const auto& dag : brute_force_collapse(m)) {
        std::vector<std::vector<std::string>> orders;
        oracle::topological_orders_recursive(dag, orders, cap);
        if (orders.size() > cap) return {};
        for (const auto& order : orders) {
            std::vector<Placement> s;
            for (const auto& t : order) s.push_back({t, m.block(t).indent});
            unique.insert(std::move(s));
            if (unique.size() > cap) return {};
        }
    }
    return {unique.begin(), unique.end()};
}

std::string capture_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    run_cli(args, out, err);
    return out.str();
}

}  // namespace

int main() {
    const auto corpus = random_corpus(250);

    criterion("sum-two-numbers problem: 3 DAGs, n=6 m=8 d=3, 4 solutions, under 1 s", [] {
        Outcome o;
        auto start = Clock::now();
        auto m = parse_problem_multigraph(oracle::kSumProblem);
        auto dags = collapse(m);
        auto s = stats(m);
        auto solutions = enumerate_solutions(m);
        double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (dags.size() != 3) o.fail("got " + std::to_string(dags.size()) + " DAGs");
        if (s.n != 6 || s.m != 8 || s.d != 3) {
            o.fail("stats n=" + std::to_string(s.n) + " m=" + std::to_string(s.m) + " d=" + std::to_string(s.d));
        }
        if (solutions.size() != 4) o.fail("got " + std::to_string(solutions.size()) + " solutions");
        if (seconds >= 1.0) o.fail("took " + std::to_string(seconds) + " s");
        return o;
    });

    criterion("collapse equals brute-force enumeration on 250 random multigraphs, under 30 s", [&] {
        Outcome o;
        auto start = Clock::now();
        std::size_t multi = 0;
        std::size_t largest = 0;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            auto dags = collapse(corpus[i]);
            if (keys(dags) != keys(brute_force_collapse(corpus[i]))) o.fail("mismatch on problem " + std::to_string(i));
            multi += dags.size() >= 2;
            largest = std::max(largest, dags.size());
        }
        double seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (seconds >= 30.0) o.fail("took " + std::to_string(seconds) + " s");
        if (o.pass) o.detail = std::to_string(multi) + " with d >= 2, largest d = " + std::to_string(largest);
        return o;
    });

    criterion("DAG count never exceeds the product of alternative counts", [&] {
        Outcome o;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            std::uint64_t product = 1;
            for (std::size_t v = 0; v < corpus[i].size(); ++v) {
                if (!corpus[i].block(v).is_distractor) {
                    product *= std::max<std::uint64_t>(1, corpus[i].groups(v).size());
                }
            }
            if (collapse(corpus[i]).size() > product) o.fail("exceeded on problem " + std::to_string(i));
        }
        return o;
    });

    criterion("every solution grades exact with score 1; 100 non-solution permutations score below 1", [&] {
        Outcome o;
        std::mt19937_64 rng(17);
        std::size_t samples = 0;
        std::size_t checked = 0;
        std::vector<ProblemMultigraph> problems = corpus;
        for (const auto& f : list_problem_files(oracle::kProblemsDir)) problems.push_back(load_problem_file(f).graph);
        problems.push_back(parse_problem_multigraph(oracle::kSumProblem));

        for (std::size_t p = 0; p < problems.size(); ++p) {
            const auto& m = problems[p];
            Grader grader(m);
            std::set<std::vector<Placement>> all;
            for (const auto& per_dag : grader.solutions()) all.insert(per_dag.begin(), per_dag.end());
            for (const auto& sol : all) {
                ++checked;
                auto r = grader.grade({sol});
                if (!r.exact || r.score != 1.0) o.fail("solution rejected on problem " + std::to_string(p));
            }
            if (samples >= 100) continue;
            // one length-preserving shuffle of some solution per problem, when it is not itself a solution
            const auto& base = *std::next(all.begin(), static_cast<std::ptrdiff_t>(rng() % all.size()));
            for (int attempt = 0; attempt < 20; ++attempt) {
                auto perm = base;
                std::shuffle(perm.begin(), perm.end(), rng);
                if (all.count(perm)) continue;
                ++samples;
                if (grader.grade({perm}).score >= 1.0) o.fail("non-solution scored 1 on problem " + std::to_string(p));
                break;
            }
        }
        if (samples < 100) o.fail("only " + std::to_string(samples) + " non-solution samples");
        o.detail = o.pass ? std::to_string(checked) + " solutions, " + std::to_string(samples) + " non-solutions"
                          : o.detail;
        return o;
    });

    criterion("edit distance equals the minimum over explicit solutions; all six blocks score 0.8", [&] {
        Outcome o;
        std::mt19937_64 rng(23);
        std::size_t problems = 0;
        for (std::size_t p = 0; p < corpus.size(); ++p) {
            const auto& m = corpus[p];
            auto solutions = oracle_solutions(m, 5000);
            if (solutions.empty()) continue;
            ++problems;
            Grader grader(m);
            for (int k = 0; k < 10; ++k) {
                Submission s;
                for (const auto& b : m.blocks()) {
                    if (rng() % 4 != 0) s.placed.push_back({b.tag, rng() % 5 == 0 ? int(rng() % 3) : b.indent});
                }
                std::shuffle(s.placed.begin(), s.placed.end(), rng);
                std::size_t best = SIZE_MAX;
                for (const auto& sol : solutions) best = std::min(best, oracle::levenshtein(s.placed, sol, true));
                if (grader.grade(s).edit_distance != best) o.fail("distance mismatch on problem " + std::to_string(p));
            }
        }
        auto sum = parse_problem_multigraph(oracle::kSumProblem);
        Submission six;
        for (const auto& b : sum.blocks()) six.placed.push_back({b.tag, b.indent});
        double score = grade(sum, six).score;
        if (score != 0.8) o.fail("all-six score " + std::to_string(score));
        if (o.pass) o.detail = std::to_string(problems) + " problems";
        return o;
    });

    criterion("shipped problems cover Python, Bash/Git and proofs; all valid with d >= 2", [] {
        Outcome o;
        std::set<std::string> domains;
        auto files = list_problem_files(oracle::kProblemsDir);
        for (const auto& f : files) {
            auto check = check_problem_text(read_text_file(f.path));
            if (!check.ok()) {
                o.fail(f.id + " does not validate");
                continue;
            }
            for (const auto& d : check.diagnostics) o.fail(f.id + " has warning: " + d.message);
            auto s = stats(*check.graph);
            if (s.d < 2) o.fail(f.id + " has d=" + std::to_string(s.d));
            domains.insert(f.id.substr(0, f.id.find('_')));
        }
        for (const char* domain : {"python", "bash", "proof"}) {
            if (!domains.count(domain)) o.fail(std::string("no ") + domain + " problem");
        }
        if (o.pass) o.detail = std::to_string(files.size()) + " problems";
        return o;
    });

    criterion("stats and canonical output are byte-identical across runs; tie-break order does not matter", [&] {
        Outcome o;
        std::vector<std::string> args{"blockgrader", "stats", oracle::kProblemsDir};
        auto first = capture_cli(args);
        if (first.empty() || first != capture_cli(args)) o.fail("stats output differs");
        for (const auto& f : list_problem_files(oracle::kProblemsDir)) {
            if (to_canonical(load_problem_file(f).graph) != to_canonical(load_problem_file(f).graph)) {
                o.fail("canonical output differs for " + f.id);
            }
        }
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (to_canonical(corpus[i]) != to_canonical(from_canonical(to_canonical(corpus[i])))) {
                o.fail("canonical round trip differs on problem " + std::to_string(i));
            }
            if (keys(collapse(corpus[i], {TieBreak::Forward})) != keys(collapse(corpus[i], {TieBreak::Reverse}))) {
                o.fail("tie-break changes the result on problem " + std::to_string(i));
            }
        }
        return o;
    });

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
