#include "blockgrader/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "blockgrader/formats.hpp"
#include "blockgrader/grader.hpp"
#include "blockgrader/graph.hpp"
#include "blockgrader/problem_store.hpp"
#include "blockgrader/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace blockgrader {

namespace {

json diagnostic_to_json(const Diagnostic& d) {
    json out = {{"severity", d.severity == Severity::Error ? "error" : "warning"},
                {"code", error_name(d.code)},
                {"message", d.message}};
    if (d.pos.known()) {
        out["line"] = d.pos.line;
        out["column"] = d.pos.column;
    }
    return out;
}

std::string format_with_path(const std::string& path, const Diagnostic& d) {
    return path + (d.pos.known() ? ":" : ": ") + format_diagnostic(d);
}

std::string placements_to_string(const std::vector<Placement>& placed) {
    std::string out;
    for (std::size_t i = 0; i < placed.size(); ++i) {
        if (i) out += ' ';
        out += placed[i].tag + ":" + std::to_string(placed[i].indent);
    }
    return out;
}

class Cli {
public:
    Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(const std::vector<std::string>& args);

private:
    // Loads and validates a problem file, reporting failures on err_. Returns
    // nullopt after printing when the problem is unusable.
    std::optional<ProblemMultigraph> load(const std::string& path) {
        std::string text;
        try {
            text = read_text_file(path);
        } catch (const Error& e) {
            err_ << e.what() << "\n";
            return std::nullopt;
        }
        auto check = check_problem_text(text);
        for (const auto& d : check.diagnostics) {
            if (d.severity == Severity::Error) err_ << format_with_path(path, d) << "\n";
        }
        return std::move(check.graph);
    }

    int validate_cmd();
    int collapse_cmd();
    int solutions_cmd();
    int grade_cmd();
    int stats_cmd();
    int serve_cmd();

    std::ostream& out_;
    std::ostream& err_;

    bool json_ = false;
    std::string problem_path_;
    std::string dot_dir_;
    std::size_t limit_ = kDefaultSolutionCap;
    std::string submission_path_;
    bool lenient_indent_ = false;
    std::string stats_dir_;

    std::string problems_dir_;
    std::string data_dir_ = "data";
    std::string host_ = "127.0.0.1";
    int port_ = 8080;
    std::optional<std::uint64_t> seed_;
    std::vector<std::string> cors_origins_;
};

int Cli::run(const std::vector<std::string>& args) {
    CLI::App app{"Validate, inspect, and grade block-ordering problems with optional blocks", "blockgrader"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    auto* validate = app.add_subcommand("validate", "Check that a problem parses and its dependencies are valid");
    validate->add_option("path", problem_path_, "Problem file")->required();
    validate->add_flag("--json", json_, "Machine-readable output");

    auto* collapse = app.add_subcommand("collapse", "List every dependency DAG of a problem");
    collapse->add_option("path", problem_path_, "Problem file")->required();
    collapse->add_option("--dot", dot_dir_, "Write multigraph.dot and dag_<i>.dot into this directory");
    collapse->add_flag("--json", json_, "Machine-readable output");

    auto* solutions = app.add_subcommand("solutions", "List every correct ordering");
    solutions->add_option("path", problem_path_, "Problem file")->required();
    solutions->add_option("--limit", limit_, "Fail when there are more solutions than this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    solutions->add_flag("--json", json_, "Machine-readable output");

    auto* grade = app.add_subcommand("grade", "Grade a submission; exit 0 only for an exact answer");
    grade->add_option("path", problem_path_, "Problem file")->required();
    grade->add_option("--submission", submission_path_, "Submission JSON file")->required();
    grade->add_flag("--lenient-indent", lenient_indent_, "Ignore indentation when comparing blocks");
    grade->add_flag("--json", json_, "Machine-readable output (the default for grade)");

    auto* stats = app.add_subcommand("stats", "Tabulate n, m, d and the DAG bound for every problem in a directory");
    stats->add_option("dir", stats_dir_, "Problems directory")->required();
    stats->add_flag("--json", json_, "Machine-readable output");

    auto* serve = app.add_subcommand("serve", "Run the grading HTTP service");
    serve->add_option("--port", port_, "Listen port")->envname("BLOCKGRADER_PORT")->capture_default_str();
    serve->add_option("--problems", problems_dir_, "Problems directory")->envname("BLOCKGRADER_PROBLEMS")->required();
    serve->add_option("--data", data_dir_, "Attempt log directory")->capture_default_str();
    serve->add_option("--host", host_, "Bind address")->capture_default_str();
    serve->add_option("--seed", seed_, "Seed for bank shuffles requested without ?seed=");
    serve->add_option("--cors-origin", cors_origins_, "Allowed CORS origin (repeatable; default any)");
    serve->add_flag("--lenient-indent", lenient_indent_, "Ignore indentation when grading");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out_, err_);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (validate->parsed()) return validate_cmd();
    if (collapse->parsed()) return collapse_cmd();
    if (solutions->parsed()) return solutions_cmd();
    if (grade->parsed()) return grade_cmd();
    if (stats->parsed()) return stats_cmd();
    return serve_cmd();
}

int Cli::validate_cmd() {
    std::string text;
    try {
        text = read_text_file(problem_path_);
    } catch (const Error& e) {
        err_ << e.what() << "\n";
        return kExitUsage;
    }
    auto check = check_problem_text(text);
    if (json_) {
        json diagnostics = json::array();
        for (const auto& d : check.diagnostics) diagnostics.push_back(diagnostic_to_json(d));
        out_ << json{{"path", problem_path_}, {"valid", check.ok()}, {"diagnostics", std::move(diagnostics)}}.dump(2)
             << "\n";
    } else {
        for (const auto& d : check.diagnostics) out_ << format_with_path(problem_path_, d) << "\n";
        if (check.ok()) {
            out_ << problem_path_ << ": OK (" << check.graph->size() << " blocks, final "
                 << check.graph->final_tag() << ")\n";
        }
    }
    return check.ok() ? kExitOk : kExitFailure;
}

int Cli::collapse_cmd() {
    auto problem = load(problem_path_);
    if (!problem) return kExitFailure;
    auto dags = collapse(*problem);

    if (!dot_dir_.empty()) {
        std::error_code ec;
        fs::create_directories(dot_dir_, ec);
        auto write = [&](const fs::path& path, const std::string& text) {
            std::ofstream file(path, std::ios::binary);
            file << text;
            if (!file) throw Error(ErrorCode::Io, "cannot write " + path.string());
        };
        try {
            write(fs::path(dot_dir_) / "multigraph.dot", export_dot(*problem));
            for (std::size_t i = 0; i < dags.size(); ++i) {
                write(fs::path(dot_dir_) / ("dag_" + std::to_string(i) + ".dot"),
                      export_dot(dags[i], "dag_" + std::to_string(i)));
            }
        } catch (const Error& e) {
            err_ << e.what() << "\n";
            return kExitUsage;
        }
    }

    if (json_) {
        json out = json::array();
        for (std::size_t i = 0; i < dags.size(); ++i) out.push_back(dag_to_json(dags[i], i));
        out_ << out.dump(2) << "\n";
        return kExitOk;
    }
    for (std::size_t i = 0; i < dags.size(); ++i) {
        out_ << "DAG " << i << ": nodes";
        for (const auto& tag : dags[i].nodes) out_ << ' ' << tag;
        out_ << "\n  edges:";
        if (dags[i].edges.empty()) out_ << " (none)";
        for (std::size_t k = 0; k < dags[i].edges.size(); ++k) {
            out_ << (k ? ", " : " ") << dags[i].edges[k].first << " -> " << dags[i].edges[k].second;
        }
        out_ << "\n";
    }
    return kExitOk;
}

int Cli::solutions_cmd() {
    auto problem = load(problem_path_);
    if (!problem) return kExitFailure;
    std::vector<std::vector<Placement>> all;
    try {
        all = enumerate_solutions(*problem, limit_);
    } catch (const CapExceededError& e) {
        err_ << e.what() << "\n";
        return kExitFailure;
    }
    if (json_) {
        json out = json::array();
        for (const auto& s : all) out.push_back(submission_to_json({std::nullopt, {s}})["placed"]);
        out_ << out.dump(2) << "\n";
    } else {
        for (const auto& s : all) out_ << placements_to_string(s) << "\n";
    }
    return kExitOk;
}

int Cli::grade_cmd() {
    std::string problem_text;
    std::string submission_text;
    try {
        problem_text = read_text_file(problem_path_);
        submission_text = read_text_file(submission_path_);
    } catch (const Error& e) {
        err_ << e.what() << "\n";
        return kExitUsage;
    }
    try {
        auto problem = load_problem_text(problem_text);
        auto doc = parse_submission(submission_text);
        GradingPolicy policy;
        policy.indent_strict = !lenient_indent_;
        auto report = grade(problem, doc.submission, policy);
        out_ << report_to_json(report).dump(2) << "\n";
        return report.exact ? kExitOk : kExitFailure;
    } catch (const Error& e) {
        err_ << e.what() << "\n";
        if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
            for (const auto& d : v->diagnostics()) err_ << format_with_path(problem_path_, d) << "\n";
        }
        return kExitUsage;
    }
}

int Cli::stats_cmd() {
    std::vector<ProblemFile> files;
    try {
        files = list_problem_files(stats_dir_);
    } catch (const Error& e) {
        err_ << e.what() << "\n";
        return kExitUsage;
    }

    struct Row {
        std::string file;
        std::optional<StatsReport> stats;
        std::string error;
    };
    std::vector<Row> rows;
    for (const auto& f : files) {
        Row row{f.path.filename().string(), std::nullopt, {}};
        try {
            row.stats = stats(load_problem_text(read_text_file(f.path)));
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    bool failed = std::any_of(rows.begin(), rows.end(), [](const Row& r) { return !r.stats; });

    if (json_) {
        json out = json::array();
        for (const auto& r : rows) {
            json entry = {{"file", r.file}};
            if (r.stats) {
                entry.update(stats_to_json(*r.stats));
            } else {
                entry["error"] = r.error;
            }
            out.push_back(std::move(entry));
        }
        out_ << out.dump(2) << "\n";
        return failed ? kExitFailure : kExitOk;
    }

    std::size_t width = 4;
    for (const auto& r : rows) width = std::max(width, r.file.size());
    out_ << std::left << std::setw(static_cast<int>(width)) << "file" << std::right << std::setw(6) << "n"
         << std::setw(6) << "m" << std::setw(6) << "d" << std::setw(8) << "bound" << "\n";
    for (const auto& r : rows) {
        out_ << std::left << std::setw(static_cast<int>(width)) << r.file << std::right;
        if (r.stats) {
            out_ << std::setw(6) << r.stats->n << std::setw(6) << r.stats->m << std::setw(6) << r.stats->d
                 << std::setw(8) << r.stats->bound << "\n";
        } else {
            out_ << "  ERROR " << r.error << "\n";
        }
    }
    return failed ? kExitFailure : kExitOk;
}

int Cli::serve_cmd() {
    ServiceConfig config;
    config.problems_dir = problems_dir_;
    config.data_dir = data_dir_;
    config.policy.indent_strict = !lenient_indent_;
    config.cors_allowlist = cors_origins_;
    config.seed = seed_;

    GradingService service(std::move(config));
    httplib::Server server;
    service.mount(server);
    err_ << "serving " << problems_dir_ << " on http://" << host_ << ":" << port_ << "\n";
    if (!server.listen(host_, port_)) {
        err_ << "cannot listen on " << host_ << ":" << port_ << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return Cli(out, err).run(args);
}

}  // namespace blockgrader
