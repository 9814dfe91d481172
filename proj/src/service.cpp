#include "blockgrader/service.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <limits>
#include <sstream>

#include <httplib.h>

#include "blockgrader/formats.hpp"
#include "blockgrader/problem_store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace blockgrader {

namespace {

// Unbiased value in [0, range) by rejection; independent of the standard
// library's distribution implementations.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
    const std::uint64_t threshold = (std::numeric_limits<std::uint64_t>::max() - range + 1) % range;
    while (true) {
        std::uint64_t x = rng();
        if (x >= threshold) return x % range;
    }
}

ServiceResponse error_response(int status, std::string_view kind, const std::string& message) {
    return {status, {{"error", kind}, {"message", message}}};
}

ServiceResponse from_error(int status, const Error& e) {
    json body = {{"error", error_name(e.code())}, {"message", e.detail()}};
    if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
        json diagnostics = json::array();
        for (const auto& d : v->diagnostics()) diagnostics.push_back(format_diagnostic(d));
        body["diagnostics"] = std::move(diagnostics);
    }
    return {status, std::move(body)};
}

}  // namespace

BankView make_bank_view(const std::string& problem_id, const ProblemMultigraph& m, std::uint64_t seed) {
    BankView view;
    view.problem_id = problem_id;
    view.shuffle_seed = seed;
    int max_indent = 0;
    for (const auto& b : m.blocks()) max_indent = std::max(max_indent, b.indent);
    for (const auto& b : m.blocks()) view.blocks.push_back({b.tag, b.text, max_indent});

    std::mt19937_64 rng(seed);
    for (std::size_t i = view.blocks.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(view.blocks[i - 1], view.blocks[j]);
    }
    return view;
}

json bank_view_to_json(const BankView& view) {
    json blocks = json::array();
    for (const auto& b : view.blocks) {
        blocks.push_back({{"tag", b.tag}, {"text", b.text}, {"max_indent_hint", b.max_indent_hint}});
    }
    return {{"problem_id", view.problem_id}, {"blocks", std::move(blocks)}, {"shuffle_seed", view.shuffle_seed}};
}

json attempt_to_json(const AttemptRecord& r) {
    return {{"attempt_id", r.attempt_id},
            {"problem_id", r.problem_id},
            {"timestamp", r.timestamp},
            {"submission", submission_to_json({std::nullopt, r.submission})},
            {"score", r.score},
            {"exact", r.exact},
            {"first_error_index", r.first_error_index ? json(*r.first_error_index) : json(nullptr)}};
}

AttemptRecord attempt_from_json(const json& j) {
    AttemptRecord r;
    r.attempt_id = j.at("attempt_id").get<std::string>();
    r.problem_id = j.at("problem_id").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::int64_t>();
    r.submission = submission_from_json(j.at("submission")).submission;
    r.score = j.at("score").get<double>();
    r.exact = j.at("exact").get<bool>();
    if (!j.at("first_error_index").is_null()) r.first_error_index = j.at("first_error_index").get<std::size_t>();
    return r;
}

AttemptLog::AttemptLog(fs::path data_dir) : data_dir_(std::move(data_dir)) {}

fs::path AttemptLog::file_for(const std::string& problem_id) const {
    return data_dir_ / (problem_id + ".attempts.jsonl");
}

AttemptRecord AttemptLog::append(AttemptRecord record) {
    std::lock_guard lock(write_mutex_);
    auto [it, inserted] = next_sequence_.try_emplace(record.problem_id, 0);
    if (inserted) it->second = read(record.problem_id).size() + 1;
    record.attempt_id = record.problem_id + "-" + std::to_string(it->second);

    std::error_code ec;
    fs::create_directories(data_dir_, ec);
    std::ofstream out(file_for(record.problem_id), std::ios::app | std::ios::binary);
    out << attempt_to_json(record).dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "cannot append to " + file_for(record.problem_id).string());
    ++it->second;
    return record;
}

std::vector<AttemptRecord> AttemptLog::read(const std::string& problem_id) const {
    std::vector<AttemptRecord> out;
    const fs::path path = file_for(problem_id);
    std::error_code ec;
    if (!fs::exists(path, ec)) return out;

    std::string text = read_text_file(path);
    std::size_t start = 0;
    std::size_t line_no = 0;
    for (std::size_t nl = text.find('\n'); nl != std::string::npos; nl = text.find('\n', start)) {
        ++line_no;
        std::string_view line(text.data() + start, nl - start);
        start = nl + 1;
        if (line.empty()) continue;
        try {
            out.push_back(attempt_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw Error(ErrorCode::Io,
                        path.string() + ":" + std::to_string(line_no) + ": corrupt attempt record: " + e.what());
        }
    }
    return out;
}

struct GradingService::Compiled {
    Compiled(LoadedProblem problem, fs::file_time_type mtime, const GradingPolicy& policy)
        : id(std::move(problem.id)),
          title(std::move(problem.title)),
          modified(mtime),
          graph(std::move(problem.graph)),
          grader(graph, policy) {}

    std::string id;
    std::string title;
    fs::file_time_type modified;
    ProblemMultigraph graph;
    Grader grader;  // refers to `graph`; Compiled is never moved
};

GradingService::GradingService(ServiceConfig config)
    : config_(std::move(config)), log_(config_.data_dir), rng_(config_.seed.value_or(std::random_device{}())) {
    check_policy(config_.policy);
}

GradingService::~GradingService() = default;

std::shared_ptr<const GradingService::Compiled> GradingService::compiled(const std::string& id) const {
    for (const auto& file : list_problem_files(config_.problems_dir)) {
        if (file.id != id) continue;
        std::error_code ec;
        auto mtime = fs::last_write_time(file.path, ec);
        {
            std::lock_guard lock(cache_mutex_);
            auto it = cache_.find(id);
            if (!ec && it != cache_.end() && it->second->modified == mtime) return it->second;
        }
        auto fresh = std::make_shared<const Compiled>(load_problem_file(file), mtime, config_.policy);
        std::lock_guard lock(cache_mutex_);
        cache_[id] = fresh;
        return fresh;
    }
    return nullptr;
}

ServiceResponse GradingService::list_problems() const {
    try {
        json out = json::array();
        std::string previous;
        for (const auto& file : list_problem_files(config_.problems_dir)) {
            if (!out.empty() && file.id == previous) continue;  // same stem: first file wins
            previous = file.id;
            std::string text = read_text_file(file.path);
            out.push_back({{"problem_id", file.id}, {"title", extract_title(text, file.id)}});
        }
        return {200, std::move(out)};
    } catch (const Error& e) {
        return from_error(500, e);
    }
}

ServiceResponse GradingService::bank_view(const std::string& id, const std::optional<std::string>& seed_text) {
    std::uint64_t seed = 0;
    if (seed_text) {
        auto [ptr, ec] = std::from_chars(seed_text->data(), seed_text->data() + seed_text->size(), seed);
        if (seed_text->empty() || ec != std::errc() || ptr != seed_text->data() + seed_text->size()) {
            return error_response(400, "BadRequest", "seed must be a non-negative integer");
        }
    } else {
        std::lock_guard lock(rng_mutex_);
        seed = rng_();
    }
    try {
        auto problem = compiled(id);
        if (!problem) return error_response(404, "NotFound", "no problem \"" + id + "\"");
        return {200, bank_view_to_json(make_bank_view(id, problem->graph, seed))};
    } catch (const Error& e) {
        return from_error(500, e);
    }
}

ServiceResponse GradingService::grade(const std::string& id, const std::string& body) {
    std::shared_ptr<const Compiled> problem;
    try {
        problem = compiled(id);
    } catch (const Error& e) {
        return from_error(500, e);
    }
    if (!problem) return error_response(404, "NotFound", "no problem \"" + id + "\"");

    SubmissionDocument doc;
    GradeReport report;
    try {
        doc = parse_submission(body);
        if (doc.problem_id && *doc.problem_id != id) {
            return error_response(422, "SchemaError", "problem_id \"" + *doc.problem_id + "\" does not match URL");
        }
        report = problem->grader.grade(doc.submission);
    } catch (const Error& e) {
        return from_error(422, e);
    }

    AttemptRecord record;
    record.problem_id = id;
    record.timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
    record.submission = doc.submission;
    record.score = report.score;
    record.exact = report.exact;
    record.first_error_index = report.first_error_index;
    try {
        log_.append(std::move(record));
    } catch (const Error& e) {
        return from_error(500, e);
    }
    return {200, report_to_json(report)};
}

ServiceResponse GradingService::attempts(const std::string& id) const {
    try {
        auto files = list_problem_files(config_.problems_dir);
        bool known = std::any_of(files.begin(), files.end(), [&](const ProblemFile& f) { return f.id == id; });
        if (!known) return error_response(404, "NotFound", "no problem \"" + id + "\"");
        json out = json::array();
        for (const auto& r : log_.read(id)) out.push_back(attempt_to_json(r));
        return {200, std::move(out)};
    } catch (const Error& e) {
        return from_error(500, e);
    }
}

void GradingService::mount(httplib::Server& server) {
    auto send = [](httplib::Response& res, const ServiceResponse& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };

    server.Get("/api/problems", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, list_problems());
    });
    server.Get(R"(/api/problems/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> seed;
        if (req.has_param("seed")) seed = req.get_param_value("seed");
        send(res, bank_view(req.matches[1], seed));
    });
    server.Post(R"(/api/problems/([^/]+)/grade)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, grade(req.matches[1], req.body));
    });
    server.Get(R"(/api/problems/([^/]+)/attempts)", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, attempts(req.matches[1]));
    });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
        const auto& allow = config_.cors_allowlist;
        if (allow.empty()) {
            res.set_header("Access-Control-Allow-Origin", "*");
        } else {
            auto origin = req.get_header_value("Origin");
            if (std::find(allow.begin(), allow.end(), origin) == allow.end()) return;
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Vary", "Origin");
        }
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    server.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            if (ep) std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        send(res, error_response(500, "InternalError", message));
    });
}

}  // namespace blockgrader
