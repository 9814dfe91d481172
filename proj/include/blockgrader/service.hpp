#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockgrader/grader.hpp"
#include "blockgrader/model.hpp"

namespace httplib {
class Server;
}

namespace blockgrader {

/// Shuffled block bank as sent to students. Carries no dependency, final,
/// distractor, or declared-indent information.
struct BankBlock {
    std::string tag;
    std::string text;
    int max_indent_hint = 0;  // same for every block: the problem's deepest indent
};

struct BankView {
    std::string problem_id;
    std::vector<BankBlock> blocks;
    std::uint64_t shuffle_seed = 0;
};

/// Fisher-Yates over authored order driven by mt19937_64, so a seed gives the
/// same permutation on every platform.
BankView make_bank_view(const std::string& problem_id, const ProblemMultigraph& m, std::uint64_t seed);
nlohmann::json bank_view_to_json(const BankView& view);

struct AttemptRecord {
    std::string attempt_id;
    std::string problem_id;
    std::int64_t timestamp = 0;  // UTC seconds
    Submission submission;
    double score = 0.0;
    bool exact = false;
    std::optional<std::size_t> first_error_index;
};

nlohmann::json attempt_to_json(const AttemptRecord& record);
AttemptRecord attempt_from_json(const nlohmann::json& j);

/// Append-only, one JSON line per attempt, one file per problem under
/// `data_dir`. Appends are serialized through one mutex; readers parse only
/// complete lines, so they always see a consistent prefix.
class AttemptLog {
public:
    explicit AttemptLog(std::filesystem::path data_dir);

    /// Assigns attempt_id ("<problem_id>-<n>") and persists the record.
    AttemptRecord append(AttemptRecord record);
    std::vector<AttemptRecord> read(const std::string& problem_id) const;

private:
    std::filesystem::path file_for(const std::string& problem_id) const;

    std::filesystem::path data_dir_;
    std::mutex write_mutex_;
    std::map<std::string, std::size_t> next_sequence_;
};

struct ServiceConfig {
    std::filesystem::path problems_dir;
    std::filesystem::path data_dir = "data";
    GradingPolicy policy;
    /// Empty allows any origin.
    std::vector<std::string> cors_allowlist;
    /// Seeds the generator used when a bank view is requested without ?seed=.
    std::optional<std::uint64_t> seed;
};

struct ServiceResponse {
    int status = 200;
    nlohmann::json body;
};

/// HTTP facade over the problems directory. Handlers are exposed as plain
/// member functions so they can be exercised without a socket.
class GradingService {
public:
    explicit GradingService(ServiceConfig config);
    ~GradingService();

    ServiceResponse list_problems() const;
    ServiceResponse bank_view(const std::string& id, const std::optional<std::string>& seed);
    ServiceResponse grade(const std::string& id, const std::string& body);
    ServiceResponse attempts(const std::string& id) const;

    /// Registers every route plus CORS handling on `server`.
    void mount(httplib::Server& server);

    const ServiceConfig& config() const noexcept { return config_; }

private:
    struct Compiled;
    std::shared_ptr<const Compiled> compiled(const std::string& id) const;

    ServiceConfig config_;
    AttemptLog log_;
    std::mutex rng_mutex_;
    std::mt19937_64 rng_;
    mutable std::mutex cache_mutex_;
    mutable std::map<std::string, std::shared_ptr<const Compiled>> cache_;
};

}  // namespace blockgrader
