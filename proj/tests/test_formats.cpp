#include <doctest.h>

#include <random>

#include "blockgrader/formats.hpp"
#include "blockgrader/parser.hpp"
#include "support/oracles.hpp"

using namespace blockgrader;

TEST_CASE("canonical: sum problem round-trips to an equal multigraph") {
    auto m = parse_problem_multigraph(oracle::kSumProblem);
    std::string text = to_canonical(m);
    CHECK(from_canonical(text) == m);
    CHECK(to_canonical(from_canonical(text)) == text);
    CHECK(text.find("\"version\": \"1\"") != std::string::npos);
}

TEST_CASE("canonical: output is byte-stable with sorted keys") {
    auto m = parse_problem_multigraph(oracle::kSumProblem);
    std::string text = to_canonical(m);
    CHECK(text == to_canonical(parse_problem_multigraph(oracle::kSumProblem)));
    // keys of a block appear alphabetically
    auto depends = text.find("\"depends\"");
    auto distractor = text.find("\"distractor\"");
    auto final_key = text.find("\"final\"");
    auto tag = text.find("\"tag\"");
    CHECK(depends < distractor);
    CHECK(distractor < final_key);
    CHECK(final_key < tag);
    CHECK(text.find("\"blocks\"") < text.find("\"version\""));
}

TEST_CASE("canonical: round-trip property over random problems") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        auto specs = oracle::random_problem(rng, {.distractor_chance = 0.3});
        auto m = build_multigraph(specs);
        CHECK(from_canonical(to_canonical(m)) == m);
    }
}

TEST_CASE("canonical: schema errors name the field") {
    auto error_text = [](const std::string& text) -> std::string {
        try {
            from_canonical(text);
        } catch (const Error& e) {
            return std::string(error_name(e.code())) + " " + e.detail();
        }
        return "no error";
    };
    CHECK(error_text(R"({"version":"1","blocks":[{"tag":"A","final":true,"colour":"red"}]})") ==
          "SchemaError blocks[0].colour: unknown field");
    CHECK(error_text(R"({"version":"1","blocks":[],"extra":1})") == "SchemaError extra: unknown field");
    CHECK(error_text(R"({"version":"2","blocks":[]})") == "SchemaError version: unsupported version");
    CHECK(error_text(R"({"blocks":[]})") == "SchemaError version: missing required field");
    CHECK(error_text(R"({"version":"1","blocks":[{"tag":"A","indent":"1"}]})") ==
          "SchemaError blocks[0].indent: expected integer");
    CHECK(error_text(R"({"version":"1","blocks":[{"tag":"A","depends":[["B", 3]]}]})") ==
          "SchemaError blocks[0].depends[0][1]: expected string");
    CHECK(error_text("not json").rfind("SchemaError invalid JSON", 0) == 0);
}

TEST_CASE("canonical: dependency on a missing tag is UnknownTagError") {
    try {
        from_canonical(R"({"version":"1","blocks":[{"tag":"A","final":true,"depends":[["Z"]]}]})");
        FAIL("expected error");
    } catch (const ValidationError& e) {
        CHECK(e.code() == ErrorCode::UnknownTag);
    }
}

TEST_CASE("load_problem_text detects the format") {
    auto m = parse_problem_multigraph(oracle::kSumProblem);
    CHECK(load_problem_text(oracle::kSumProblem) == m);
    CHECK(load_problem_text("\n  " + to_canonical(m)) == m);
}

TEST_CASE("submission documents") {
    auto doc = parse_submission(R"({"problem_id":"sum","placed":[{"tag":"A","indent":0},{"tag":"E"}]})");
    CHECK(doc.problem_id == "sum");
    REQUIRE(doc.submission.placed.size() == 2);
    CHECK(doc.submission.placed[1] == Placement{"E", 0});
    CHECK(parse_submission(R"({"placed":[]})").submission.placed.empty());

    auto code = [](const std::string& text) {
        try {
            parse_submission(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidMultigraph;
    };
    CHECK(code("") == ErrorCode::Schema);
    CHECK(code("{}") == ErrorCode::Schema);
    CHECK(code(R"({"placed":[{"indent":1}]})") == ErrorCode::Schema);
    CHECK(code(R"({"placed":[{"tag":"A","indent":-1}]})") == ErrorCode::Schema);
    CHECK(code(R"({"placed":[],"score":1})") == ErrorCode::Schema);

    auto back = submission_from_json(submission_to_json(doc));
    CHECK(back.problem_id == doc.problem_id);
    CHECK(back.submission.placed == doc.submission.placed);
}
