#include <doctest.h>

#include <random>

#include "blockgrader/parser.hpp"
#include "support/oracles.hpp"

using namespace blockgrader;

namespace {

std::vector<std::vector<std::string>> as_lists(const std::vector<DependencyGroup>& groups) {
    std::vector<std::vector<std::string>> out;
    for (const auto& g : groups) out.push_back(g.members);
    return out;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidMultigraph;
}

}  // namespace

TEST_CASE("parse_depends: pipe separates alternatives, comma joins prerequisites") {
    CHECK(as_lists(parse_depends("C,D|E")) == std::vector<std::vector<std::string>>{{"C", "D"}, {"E"}});
    CHECK(as_lists(parse_depends("A|B")) == std::vector<std::vector<std::string>>{{"A"}, {"B"}});
    CHECK(parse_depends("").empty());
    CHECK(parse_depends("   ").empty());
    CHECK(as_lists(parse_depends("B")) == std::vector<std::vector<std::string>>{{"B"}});
}

TEST_CASE("parse_depends: whitespace is trimmed (checked against the character tokenizer)") {
    const std::string expr = " C , D | E ";
    auto reference = oracle::tokenize_depends(expr);
    REQUIRE(reference == std::vector<std::vector<std::string>>{{"C", "D"}, {"E"}});
    CHECK(as_lists(parse_depends(expr)) == reference);
}

TEST_CASE("parse_depends: an empty segment is an explicit no-prerequisite alternative") {
    CHECK(as_lists(parse_depends("A|")) == std::vector<std::vector<std::string>>{{"A"}, {}});
    CHECK(as_lists(parse_depends("|A")) == std::vector<std::vector<std::string>>{{}, {"A"}});
    CHECK(as_lists(parse_depends(" | ")) == std::vector<std::vector<std::string>>{{}, {}});
}

TEST_CASE("parse_depends: errors") {
    CHECK(code_of([] { parse_depends("A,,B"); }) == ErrorCode::EmptyTag);
    CHECK(code_of([] { parse_depends("A, ,B"); }) == ErrorCode::EmptyTag);
    CHECK(code_of([] { parse_depends("A,"); }) == ErrorCode::EmptyTag);
    CHECK(code_of([] { parse_depends("A,B,A|C"); }) == ErrorCode::DuplicateTagInGroup);
    CHECK(code_of([] { parse_depends("A B"); }) == ErrorCode::MalformedElement);
    // the same tag in two different alternatives is fine
    CHECK(parse_depends("A|A,B").size() == 2);
}

TEST_CASE("parse_depends: group count is pipes + 1 and agrees with the reference tokenizer") {
    std::mt19937_64 rng(7);
    const std::string alphabet = "ABCxyz_9";
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t groups = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        std::string expr;
        for (std::size_t g = 0; g < groups; ++g) {
            if (g) expr += std::string(rng() % 2, ' ') + "|" + std::string(rng() % 2, ' ');
            std::size_t tags = rng() % 3;
            for (std::size_t t = 0; t < tags; ++t) {
                if (t) expr += std::string(rng() % 2, ' ') + "," + std::string(rng() % 2, ' ');
                // index-suffixed so tags within a group are distinct
                expr += alphabet[rng() % alphabet.size()] + std::to_string(t);
            }
        }
        if (expr.find_first_not_of(' ') == std::string::npos) continue;
        auto parsed = parse_depends(expr);
        CHECK(parsed.size() == static_cast<std::size_t>(std::count(expr.begin(), expr.end(), '|')) + 1);
        CHECK(as_lists(parsed) == oracle::tokenize_depends(expr));
    }
}

TEST_CASE("parse_problem: the sum problem") {
    auto doc = parse_problem(oracle::kSumProblem);
    REQUIRE(doc.elements.size() == 6);
    std::vector<std::string> tags;
    std::vector<int> indents;
    for (const auto& e : doc.elements) {
        tags.push_back(e.tag);
        indents.push_back(e.indent);
    }
    CHECK(tags == std::vector<std::string>{"A", "B", "C", "D", "E", "F"});
    CHECK(indents == std::vector<int>{0, 1, 1, 1, 1, 1});
    CHECK(doc.elements[5].is_final);
    CHECK_FALSE(doc.elements[4].is_final);
    CHECK(doc.elements[5].depends_expr == "C,D|E");
    CHECK(doc.elements[0].text == "    def my_sum(first, second): ");
    CHECK(doc.elements[0].pos == SourcePos{1, 1});
    CHECK(doc.elements[1].pos == SourcePos{3, 1});
    CHECK(doc.warnings.empty());
}

TEST_CASE("parse_problem: defaults, distractors, and surrounding content") {
    auto doc = parse_problem(R"(<pl-order-blocks answers-name="x">
  <p>Put these in order</p>
  <!-- <pl-answer tag="commented">ignored</pl-answer> -->
  <pl-answer tag="X">
    first

  </pl-answer>
  <pl-answer tag="Y" correct="false">nope</pl-answer>
  <pl-answer tag="W" distractor="true">also nope</pl-answer>
</pl-order-blocks>)");
    REQUIRE(doc.elements.size() == 3);
    CHECK(doc.elements[0].tag == "X");
    CHECK(doc.elements[0].indent == 0);
    CHECK_FALSE(doc.elements[0].is_final);
    CHECK_FALSE(doc.elements[0].is_distractor);
    CHECK(doc.elements[0].text == "    first");
    CHECK(doc.elements[1].is_distractor);
    CHECK(doc.elements[2].is_distractor);
}

TEST_CASE("parse_problem: inner text keeps internal whitespace") {
    auto doc = parse_problem("<pl-answer tag=\"A\">\n\n  if x:\n\n      y()\n   \n</pl-answer>");
    CHECK(doc.elements[0].text == "  if x:\n\n      y()");
}

TEST_CASE("parse_problem: unknown attributes produce a warning, not an error") {
    auto doc = parse_problem(R"(<pl-answer tag="A" final="true" ranking="2">x</pl-answer>)");
    REQUIRE(doc.warnings.size() == 1);
    CHECK(doc.warnings[0].severity == Severity::Warning);
    CHECK(doc.warnings[0].message.find("ranking") != std::string::npos);
}

TEST_CASE("parse_problem: errors") {
    CHECK(code_of([] { parse_problem(""); }) == ErrorCode::NoBlocks);
    CHECK(code_of([] { parse_problem("<p>no answers here</p>"); }) == ErrorCode::NoBlocks);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag="A">x</pl-answer><pl-answer tag="A">y</pl-answer>)"); }) ==
          ErrorCode::DuplicateTag);
    CHECK(code_of([] { parse_problem(R"(<pl-answer depends="">x</pl-answer>)"); }) == ErrorCode::MalformedElement);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag="A">x)"); }) == ErrorCode::MalformedElement);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag="A">x<pl-answer tag="B">y</pl-answer>)"); }) ==
          ErrorCode::MalformedElement);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag='A'>x</pl-answer>)"); }) == ErrorCode::MalformedElement);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag="A" indent="-1">x</pl-answer>)"); }) ==
          ErrorCode::MalformedElement);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag="A" indent="two">x</pl-answer>)"); }) ==
          ErrorCode::MalformedElement);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag="A" final="yes">x</pl-answer>)"); }) ==
          ErrorCode::MalformedElement);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag="A" tag="B">x</pl-answer>)"); }) ==
          ErrorCode::MalformedElement);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag="A|B">x</pl-answer>)"); }) == ErrorCode::MalformedElement);
    CHECK(code_of([] { parse_problem(R"(<pl-answer tag="A" final>x</pl-answer>)"); }) ==
          ErrorCode::MalformedElement);
}

TEST_CASE("parse_problem: error positions point at the element") {
    try {
        parse_problem("<p>\n</p>\n   <pl-answer depends=\"\">x</pl-answer>");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.pos() == SourcePos{3, 4});
    }
}

TEST_CASE("to_block_specs: depends errors carry the element position") {
    auto doc = parse_problem("<pl-answer tag=\"A\">a</pl-answer>\n<pl-answer tag=\"B\" depends=\"A,,A\">b</pl-answer>");
    try {
        to_block_specs(doc.elements);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyTag);
        CHECK(e.pos().line == 2);
        CHECK(e.detail().find("block \"B\"") != std::string::npos);
    }
}

TEST_CASE("parsing is deterministic") {
    CHECK(parse_problem_multigraph(oracle::kSumProblem) == parse_problem_multigraph(oracle::kSumProblem));
}
