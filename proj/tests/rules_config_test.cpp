#include "doctest.h"

#include <random>
#include <sstream>

#include "needsense/errors.hpp"
#include "needsense/rules_config.hpp"
#include "rules_gen.hpp"

using namespace needsense;

namespace {

int line_count(const std::string& text) {
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

} // namespace

TEST_SUITE("rules_config") {

TEST_CASE("parses a statistical rule") {
    RuleSet rules = parse_rules(
        "statistical font signal viewing_distance sides both k 2.0 min_samples 30 "
        "recommend larger_text\n");
    REQUIRE(rules.statistical.size() == 1);
    const auto& r = rules.statistical[0];
    CHECK(r.name == "font");
    CHECK(r.signal == StatSignal::viewing_distance);
    CHECK(r.sides == Sides::both);
    CHECK(r.k_sigma == 2.0);
    CHECK(r.min_samples == 30);
    CHECK(r.recommend == "larger_text");
}

TEST_CASE("parses a group rule") {
    RuleSet rules = parse_rules("group bold_text => larger_text");
    REQUIRE(rules.groups.size() == 1);
    CHECK(rules.groups[0] == GroupRule{"bold_text", "larger_text"});
}

TEST_CASE("rejects a non-increasing ladder") {
    CHECK_THROWS_WITH_AS(
        parse_rules("nearmiss side_click button side ladder 0.5 0.35 0.25 min_count 1 "
                    "recommend side_button_click_speed"),
        doctest::Contains("ladder must be strictly increasing"), ParseError);
}

TEST_CASE("parses a three-step sequence with per-step within") {
    RuleSet rules = parse_rules(
        "sequence magnifier: photo_captured -> photo_opened within 60 -> pinch_zoom within 60 "
        "window 120 recommend magnifier");
    REQUIRE(rules.sequences.size() == 1);
    const auto& r = rules.sequences[0];
    CHECK(r.steps == std::vector<UIActionKind>{UIActionKind::photo_captured,
                                               UIActionKind::photo_opened,
                                               UIActionKind::pinch_zoom});
    CHECK(r.per_step_within == 60.0);
    CHECK(r.window == 120.0);
    CHECK(r.recommend == "magnifier");
}

TEST_CASE("punctuation self-delimits without surrounding whitespace") {
    RuleSet glued = parse_rules("group bold_text=>larger_text");
    REQUIRE(glued.groups.size() == 1);
    CHECK(glued.groups[0] == GroupRule{"bold_text", "larger_text"});

    RuleSet seq = parse_rules(
        "sequence magnifier:photo_captured->photo_opened within 60->pinch_zoom "
        "window 120 recommend magnifier");
    REQUIRE(seq.sequences.size() == 1);
    CHECK(seq.sequences[0].steps.size() == 3);
}

TEST_CASE("optional near-miss clauses default sensibly") {
    RuleSet rules =
        parse_rules("nearmiss clicks button side ladder 0.25 0.35 0.5 recommend side_button");
    REQUIRE(rules.near_miss.size() == 1);
    CHECK(rules.near_miss[0].current_level == ClickLevel::default_);
    CHECK(rules.near_miss[0].min_count == 1);
}

TEST_CASE("named semantic diagnostics") {
    CHECK_THROWS_WITH_AS(parse_rules("group zoom => zoom"), doctest::Contains("self-implication"),
                         ParseError);
    CHECK_THROWS_WITH_AS(
        parse_rules("statistical a signal heartbeat sides both k 2 min_samples 30 recommend zoom"),
        doctest::Contains("unknown signal"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_rules("statistical a signal viewing_distance sides both k 2 min_samples 30 "
                    "recommend zoom\n"
                    "statistical a signal viewing_distance sides both k 2 min_samples 30 "
                    "recommend zoom"),
        doctest::Contains("duplicate rule name"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_rules("sequence s: app_open within 5 -> pinch_zoom window 60 recommend zoom"),
        doctest::Contains("first step"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_rules("sequence s: app_open -> pinch_zoom within 5 -> other within 9 window 60 "
                    "recommend zoom"),
        doctest::Contains("conflicting 'within'"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_rules("sequence s: app_open -> pinch_zoom within 90 window 60 recommend zoom"),
        doctest::Contains("exceeds window"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_rules("statistical a signal viewing_distance sides both k 2 min_samples 3.5 "
                    "recommend zoom"),
        doctest::Contains("integer"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_rules("statistical a signal viewing_distance sides both k -1 min_samples 30 "
                    "recommend zoom"),
        doctest::Contains("k must be positive"), ParseError);
}

TEST_CASE("every diagnostic carries a line and column") {
    const std::vector<std::string> bad = {
        "statistical",                       // truncated
        "statistical a signal",              // truncated after keyword
        "\n\n  statistical a nope",          // wrong clause keyword on line 3
        "sequence s app_open window 5 recommend zoom", // missing colon
        "group bold_text -> larger_text",    // wrong arrow
        "@",                                 // lexical error
        "statistical a signal viewing_distance sides both k 2e min_samples 30 recommend zoom",
    };
    for (const auto& text : bad) {
        try {
            parse_rules(text);
            FAIL_CHECK("expected ParseError for: ", text);
        } catch (const ParseError& e) {
            CHECK_MESSAGE(e.line() >= 1, text, " -> ", e.what());
            CHECK_MESSAGE(e.column() >= 1, text, " -> ", e.what());
        }
    }

    try {
        parse_rules("# comment\nstatistical a nope");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 15);
    }
}

TEST_CASE("print is canonical and idempotent") {
    const std::string source =
        "group closed_captioning => type_to_siri\n"
        "statistical z signal audio_volume sides above k 1.5 min_samples 10 recommend zoom\n"
        "group bold_text => larger_text\n"
        "statistical a signal viewing_distance sides both k 2 min_samples 30 recommend zoom\n";
    RuleSet rules = parse_rules(source);
    std::string printed = print_rules(rules);

    // Sorted by kind then name: statistical a, statistical z, then groups.
    std::istringstream lines(printed);
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("statistical a ", 0) == 0);
    std::getline(lines, line);
    CHECK(line.rfind("statistical z ", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "group bold_text => larger_text");

    CHECK(parse_rules(printed) == rules);
    CHECK(print_rules(parse_rules(printed)) == printed);
}

TEST_CASE("print of an empty rule set is empty") {
    CHECK(print_rules(RuleSet{}) == "");
}

TEST_CASE("the default rule set prints seven lines") {
    std::string printed = print_rules(default_rules());
    CHECK(line_count(printed) == 7);
    CHECK(parse_rules(printed) == default_rules());
}

TEST_CASE("default rules cover the four recommenders plus groups") {
    RuleSet rules = default_rules();
    REQUIRE(rules.statistical.size() == 2);
    bool found_subtitles = false;
    for (const auto& r : rules.statistical) {
        if (r.recommend == "subtitles_captions") {
            found_subtitles = true;
            CHECK(r.sides == Sides::above);
            CHECK(r.k_sigma == 2.0);
            CHECK(r.signal == StatSignal::audio_volume);
        }
    }
    CHECK(found_subtitles);
    REQUIRE(rules.near_miss.size() == 1);
    CHECK(rules.near_miss[0].t_default == 0.25);
    CHECK(rules.near_miss[0].t_slow == 0.35);
    CHECK(rules.near_miss[0].t_slowest == 0.50);
    REQUIRE(rules.sequences.size() == 1);
    CHECK(rules.sequences[0].recommend == "magnifier");
    CHECK(rules.groups.size() == 3);
}

TEST_CASE("every default rule target exists in the default catalog") {
    CHECK_NOTHROW(validate_rules_against_catalog(default_rules(), default_catalog()));
    CHECK_NOTHROW(validate_ruleset(default_rules()));
}

TEST_CASE("round-trips on random rule files") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 50; ++i) {
        std::string text = testutil::random_rules_text(rng);
        RuleSet rules = parse_rules(text);
        std::string printed = print_rules(rules);
        CHECK(parse_rules(printed) == rules);
        CHECK(print_rules(parse_rules(printed)) == printed);
    }
}

TEST_CASE("random bytes never crash the parser") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1000; ++i) {
        std::size_t len = rng() % 120;
        std::string junk;
        for (std::size_t k = 0; k < len; ++k) junk.push_back(static_cast<char>(rng() & 0xff));
        try {
            (void)parse_rules(junk);
        } catch (const ParseError& e) {
            CHECK(e.line() >= 1);
            CHECK(e.column() >= 1);
        }
        // anything else escaping is a test failure via doctest
    }
}

} // TEST_SUITE
