#include "doctest.h"

#include <random>

#include "needsense/errors.hpp"
#include "needsense/signals.hpp"
#include "test_util.hpp"

using namespace needsense;

TEST_SUITE("signals") {

TEST_CASE("parses a viewing-distance record") {
    Trace trace = parse_trace(R"({"t":0,"kind":"viewing_distance","m":0.36})" "\n");
    REQUIRE(trace.events.size() == 1);
    CHECK(trace.events[0].t == 0.0);
    REQUIRE(trace.events[0].kind() == SignalKind::viewing_distance);
    CHECK(std::get<ViewingDistance>(trace.events[0].payload).meters == 0.36);
}

TEST_CASE("empty document yields empty trace") {
    CHECK(parse_trace("").events.empty());
    CHECK(parse_trace("\n\n").events.empty());
}

TEST_CASE("non-monotone timestamps are rejected with the line number") {
    const std::string doc =
        R"({"t":5,"kind":"button","button":"side"})" "\n"
        R"({"t":3,"kind":"button","button":"side"})" "\n";
    try {
        parse_trace(doc);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("non-monotone timestamp") != std::string::npos);
    }
}

TEST_CASE("equal timestamps are allowed and keep document order") {
    const std::string doc =
        R"({"t":1,"kind":"button","button":"side"})" "\n"
        R"({"t":1,"kind":"button","button":"home"})" "\n";
    Trace trace = parse_trace(doc);
    REQUIRE(trace.events.size() == 2);
    CHECK(std::get<ButtonPress>(trace.events[0].payload).button == Button::side);
    CHECK(std::get<ButtonPress>(trace.events[1].payload).button == Button::home);
}

TEST_CASE("field-range violations are rejected") {
    CHECK_THROWS_AS(parse_trace(R"({"t":0,"kind":"audio","playing":true,"volume":1.5,"output":"speaker"})"),
                    ParseError);
    CHECK_THROWS_AS(parse_trace(R"({"t":0,"kind":"viewing_distance","m":0})"), ParseError);
    CHECK_THROWS_AS(parse_trace(R"({"t":-1,"kind":"button","button":"side"})"), ParseError);
    CHECK_THROWS_AS(parse_trace(R"({"t":0,"kind":"teleport"})"), ParseError);
    CHECK_THROWS_AS(parse_trace("not json at all"), ParseError);
}

TEST_CASE("strict mode rejects unknown fields, lenient tolerates them") {
    const std::string doc = R"({"t":0,"kind":"viewing_distance","m":0.4,"extra":1})" "\n";
    CHECK_THROWS_WITH_AS(parse_trace(doc), doctest::Contains("unknown field"), ParseError);
    Trace trace = parse_trace(doc, {.lenient = true});
    CHECK(trace.events.size() == 1);
}

TEST_CASE("meta line round-trips and must come first") {
    const std::string doc =
        R"({"meta":{"user_id":"u1","session_id":"s1","initial_settings":["bold_text"]}})" "\n"
        R"({"t":0,"kind":"button","button":"side"})" "\n";
    Trace trace = parse_trace(doc);
    CHECK(trace.meta.user_id == "u1");
    CHECK(trace.meta.session_id == "s1");
    REQUIRE(trace.meta.initial_settings.size() == 1);
    CHECK(trace.meta.initial_settings[0] == "bold_text");
    CHECK(parse_trace(serialize_trace(trace)) == trace);

    const std::string late_meta =
        R"({"t":0,"kind":"button","button":"side"})" "\n"
        R"({"meta":{"user_id":"u1"}})" "\n";
    CHECK_THROWS_AS(parse_trace(late_meta), ParseError);

    const std::string doubled =
        R"({"meta":{"user_id":"u1"}})" "\n"
        R"({"meta":{"user_id":"u2"}})" "\n";
    CHECK_THROWS_AS(parse_trace(doubled), ParseError);

    // Leading blank lines do not disqualify the meta line.
    Trace padded = parse_trace("\n" + doc);
    CHECK(padded.meta.user_id == "u1");
}

TEST_CASE("filter_signal projects by kind and preserves timestamps") {
    Trace trace;
    trace.events.push_back({0.0, ViewingDistance{0.3}});
    trace.events.push_back({1.5, AudioSnapshot{true, 0.5, AudioOutput::speaker}});
    trace.events.push_back({2.0, ViewingDistance{0.4}});

    auto distances = filter_signal(trace, SignalKind::viewing_distance);
    REQUIRE(distances.size() == 2);
    CHECK(distances[0].t == 0.0);
    CHECK(distances[1].t == 2.0);
    CHECK(filter_signal(trace, SignalKind::button).empty());
}

TEST_CASE("filter lengths over all kinds sum to the trace length") {
    std::mt19937_64 rng(7);
    Trace trace = testutil::random_trace(rng, 200);
    std::size_t total = 0;
    for (auto kind : {SignalKind::viewing_distance, SignalKind::audio, SignalKind::button,
                      SignalKind::ui_action, SignalKind::setting})
        total += filter_signal(trace, kind).size();
    CHECK(total == trace.events.size());
}

TEST_CASE("serialization round-trips for random traces") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 25; ++i) {
        Trace trace = testutil::random_trace(rng, 50);
        if (i % 3 == 0) {
            trace.meta.session_id = "session_" + std::to_string(i);
            trace.meta.initial_settings = {"bold_text"};
        }
        std::string doc = serialize_trace(trace);
        Trace parsed = parse_trace(doc);
        CHECK(parsed == trace);
        CHECK(serialize_trace(parsed) == doc); // canonical form is a fixed point
    }
}

} // TEST_SUITE
