// Acceptance suite: one scenario per criterion, each timed against its
// budget. Prints a PASS/FAIL line per criterion and exits non-zero if any
// fail. Run directly or through ctest.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "needsense/baseline.hpp"
#include "needsense/detectors.hpp"
#include "needsense/errors.hpp"
#include "needsense/policy.hpp"
#include "needsense/rules_config.hpp"
#include "needsense/tracegen.hpp"
#include "nearmiss_oracle.hpp"
#include "rules_gen.hpp"
#include "test_util.hpp"

using namespace needsense;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

Trace constant_distance(double meters, int count) {
    Trace trace;
    for (int i = 0; i < count; ++i)
        trace.events.push_back({static_cast<double>(i), ViewingDistance{meters}});
    return trace;
}

Trace constant_volume(double volume, int count, bool playing) {
    Trace trace;
    for (int i = 0; i < count; ++i)
        trace.events.push_back(
            {static_cast<double>(i), AudioSnapshot{playing, volume, AudioOutput::speaker}});
    return trace;
}

const StatisticalRule& font_rule() {
    static const StatisticalRule rule{"font_size", StatSignal::viewing_distance, Sides::both, 2.0,
                                      30, "larger_text"};
    return rule;
}

const StatisticalRule& subtitles_rule() {
    static const StatisticalRule rule{"subtitles", StatSignal::audio_volume, Sides::above, 2.0, 30,
                                      "subtitles_captions"};
    return rule;
}

const NearMissRule& click_rule() {
    static const NearMissRule rule{"side_click", Button::side, 0.25, 0.35, 0.50,
                                   ClickLevel::default_, 1, "side_button_click_speed"};
    return rule;
}

const SequencePattern& magnifier_pattern() {
    static const SequencePattern pattern{
        "magnifier",
        {UIActionKind::photo_captured, UIActionKind::photo_opened, UIActionKind::pinch_zoom},
        60.0,
        120.0,
        "magnifier"};
    return pattern;
}

// --------------------------------------------------------------------------
// 1. Font-size trigger boundary

void criterion_font_size_boundary() {
    BaselineSet baselines;
    baselines.entries[StatSignal::viewing_distance] = Baseline{0.36, 0.049, 10};

    auto far = detect_statistical(constant_distance(0.50, 60), font_rule(), baselines);
    require(far.size() == 1, "0.50 m must fire (boundary 0.458 m)");
    auto near = detect_statistical(constant_distance(0.40, 60), font_rule(), baselines);
    require(near.empty(), "0.40 m must not fire (within [0.262, 0.458])");
}

// --------------------------------------------------------------------------
// 2. Subtitles trigger boundary

void criterion_subtitles_boundary() {
    BaselineSet baselines;
    baselines.entries[StatSignal::audio_volume] = Baseline{0.471, 0.163, 10};

    require(detect_statistical(constant_volume(0.85, 60, true), subtitles_rule(), baselines)
                    .size() == 1,
            "volume 0.85 while playing must fire (boundary 0.797)");
    require(detect_statistical(constant_volume(0.60, 60, true), subtitles_rule(), baselines)
                .empty(),
            "volume 0.60 must not fire");
    require(detect_statistical(constant_volume(0.85, 60, false), subtitles_rule(), baselines)
                .empty(),
            "volume 0.85 while not playing must not fire");
}

// --------------------------------------------------------------------------
// 3. Near-miss ladder

void criterion_near_miss_ladder() {
    require(detect_near_miss(testutil::press_trace({0.0, 0.20}), click_rule()).empty(),
            "gap 0.20 is a success, no firing");
    auto miss = detect_near_miss(testutil::press_trace({0.0, 0.40}), click_rule());
    require(miss.size() == 1 && miss[0].t == 0.40, "gap 0.40 is a near-miss firing at 0.40");
    require(detect_near_miss(testutil::press_trace({0.0, 0.70}), click_rule()).empty(),
            "gap 0.70 is not an attempt");
    auto triple = detect_near_miss(testutil::press_trace({0.0, 0.30, 0.60}), click_rule());
    require(triple.size() == 1 && triple[0].t == 0.60, "triple click with 0.30 gaps must fire");
}

// --------------------------------------------------------------------------
// 4. Magnifier sequence

void criterion_magnifier_sequence() {
    using A = UIActionKind;
    const std::vector<std::pair<double, A>> base = {
        {0.0, A::photo_captured}, {10.0, A::photo_opened}, {15.0, A::pinch_zoom}};

    auto fired = detect_sequence(testutil::action_trace(base), magnifier_pattern());
    require(fired.size() == 1, "the workaround triple must fire exactly once");

    for (std::size_t skip = 0; skip < base.size(); ++skip) {
        std::vector<std::pair<double, A>> reduced;
        for (std::size_t i = 0; i < base.size(); ++i)
            if (i != skip) reduced.push_back(base[i]);
        require(detect_sequence(testutil::action_trace(reduced), magnifier_pattern()).empty(),
                "removing step " + std::to_string(skip + 1) + " must suppress the firing");
    }

    const std::vector<std::vector<A>> reorders = {
        {A::photo_opened, A::photo_captured, A::pinch_zoom},
        {A::photo_captured, A::pinch_zoom, A::photo_opened},
        {A::pinch_zoom, A::photo_opened, A::photo_captured},
        {A::pinch_zoom, A::photo_captured, A::photo_opened},
        {A::photo_opened, A::pinch_zoom, A::photo_captured},
    };
    for (const auto& order : reorders) {
        std::vector<std::pair<double, A>> reordered;
        for (std::size_t i = 0; i < order.size(); ++i)
            reordered.push_back({base[i].first, order[i]});
        require(detect_sequence(testutil::action_trace(reordered), magnifier_pattern()).empty(),
                "reordered steps must not fire");
    }

    for (std::size_t stretch = 1; stretch < base.size(); ++stretch) {
        std::vector<std::pair<double, A>> stretched = base;
        double shift = 61.0 - (base[stretch].first - base[stretch - 1].first);
        for (std::size_t i = stretch; i < stretched.size(); ++i) stretched[i].first += shift;
        require(detect_sequence(testutil::action_trace(stretched), magnifier_pattern()).empty(),
                "a gap beyond per-step-within must not fire");
    }
}

// --------------------------------------------------------------------------
// 5. Grouped rules

void criterion_grouped_rules() {
    int total_firings = 0;
    for (const GroupRule& rule : default_group_rules()) {
        Trace enabling;
        enabling.events.push_back({5.0, SettingChange{rule.antecedent, true}});
        auto fired = detect_grouped(enabling, default_group_rules());
        require(fired.size() == 1 && fired[0].feature == rule.consequent,
                "enabling " + rule.antecedent + " must recommend " + rule.consequent);
        total_firings += static_cast<int>(fired.size());

        Trace suppressed;
        suppressed.events.push_back({1.0, SettingChange{rule.consequent, true}});
        suppressed.events.push_back({5.0, SettingChange{rule.antecedent, true}});
        auto none = detect_grouped(suppressed, default_group_rules());
        require(none.empty(), "pre-enabled " + rule.consequent + " must suppress the firing");
        total_firings += static_cast<int>(none.size());
    }
    require(total_firings == 3, "six fixture traces must produce exactly three firings");
}

// --------------------------------------------------------------------------
// 6. Near-miss oracle equivalence

std::vector<double> random_presses(std::mt19937_64& rng, std::size_t count) {
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    std::vector<double> times;
    double t = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        times.push_back(t);
        double r = pick(rng);
        if (r < 0.25)
            t += pick(rng) * 0.25;
        else if (r < 0.55)
            t += 0.25 + pick(rng) * 0.25;
        else if (r < 0.6)
            t += 0.50; // exactly the slowest threshold
        else
            t += 0.51 + pick(rng) * 2.0;
    }
    return times;
}

void criterion_near_miss_oracle() {
    std::mt19937_64 rng(20240601);
    std::size_t total_compared = 0;
    for (int round = 0; round < 100; ++round) {
        NearMissRule rule = click_rule();
        rule.min_count = 1 + static_cast<int>(rng() % 3);
        rule.current_level = static_cast<ClickLevel>(rng() % 3);
        auto presses = random_presses(rng, 1000);

        auto expected = testutil::oracle_near_miss(presses, rule);
        auto actual = detect_near_miss(testutil::press_trace(presses), rule);
        require(actual.size() == expected.size(),
                "firing count mismatch on trace " + std::to_string(round));
        for (std::size_t i = 0; i < actual.size(); ++i) {
            const auto& evidence = std::get<NearMissEvidence>(actual[i].evidence);
            require(actual[i].t == expected[i].t && evidence.press_times == expected[i].press_times &&
                        evidence.max_gap == expected[i].max_gap,
                    "firing detail mismatch on trace " + std::to_string(round));
        }
        total_compared += actual.size();
    }
    require(total_compared > 500, "the random traces compared too few firings to mean anything");
}

// --------------------------------------------------------------------------
// 7. Determinism & affine invariance

void criterion_determinism_and_affine() {
    // (a) byte-identical repeated CLI runs on a fixture trace.
    require(!testutil::cli_binary().empty(), "NEEDSENSE_BIN must point at the CLI");
    testutil::TempDir dir;
    std::string trace_path = dir.file("fixture.jsonl");
    GenSpec fixture;
    fixture.profile.distance = UserProfile::Distance{0.52, 0.03};
    fixture.profile.volume = UserProfile::Volume{0.85, 0.05, 1.0};
    fixture.profile.click_gap = UserProfile::ClickGap{0.40, 0.05, 4};
    fixture.profile.magnifier_workaround = true;
    fixture.seed = 77;
    fixture.duration = 90.0;
    testutil::write_file(trace_path, serialize_trace(generate_trace(fixture)));

    auto first = testutil::run_cli("detect --trace \"" + trace_path + "\" --json");
    auto second = testutil::run_cli("detect --trace \"" + trace_path + "\" --json");
    require(first.exit_code == 0 && second.exit_code == 0, "detect must exit 0");
    require(!first.out.empty() && first.out == second.out,
            "repeated detect --json runs must be byte-identical");
    require(nlohmann::json::parse(first.out).at("firings").size() >= 3,
            "the fixture must exercise several detectors");

    // (b) affine rescaling of distance samples and baseline preserves the
    // (rule, t) set of statistical firings.
    std::mt19937_64 rng(4242);
    int rounds_with_firings = 0;
    for (int round = 0; round < 20; ++round) {
        GenSpec spec;
        spec.profile.distance =
            UserProfile::Distance{0.28 + 0.03 * static_cast<double>(round % 10), 0.02};
        spec.seed = rng();
        spec.duration = 80.0;
        Trace trace = generate_trace(spec);

        BaselineSet baselines;
        baselines.entries[StatSignal::viewing_distance] = Baseline{0.36, 0.049, 10};
        auto reference = detect_statistical(trace, font_rule(), baselines);
        if (!reference.empty()) ++rounds_with_firings;

        for (double a : {0.5, 3.0}) {
            for (double b : {0.0, 0.1}) {
                Trace mapped = trace;
                for (auto& event : mapped.events) {
                    auto& d = std::get<ViewingDistance>(event.payload);
                    d.meters = a * d.meters + b;
                }
                BaselineSet mapped_baselines;
                mapped_baselines.entries[StatSignal::viewing_distance] =
                    Baseline{a * 0.36 + b, a * 0.049, 10};
                auto transformed = detect_statistical(mapped, font_rule(), mapped_baselines);

                require(transformed.size() == reference.size(),
                        "affine transform changed the firing count (round " +
                            std::to_string(round) + ")");
                for (std::size_t i = 0; i < transformed.size(); ++i)
                    require(transformed[i].t == reference[i].t &&
                                transformed[i].rule == reference[i].rule,
                            "affine transform moved a firing (round " + std::to_string(round) +
                                ")");
            }
        }
    }
    require(rounds_with_firings >= 5, "too few traces fired for the invariance check to bite");
}

// --------------------------------------------------------------------------
// 8. False-positive control

void criterion_false_positive_control() {
    BaselineSet baselines;
    baselines.entries[StatSignal::viewing_distance] = Baseline{0.36, 0.049, 10};

    int fired = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GenSpec spec;
        spec.profile.distance = UserProfile::Distance{0.36, 0.049};
        spec.seed = seed;
        spec.duration = 100.0;
        Trace trace = generate_trace(spec);
        if (!detect_statistical(trace, font_rule(), baselines).empty()) ++fired;
    }
    require(fired <= 5, "a baseline-matching profile fired " + std::to_string(fired) +
                            " of 100 seeds (budget 5)");
}

// --------------------------------------------------------------------------
// 9. Parser round-trip and fuzzing

void criterion_parser_round_trip() {
    RuleSet defaults = default_rules();
    require(parse_rules(print_rules(defaults)) == defaults,
            "default rule set must survive print/parse");

    std::mt19937_64 rng(777);
    for (int i = 0; i < 50; ++i) {
        std::string text = testutil::random_rules_text(rng);
        RuleSet rules = parse_rules(text);
        require(parse_rules(print_rules(rules)) == rules,
                "random rule file " + std::to_string(i) + " must survive print/parse");
        require(print_rules(parse_rules(print_rules(rules))) == print_rules(rules),
                "printing must be idempotent on file " + std::to_string(i));
    }

    for (int i = 0; i < 10000; ++i) {
        std::size_t len = rng() % 300;
        std::string junk;
        junk.reserve(len);
        for (std::size_t k = 0; k < len; ++k) junk.push_back(static_cast<char>(rng() & 0xff));
        try {
            (void)parse_rules(junk);
        } catch (const ParseError& e) {
            require(e.line() >= 1 && e.column() >= 1,
                    "fuzz diagnostic must carry a 1-based position");
        } catch (...) {
            require(false, "fuzz input " + std::to_string(i) + " escaped with a foreign exception");
        }
    }
}

// --------------------------------------------------------------------------
// 10. Policy templates

void criterion_policy_templates() {
    TemplateMap templates = default_templates();
    auto it = templates.find("larger_text");
    require(it != templates.end(), "a font-size template must ship");
    require(it->second == "Did you know you can adjust the font size?",
            "font-size template wording must match exactly");

    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    for (const auto& [feature, message] : templates) {
        std::string folded = lower(message);
        for (const char* banned : {"impair", "disab", "trouble", "condition"})
            require(folded.find(banned) == std::string::npos,
                    "template for " + feature + " matches forbidden word '" + banned + "'");
    }
}

struct Criterion {
    int number;
    const char* name;
    double budget_seconds;
    std::function<void()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "font-size trigger boundary", 1.0, criterion_font_size_boundary},
        {2, "subtitles trigger boundary", 1.0, criterion_subtitles_boundary},
        {3, "near-miss ladder", 1.0, criterion_near_miss_ladder},
        {4, "magnifier sequence", 1.0, criterion_magnifier_sequence},
        {5, "grouped rules", 1.0, criterion_grouped_rules},
        {6, "near-miss oracle equivalence", 30.0, criterion_near_miss_oracle},
        {7, "determinism and affine invariance", 10.0, criterion_determinism_and_affine},
        {8, "false-positive control", 30.0, criterion_false_positive_control},
        {9, "parser round-trip and fuzzing", 30.0, criterion_parser_round_trip},
        {10, "policy templates", 1.0, criterion_policy_templates},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            criterion.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                             .count();
        if (error.empty() && elapsed > criterion.budget_seconds) {
            std::ostringstream ss;
            ss << "exceeded budget (" << elapsed << " s > " << criterion.budget_seconds << " s)";
            error = ss.str();
        }
        if (error.empty()) {
            std::printf("[PASS] %2d %-38s (%.2f s)\n", criterion.number, criterion.name, elapsed);
        } else {
            std::printf("[FAIL] %2d %-38s %s\n", criterion.number, criterion.name, error.c_str());
            ++failures;
        }
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
