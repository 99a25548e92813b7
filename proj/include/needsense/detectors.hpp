#pragma once

#include <string>
#include <variant>
#include <vector>

#include "needsense/baseline.hpp"
#include "needsense/catalog.hpp"
#include "needsense/signals.hpp"

namespace needsense {

// The four detection strategies, as pure functions from
// (Trace, rules, baselines, catalog) to raw firings. A firing is a
// detector's determination that evidence for a feature exists at a
// timestamp; policy turns firings into user-facing recommendations.

enum class Sides { above, below, both };

// Click-speed setting levels, fastest to slowest.
enum class ClickLevel { default_, slow, slowest };

std::string_view to_string(Sides s);
std::string_view to_string(ClickLevel l);
std::optional<Sides> parse_sides(std::string_view text);
std::optional<ClickLevel> parse_click_level(std::string_view text);

// Compares the user's running mean of a signal against a population baseline;
// fires once the deviation reaches k_sigma standard deviations with at least
// min_samples of evidence.
struct StatisticalRule {
    std::string name;
    StatSignal signal = StatSignal::viewing_distance;
    Sides sides = Sides::both;
    double k_sigma = 2.0;
    int min_samples = 30;
    FeatureId recommend;

    friend bool operator==(const StatisticalRule&, const StatisticalRule&) = default;
};

// Watches double/triple clicks of a button that would have registered at a
// slower click-speed setting than the current one.
struct NearMissRule {
    std::string name;
    Button button = Button::side;
    // Click-gap thresholds per level, strictly increasing.
    double t_default = 0.25;
    double t_slow = 0.35;
    double t_slowest = 0.50;
    ClickLevel current_level = ClickLevel::default_;
    int min_count = 1; // near-misses required before firing
    FeatureId recommend;

    double current_threshold() const {
        switch (current_level) {
            case ClickLevel::slow: return t_slow;
            case ClickLevel::slowest: return t_slowest;
            default: return t_default;
        }
    }

    friend bool operator==(const NearMissRule&, const NearMissRule&) = default;
};

// A timed sequence of UI actions indicating a workaround for a feature.
struct SequencePattern {
    std::string name;
    std::vector<UIActionKind> steps; // length >= 2
    double per_step_within = 60.0;   // max gap between consecutive matched steps
    double window = 120.0;           // max total span, >= per_step_within
    FeatureId recommend;

    friend bool operator==(const SequencePattern&, const SequencePattern&) = default;
};

struct RuleSet {
    std::vector<StatisticalRule> statistical;
    std::vector<NearMissRule> near_miss;
    std::vector<SequencePattern> sequences;
    std::vector<GroupRule> groups;

    friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

struct StatEvidence {
    double user_mean = 0.0;
    double baseline_mean = 0.0;
    double baseline_stddev = 0.0;
    int n = 0; // samples consumed when the rule fired
    friend bool operator==(const StatEvidence&, const StatEvidence&) = default;
};

struct NearMissEvidence {
    std::vector<double> press_times; // the triggering attempt
    double max_gap = 0.0;
    int click_count = 0;
    friend bool operator==(const NearMissEvidence&, const NearMissEvidence&) = default;
};

struct SequenceEvidence {
    std::vector<double> matched_step_times;
    friend bool operator==(const SequenceEvidence&, const SequenceEvidence&) = default;
};

struct GroupEvidence {
    FeatureId antecedent;
    friend bool operator==(const GroupEvidence&, const GroupEvidence&) = default;
};

using Evidence = std::variant<StatEvidence, NearMissEvidence, SequenceEvidence, GroupEvidence>;

struct Firing {
    FeatureId feature;
    double t = 0.0;   // earliest time the evidence threshold was met
    std::string rule; // rule name; group rules use group:<antecedent>=><consequent>
    Evidence evidence;

    friend bool operator==(const Firing&, const Firing&) = default;
};

std::string group_rule_name(const GroupRule& rule);

// Statistical detection. Walks the rule's signal samples in order (audio
// volume gated on playing == true) keeping a running mean, and fires at the
// first sample i >= min_samples where the mean deviates from the baseline by
// at least k_sigma standard deviations on the configured side(s). A zero
// baseline stddev degenerates to "any deviation". At most one firing per
// rule per trace. Throws RuleSemanticsError when the baseline set lacks the
// rule's signal.
std::vector<Firing> detect_statistical(const Trace& trace, const StatisticalRule& rule,
                                       const BaselineSet& baselines);

// Near-miss detection. Presses of the rule's button are partitioned into
// bursts (maximal runs with every inter-press gap <= t_slowest). A burst of
// exactly 2 or 3 presses is a click attempt; others are ignored. An attempt
// whose largest gap g satisfies g <= current threshold is a success; one with
// current threshold < g <= t_slowest is a near-miss. Fires at the last press
// of every min_count-th near-miss; the count resets after each firing.
std::vector<Firing> detect_near_miss(const Trace& trace, const NearMissRule& rule);

// Action-sequence detection. Greedy earliest-match scan over UIAction events:
// an event matching the next expected step within per_step_within of the
// previous matched step and within window of the first extends the match;
// non-matching events are ignored; an expected step arriving too late resets
// the match (and may itself start a new one). Completed matches fire at the
// last matched event and do not overlap.
std::vector<Firing> detect_sequence(const Trace& trace, const SequencePattern& pattern);

// Grouped detection. Folds SettingChange events over the enabled-feature set
// (seeded from trace meta initial_settings); enabling an antecedent fires for
// each implied consequent not already enabled. One firing per rule per trace.
std::vector<Firing> detect_grouped(const Trace& trace, const std::vector<GroupRule>& rules);

// Structural rule-set invariants: positive k, increasing ladders, step counts,
// unique rule names. Throws ParseError (no position) on violation.
void validate_ruleset(const RuleSet& rules);

// Checks every rule target against the catalog: targets must exist and must
// not be required-only. Throws RuleSemanticsError.
void validate_rules_against_catalog(const RuleSet& rules, const FeatureCatalog& catalog);

// Runs every detector and returns the concatenated firings sorted by
// (t, rule name); ties keep detection order. Deterministic.
std::vector<Firing> detect_all(const Trace& trace, const RuleSet& rules,
                               const BaselineSet& baselines, const FeatureCatalog& catalog);

} // namespace needsense
