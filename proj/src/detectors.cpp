#include "needsense/detectors.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "needsense/errors.hpp"

namespace needsense {

std::string_view to_string(Sides s) {
    switch (s) {
        case Sides::above: return "above";
        case Sides::below: return "below";
        case Sides::both: return "both";
    }
    return "both";
}

std::string_view to_string(ClickLevel l) {
    switch (l) {
        case ClickLevel::default_: return "default";
        case ClickLevel::slow: return "slow";
        case ClickLevel::slowest: return "slowest";
    }
    return "default";
}

std::optional<Sides> parse_sides(std::string_view text) {
    if (text == "above") return Sides::above;
    if (text == "below") return Sides::below;
    if (text == "both") return Sides::both;
    return std::nullopt;
}

std::optional<ClickLevel> parse_click_level(std::string_view text) {
    if (text == "default") return ClickLevel::default_;
    if (text == "slow") return ClickLevel::slow;
    if (text == "slowest") return ClickLevel::slowest;
    return std::nullopt;
}

std::string group_rule_name(const GroupRule& rule) {
    return "group:" + rule.antecedent + "=>" + rule.consequent;
}

std::vector<Firing> detect_statistical(const Trace& trace, const StatisticalRule& rule,
                                       const BaselineSet& baselines) {
    const Baseline* baseline = baselines.find(rule.signal);
    if (!baseline)
        throw RuleSemanticsError("no baseline for signal '" + std::string(to_string(rule.signal)) +
                                 "' required by rule '" + rule.name + "'");

    auto deviates = [&](double user_mean) {
        double delta = user_mean - baseline->mean;
        if (baseline->stddev == 0.0) {
            // Degenerate baseline: any deviation on the configured side counts.
            switch (rule.sides) {
                case Sides::above: return delta > 0.0;
                case Sides::below: return delta < 0.0;
                case Sides::both: return delta != 0.0;
            }
        }
        double threshold = rule.k_sigma * baseline->stddev;
        switch (rule.sides) {
            case Sides::above: return delta >= threshold;
            case Sides::below: return -delta >= threshold;
            case Sides::both: return std::abs(delta) >= threshold;
        }
        return false;
    };

    std::vector<Firing> firings;
    double sum = 0.0;
    int count = 0;
    for (const auto& [t, value] : stat_samples(trace, rule.signal)) {
        sum += value;
        ++count;
        if (count < rule.min_samples) continue;
        double user_mean = sum / count;
        if (deviates(user_mean)) {
            firings.push_back(Firing{
                rule.recommend, t, rule.name,
                StatEvidence{user_mean, baseline->mean, baseline->stddev, count}});
            break;
        }
    }
    return firings;
}

namespace {

struct Burst {
    std::vector<double> press_times;

    double max_gap() const {
        double g = 0.0;
        for (std::size_t i = 1; i < press_times.size(); ++i)
            g = std::max(g, press_times[i] - press_times[i - 1]);
        return g;
    }
};

} // namespace

std::vector<Firing> detect_near_miss(const Trace& trace, const NearMissRule& rule) {
    const double t_cur = rule.current_threshold();

    std::vector<Firing> firings;
    int near_misses = 0;

    auto close_burst = [&](const Burst& burst) {
        // Only double and triple clicks count as attempts.
        if (burst.press_times.size() != 2 && burst.press_times.size() != 3) return;
        double gap = burst.max_gap();
        bool near_miss = gap > t_cur && gap <= rule.t_slowest;
        if (!near_miss) return;
        if (++near_misses < rule.min_count) return;
        firings.push_back(Firing{rule.recommend, burst.press_times.back(), rule.name,
                                 NearMissEvidence{burst.press_times, gap,
                                                  static_cast<int>(burst.press_times.size())}});
        near_misses = 0;
    };

    Burst current;
    for (const auto& event : trace.events) {
        const auto* press = std::get_if<ButtonPress>(&event.payload);
        if (!press || press->button != rule.button) continue;
        if (!current.press_times.empty() &&
            event.t - current.press_times.back() > rule.t_slowest) {
            close_burst(current);
            current.press_times.clear();
        }
        current.press_times.push_back(event.t);
    }
    close_burst(current);
    return firings;
}

std::vector<Firing> detect_sequence(const Trace& trace, const SequencePattern& pattern) {
    std::vector<Firing> firings;
    if (pattern.steps.empty()) return firings;
    std::vector<double> matched; // times of matched steps so far

    for (const auto& event : trace.events) {
        const auto* action = std::get_if<UIAction>(&event.payload);
        if (!action) continue;

        if (matched.empty()) {
            if (action->action == pattern.steps.front()) matched.push_back(event.t);
            continue;
        }
        if (action->action != pattern.steps[matched.size()]) continue; // intervening event

        bool in_time = event.t - matched.back() <= pattern.per_step_within &&
                       event.t - matched.front() <= pattern.window;
        if (in_time) {
            matched.push_back(event.t);
            if (matched.size() == pattern.steps.size()) {
                firings.push_back(
                    Firing{pattern.recommend, event.t, pattern.name, SequenceEvidence{matched}});
                matched.clear(); // non-overlapping: restart from scratch
            }
        } else {
            matched.clear();
            if (action->action == pattern.steps.front()) matched.push_back(event.t);
        }
    }
    return firings;
}

std::vector<Firing> detect_grouped(const Trace& trace, const std::vector<GroupRule>& rules) {
    std::unordered_set<FeatureId> enabled(trace.meta.initial_settings.begin(),
                                          trace.meta.initial_settings.end());
    std::set<std::size_t> fired;
    std::vector<Firing> firings;

    for (const auto& event : trace.events) {
        const auto* change = std::get_if<SettingChange>(&event.payload);
        if (!change) continue;
        if (change->enabled) {
            for (std::size_t i = 0; i < rules.size(); ++i) {
                const GroupRule& rule = rules[i];
                if (rule.antecedent != change->feature) continue;
                if (enabled.count(rule.consequent)) continue;
                if (!fired.insert(i).second) continue;
                firings.push_back(Firing{rule.consequent, event.t, group_rule_name(rule),
                                         GroupEvidence{rule.antecedent}});
            }
            enabled.insert(change->feature);
        } else {
            enabled.erase(change->feature);
        }
    }
    return firings;
}

void validate_ruleset(const RuleSet& rules) {
    std::set<std::string> names;
    auto check_name = [&](const std::string& name) {
        if (name.empty()) throw ParseError("rule name must not be empty");
        if (!names.insert(name).second) throw ParseError("duplicate rule name: '" + name + "'");
    };
    for (const auto& r : rules.statistical) {
        check_name(r.name);
        if (!(r.k_sigma > 0.0)) throw ParseError("k must be positive in rule '" + r.name + "'");
        if (r.min_samples < 1)
            throw ParseError("min_samples must be at least 1 in rule '" + r.name + "'");
    }
    for (const auto& r : rules.near_miss) {
        check_name(r.name);
        if (!(r.t_default > 0.0))
            throw ParseError("ladder values must be positive in rule '" + r.name + "'");
        if (!(r.t_default < r.t_slow && r.t_slow < r.t_slowest))
            throw ParseError("ladder must be strictly increasing in rule '" + r.name + "'");
        if (r.min_count < 1)
            throw ParseError("min_count must be at least 1 in rule '" + r.name + "'");
    }
    for (const auto& r : rules.sequences) {
        check_name(r.name);
        if (r.steps.size() < 2)
            throw ParseError("sequence needs at least 2 steps in rule '" + r.name + "'");
        if (!(r.per_step_within > 0.0) || !(r.window > 0.0))
            throw ParseError("sequence timings must be positive in rule '" + r.name + "'");
        if (r.per_step_within > r.window)
            throw ParseError("per-step within exceeds window in rule '" + r.name + "'");
    }
    std::set<std::pair<FeatureId, FeatureId>> pairs;
    for (const auto& g : rules.groups) {
        if (g.antecedent == g.consequent) throw ParseError("self-implication: '" + g.antecedent + "'");
        if (!pairs.insert({g.antecedent, g.consequent}).second)
            throw ParseError("duplicate group rule: '" + group_rule_name(g) + "'");
    }
}

void validate_rules_against_catalog(const RuleSet& rules, const FeatureCatalog& catalog) {
    auto check_target = [&](const FeatureId& feature, const std::string& rule_name) {
        const FeatureEntry* entry = catalog.find(feature);
        if (!entry)
            throw RuleSemanticsError("unknown feature '" + feature + "' in rule '" + rule_name + "'");
        if (entry->required_only())
            throw RuleSemanticsError("feature '" + feature + "' is required-only and cannot be " +
                                     "recommended (rule '" + rule_name + "')");
    };
    for (const auto& r : rules.statistical) check_target(r.recommend, r.name);
    for (const auto& r : rules.near_miss) check_target(r.recommend, r.name);
    for (const auto& r : rules.sequences) check_target(r.recommend, r.name);
    for (const auto& g : rules.groups) {
        if (!catalog.contains(g.antecedent))
            throw RuleSemanticsError("unknown feature '" + g.antecedent + "' in rule '" +
                                     group_rule_name(g) + "'");
        check_target(g.consequent, group_rule_name(g));
    }
}

std::vector<Firing> detect_all(const Trace& trace, const RuleSet& rules,
                               const BaselineSet& baselines, const FeatureCatalog& catalog) {
    validate_ruleset(rules);
    validate_rules_against_catalog(rules, catalog);

    std::vector<Firing> firings;
    auto append = [&](std::vector<Firing>&& more) {
        for (auto& f : more) firings.push_back(std::move(f));
    };
    for (const auto& r : rules.statistical) append(detect_statistical(trace, r, baselines));
    for (const auto& r : rules.near_miss) append(detect_near_miss(trace, r));
    for (const auto& r : rules.sequences) append(detect_sequence(trace, r));
    append(detect_grouped(trace, rules.groups));

    std::stable_sort(firings.begin(), firings.end(), [](const Firing& a, const Firing& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.rule < b.rule;
    });
    return firings;
}

} // namespace needsense
