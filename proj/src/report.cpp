#include "needsense/report.hpp"

#include <sstream>

namespace needsense {

using nlohmann::json;

Report build_report(std::string trace_id, const Trace& trace, const RuleSet& rules,
                    const BaselineSet& baselines, const FeatureCatalog& catalog,
                    const PolicyConfig& policy, const TemplateMap& templates) {
    Report report;
    report.trace_id = std::move(trace_id);
    report.firings = detect_all(trace, rules, baselines, catalog);
    report.recommendations = surface(report.firings, trace, policy, templates);

    for (const auto& r : rules.statistical) report.rule_stats[r.name] = {};
    for (const auto& r : rules.near_miss) report.rule_stats[r.name] = {};
    for (const auto& r : rules.sequences) report.rule_stats[r.name] = {};
    for (const auto& g : rules.groups) report.rule_stats[group_rule_name(g)] = {};
    for (const auto& f : report.firings) ++report.rule_stats[f.rule].fired;
    return report;
}

namespace {

json evidence_to_json(const Evidence& evidence) {
    json j;
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, StatEvidence>) {
                j["kind"] = "statistical";
                j["user_mean"] = e.user_mean;
                j["baseline_mean"] = e.baseline_mean;
                j["baseline_stddev"] = e.baseline_stddev;
                j["n"] = e.n;
            } else if constexpr (std::is_same_v<T, NearMissEvidence>) {
                j["kind"] = "near_miss";
                j["press_times"] = e.press_times;
                j["max_gap"] = e.max_gap;
                j["click_count"] = e.click_count;
            } else if constexpr (std::is_same_v<T, SequenceEvidence>) {
                j["kind"] = "sequence";
                j["matched_step_times"] = e.matched_step_times;
            } else if constexpr (std::is_same_v<T, GroupEvidence>) {
                j["kind"] = "group";
                j["antecedent"] = e.antecedent;
            }
        },
        evidence);
    return j;
}

} // namespace

void to_json(json& j, const Firing& f) {
    j = json{{"feature", f.feature}, {"t", f.t}, {"rule", f.rule},
             {"evidence", evidence_to_json(f.evidence)}};
}

void to_json(json& j, const Recommendation& r) {
    j = json{{"feature", r.feature}, {"t", r.t}, {"message", r.message}, {"rule", r.rule},
             {"evidence", evidence_to_json(r.evidence)}};
}

void to_json(json& j, const RuleStat& s) {
    j = json{{"evaluated", s.evaluated}, {"fired", s.fired}};
}

void to_json(json& j, const Report& r) {
    j = json{{"trace_id", r.trace_id}, {"firings", r.firings},
             {"recommendations", r.recommendations}, {"rule_stats", r.rule_stats}};
}

std::string render_report_text(const Report& report) {
    std::ostringstream out;
    out << "trace: " << report.trace_id << "\n";
    out << "firings: " << report.firings.size() << "\n";
    for (const auto& f : report.firings) {
        out << "  t=" << f.t << "  " << f.feature << "  rule=" << f.rule << "\n";
    }
    out << "recommendations: " << report.recommendations.size() << "\n";
    for (const auto& r : report.recommendations) {
        out << "  t=" << r.t << "  " << r.feature << "  \"" << r.message << "\"\n";
    }
    out << "rules:\n";
    for (const auto& [name, stat] : report.rule_stats) {
        out << "  " << name << "  evaluated=" << (stat.evaluated ? "yes" : "no")
            << " fired=" << stat.fired << "\n";
    }
    return out.str();
}

} // namespace needsense
