#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "needsense/policy.hpp"

namespace needsense {

struct RuleStat {
    bool evaluated = true;
    int fired = 0;

    friend bool operator==(const RuleStat&, const RuleStat&) = default;
};

// Result of running detection and policy over one trace.
struct Report {
    std::string trace_id;
    std::vector<Firing> firings;
    std::vector<Recommendation> recommendations;
    std::map<std::string, RuleStat> rule_stats;
};

Report build_report(std::string trace_id, const Trace& trace, const RuleSet& rules,
                    const BaselineSet& baselines, const FeatureCatalog& catalog,
                    const PolicyConfig& policy, const TemplateMap& templates);

// nlohmann serializers; key order is alphabetical, so dumps are deterministic.
void to_json(nlohmann::json& j, const Firing& f);
void to_json(nlohmann::json& j, const Recommendation& r);
void to_json(nlohmann::json& j, const RuleStat& s);
void to_json(nlohmann::json& j, const Report& r);

// Human-readable rendering used by the CLI when --json is not given.
std::string render_report_text(const Report& report);

} // namespace needsense
