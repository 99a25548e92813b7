#pragma once

#include <map>
#include <string>
#include <vector>

#include "needsense/detectors.hpp"

namespace needsense {

// Surfacing policy: converts raw firings into the recommendations a user
// would actually see. Delivery (notification, menu ranking) is the caller's
// concern; recommendations are plain records.

struct PolicyConfig {
    double cooldown = 86400.0; // seconds between recommendations per feature
    int max_per_trace = 3;
    bool suppress_enabled = true; // drop firings for already-enabled features
};

struct Recommendation {
    FeatureId feature;
    double t = 0.0;
    std::string message; // capability-phrased, never names a cause or ability
    std::string rule;
    Evidence evidence;

    friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

using TemplateMap = std::map<FeatureId, std::string>;

// Message templates shipped with the engine, keyed by feature id.
TemplateMap default_templates();

// Template file: UTF-8 lines `feature_id = message text`; `#` lines are
// comments. Throws ParseError with the offending line.
TemplateMap parse_templates(const std::string& text);

// Filters time-sorted firings in order, dropping one when (a) its feature is
// already enabled at that time (per the trace's SettingChange fold) and
// suppression is on, (b) the same feature was recommended less than cooldown
// seconds before, or (c) max_per_trace is reached. Messages come from the
// template map, falling back to "Did you know about <feature>?".
std::vector<Recommendation> surface(const std::vector<Firing>& firings, const Trace& trace,
                                    const PolicyConfig& cfg, const TemplateMap& templates);

} // namespace needsense
