#include "needsense/tracegen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "json.hpp"

#include "needsense/errors.hpp"

namespace needsense {

using nlohmann::json;

namespace {

// Self-contained deviate source so a seed reproduces the same trace
// regardless of standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; } // [0,1)

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    double normal(double mean, double stddev) {
        // Box-Muller; one deviate per call.
        double u1 = 1.0 - uniform01(); // (0,1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 gen_;
};

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

void validate(const GenSpec& spec) {
    require(spec.duration >= 0.0 && std::isfinite(spec.duration), "duration must be >= 0");
    require(spec.sample_interval > 0.0 && std::isfinite(spec.sample_interval),
            "sample_interval must be > 0");
    const UserProfile& p = spec.profile;
    if (p.distance) require(p.distance->stddev >= 0.0, "distance stddev must be >= 0");
    if (p.volume) {
        require(p.volume->stddev >= 0.0, "volume stddev must be >= 0");
        require(p.volume->playing_prob >= 0.0 && p.volume->playing_prob <= 1.0,
                "playing_prob must be within [0,1]");
    }
    if (p.click_gap) {
        require(p.click_gap->stddev >= 0.0, "click_gap stddev must be >= 0");
        require(p.click_gap->attempts >= 0, "attempts must be >= 0");
    }
    for (const auto& [t, feature] : p.enable_events) {
        require(t >= 0.0 && std::isfinite(t), "enable_events times must be >= 0");
        require(is_valid_feature_id(feature), "enable_events features must be valid ids");
    }
}

} // namespace

Trace generate_trace(const GenSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    const UserProfile& profile = spec.profile;
    std::vector<SignalEvent> events;

    if (profile.distance) {
        for (long k = 0; static_cast<double>(k) * spec.sample_interval < spec.duration; ++k) {
            double t = static_cast<double>(k) * spec.sample_interval;
            double m = std::max(rng.normal(profile.distance->mean, profile.distance->stddev), 0.01);
            events.push_back({t, ViewingDistance{m}});
        }
    }
    if (profile.volume) {
        for (long k = 0; static_cast<double>(k) * spec.sample_interval < spec.duration; ++k) {
            double t = static_cast<double>(k) * spec.sample_interval;
            AudioSnapshot snap;
            snap.playing = rng.bernoulli(profile.volume->playing_prob);
            snap.volume = std::clamp(rng.normal(profile.volume->mean, profile.volume->stddev),
                                     0.0, 1.0);
            snap.output = AudioOutput::speaker;
            events.push_back({t, snap});
        }
    }
    if (profile.click_gap && spec.duration > 0.0) {
        for (int a = 0; a < profile.click_gap->attempts; ++a) {
            double start = rng.uniform(0.0, spec.duration);
            double gap = std::max(rng.normal(profile.click_gap->mean, profile.click_gap->stddev),
                                  0.001);
            events.push_back({start, ButtonPress{Button::side}});
            events.push_back({start + gap, ButtonPress{Button::side}});
        }
    }
    if (profile.magnifier_workaround && spec.duration > 0.0) {
        double start = rng.uniform(0.0, std::max(spec.duration - 20.0, 0.0));
        events.push_back({start, UIAction{UIActionKind::photo_captured, "camera"}});
        events.push_back({start + 10.0, UIAction{UIActionKind::photo_opened, "photos"}});
        events.push_back({start + 20.0, UIAction{UIActionKind::pinch_zoom, "photos"}});
    }
    for (const auto& [t, feature] : profile.enable_events) {
        if (t <= spec.duration) events.push_back({t, SettingChange{feature, true}});
    }

    std::stable_sort(events.begin(), events.end(),
                     [](const SignalEvent& a, const SignalEvent& b) { return a.t < b.t; });
    return Trace{std::move(events), {}};
}

namespace {

double require_finite(const json& j, const char* section, const char* field) {
    if (!j.contains(field) || !j.at(field).is_number())
        throw ParseError(std::string(section) + " needs numeric '" + field + "'");
    double v = j.at(field).get<double>();
    if (!std::isfinite(v))
        throw ParseError(std::string(section) + " field '" + field + "' must be finite");
    return v;
}

void reject_unknown(const json& j, const char* section, std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known)
            throw ParseError("unknown field '" + item.key() + "' in " + section);
    }
}

} // namespace

UserProfile parse_profile(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("profile must be a JSON object");
    reject_unknown(j, "profile",
                   {"distance", "volume", "click_gap", "magnifier_workaround", "enable_events"});

    UserProfile profile;
    if (j.contains("distance")) {
        const json& d = j.at("distance");
        if (!d.is_object()) throw ParseError("distance must be an object");
        reject_unknown(d, "distance", {"mean", "stddev"});
        UserProfile::Distance dist;
        dist.mean = require_finite(d, "distance", "mean");
        dist.stddev = require_finite(d, "distance", "stddev");
        if (dist.stddev < 0.0) throw ParseError("distance stddev must be >= 0");
        profile.distance = dist;
    }
    if (j.contains("volume")) {
        const json& v = j.at("volume");
        if (!v.is_object()) throw ParseError("volume must be an object");
        reject_unknown(v, "volume", {"mean", "stddev", "playing_prob"});
        UserProfile::Volume vol;
        vol.mean = require_finite(v, "volume", "mean");
        vol.stddev = require_finite(v, "volume", "stddev");
        if (vol.stddev < 0.0) throw ParseError("volume stddev must be >= 0");
        if (v.contains("playing_prob")) {
            vol.playing_prob = require_finite(v, "volume", "playing_prob");
            if (vol.playing_prob < 0.0 || vol.playing_prob > 1.0)
                throw ParseError("playing_prob must be within [0,1]");
        }
        profile.volume = vol;
    }
    if (j.contains("click_gap")) {
        const json& c = j.at("click_gap");
        if (!c.is_object()) throw ParseError("click_gap must be an object");
        reject_unknown(c, "click_gap", {"mean", "stddev", "attempts"});
        UserProfile::ClickGap gap;
        gap.mean = require_finite(c, "click_gap", "mean");
        gap.stddev = require_finite(c, "click_gap", "stddev");
        if (gap.stddev < 0.0) throw ParseError("click_gap stddev must be >= 0");
        if (!c.contains("attempts") || !c.at("attempts").is_number_integer())
            throw ParseError("click_gap needs integer 'attempts'");
        gap.attempts = c.at("attempts").get<int>();
        if (gap.attempts < 0) throw ParseError("attempts must be >= 0");
        profile.click_gap = gap;
    }
    if (j.contains("magnifier_workaround")) {
        if (!j.at("magnifier_workaround").is_boolean())
            throw ParseError("magnifier_workaround must be a boolean");
        profile.magnifier_workaround = j.at("magnifier_workaround").get<bool>();
    }
    if (j.contains("enable_events")) {
        const json& arr = j.at("enable_events");
        if (!arr.is_array()) throw ParseError("enable_events must be an array");
        for (const json& e : arr) {
            if (!e.is_object()) throw ParseError("enable_events entries must be objects");
            reject_unknown(e, "enable_events entry", {"t", "feature"});
            double t = require_finite(e, "enable_events entry", "t");
            if (t < 0.0) throw ParseError("enable_events times must be >= 0");
            if (!e.contains("feature") || !e.at("feature").is_string() ||
                !is_valid_feature_id(e.at("feature").get<std::string>()))
                throw ParseError("enable_events entry needs a valid 'feature' id");
            profile.enable_events.emplace_back(t, e.at("feature").get<std::string>());
        }
        std::stable_sort(profile.enable_events.begin(), profile.enable_events.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    return profile;
}

} // namespace needsense
