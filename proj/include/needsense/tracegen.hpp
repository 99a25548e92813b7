#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "needsense/signals.hpp"

namespace needsense {

// Seeded synthetic trace generation. Profiles describe a simulated user;
// generation is deterministic per (profile, seed) so fixtures reproduce
// byte-for-byte.

struct UserProfile {
    struct Distance {
        double mean = 0.36;  // meters
        double stddev = 0.0;
    };
    struct Volume {
        double mean = 0.5;   // fraction of max volume
        double stddev = 0.0;
        double playing_prob = 1.0;
    };
    struct ClickGap {
        double mean = 0.2;   // seconds between double-click presses
        double stddev = 0.0;
        int attempts = 0;    // double-click attempts over the session
    };

    std::optional<Distance> distance;
    std::optional<Volume> volume;
    std::optional<ClickGap> click_gap;
    bool magnifier_workaround = false; // emit one photo/open/pinch-zoom triple
    std::vector<std::pair<double, FeatureId>> enable_events;

    friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct GenSpec {
    UserProfile profile;
    std::uint64_t seed = 0;
    double duration = 0.0;        // seconds, >= 0
    double sample_interval = 1.0; // seconds, > 0
};

// Generates a valid trace: distance and audio samples every sample_interval
// while t < duration (normal deviates; distance clipped to >= 0.01 m, volume
// clamped to [0,1], click gaps clipped to >= 0.001 s), click attempts at
// uniform random times, the workaround triple with 10 s gaps, and the
// profile's enable events (those with t <= duration). Events are time-sorted.
// Throws std::invalid_argument on an invalid spec.
Trace generate_trace(const GenSpec& spec);

// Profile file: a JSON object mirroring UserProfile. All sections optional;
// unknown keys and out-of-range values are rejected. Throws ParseError.
UserProfile parse_profile(const std::string& json_text);

} // namespace needsense
