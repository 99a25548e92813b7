#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "needsense/signals.hpp"

namespace needsense {

// Signals with population statistics a user's behavior is compared against.
enum class StatSignal { viewing_distance, audio_volume };

std::string_view to_string(StatSignal s);
std::optional<StatSignal> parse_stat_signal(std::string_view text);

// Population statistics for one signal. Units: meters for viewing distance,
// volume fraction in [0,1] for audio.
struct Baseline {
    double mean = 0.0;
    double stddev = 0.0;   // >= 0; 0 whenever n == 1
    std::int64_t n = 1;    // sample count, >= 1

    friend bool operator==(const Baseline&, const Baseline&) = default;
};

struct BaselineSet {
    std::map<StatSignal, Baseline> entries;

    const Baseline* find(StatSignal s) const {
        auto it = entries.find(s);
        return it == entries.end() ? nullptr : &it->second;
    }

    friend bool operator==(const BaselineSet&, const BaselineSet&) = default;
};

// (t, value) samples of a statistical signal in trace order. Audio volume is
// sampled only while `playing` is true.
std::vector<std::pair<double, double>> stat_samples(const Trace& trace, StatSignal signal);

// Pools every sample of every calibratable signal across the given traces and
// computes per-signal mean and sample standard deviation (n-1 denominator,
// 0 when n == 1). Samples are sorted before accumulation so the result is
// invariant under reordering of traces or events. Throws CalibrationError
// when no trace contains any calibratable sample.
BaselineSet calibrate(const std::vector<Trace>& traces);

// Built-in baselines used when no calibration file is supplied:
// viewing_distance (0.36 m, 0.049 m), audio_volume (0.471, 0.163).
BaselineSet default_baselines();

// Baseline file: a JSON object keyed by signal name, each entry carrying
// mean/stddev/n. load(save(set)) == set, numerically exact.
std::string save_baselines(const BaselineSet& set);
BaselineSet load_baselines(const std::string& text);

} // namespace needsense
