#include "needsense/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "needsense/errors.hpp"

namespace needsense {

using nlohmann::json;

std::string_view to_string(StatSignal s) {
    switch (s) {
        case StatSignal::viewing_distance: return "viewing_distance";
        case StatSignal::audio_volume: return "audio_volume";
    }
    return "viewing_distance";
}

std::optional<StatSignal> parse_stat_signal(std::string_view text) {
    if (text == "viewing_distance") return StatSignal::viewing_distance;
    if (text == "audio_volume") return StatSignal::audio_volume;
    return std::nullopt;
}

std::vector<std::pair<double, double>> stat_samples(const Trace& trace, StatSignal signal) {
    std::vector<std::pair<double, double>> out;
    for (const auto& event : trace.events) {
        if (signal == StatSignal::viewing_distance) {
            if (const auto* d = std::get_if<ViewingDistance>(&event.payload))
                out.emplace_back(event.t, d->meters);
        } else {
            if (const auto* a = std::get_if<AudioSnapshot>(&event.payload))
                if (a->playing) out.emplace_back(event.t, a->volume);
        }
    }
    return out;
}

namespace {

Baseline stats_of(std::vector<double> samples) {
    // Sorted accumulation keeps the result independent of sample order.
    std::sort(samples.begin(), samples.end());
    Baseline b;
    b.n = static_cast<std::int64_t>(samples.size());
    if (samples.front() == samples.back()) {
        // Constant input: exact mean, zero spread, no accumulation error.
        b.mean = samples.front();
        return b;
    }
    double sum = 0.0;
    for (double x : samples) sum += x;
    b.mean = sum / static_cast<double>(b.n);
    double sq = 0.0;
    for (double x : samples) sq += (x - b.mean) * (x - b.mean);
    b.stddev = std::sqrt(sq / static_cast<double>(b.n - 1));
    return b;
}

} // namespace

BaselineSet calibrate(const std::vector<Trace>& traces) {
    std::map<StatSignal, std::vector<double>> pooled;
    for (const auto& trace : traces) {
        for (auto signal : {StatSignal::viewing_distance, StatSignal::audio_volume}) {
            for (const auto& [t, value] : stat_samples(trace, signal))
                pooled[signal].push_back(value);
        }
    }
    if (pooled.empty()) throw CalibrationError("empty calibration");

    BaselineSet set;
    for (auto& [signal, samples] : pooled)
        set.entries[signal] = stats_of(std::move(samples));
    return set;
}

BaselineSet default_baselines() {
    BaselineSet set;
    set.entries[StatSignal::viewing_distance] = Baseline{0.36, 0.049, 10};
    set.entries[StatSignal::audio_volume] = Baseline{0.471, 0.163, 10};
    return set;
}

std::string save_baselines(const BaselineSet& set) {
    json j = json::object();
    for (const auto& [signal, b] : set.entries) {
        json entry;
        entry["mean"] = b.mean;
        entry["stddev"] = b.stddev;
        entry["n"] = b.n;
        j[std::string(to_string(signal))] = entry;
    }
    return j.dump(2) + "\n";
}

BaselineSet load_baselines(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("baseline file must be a JSON object");

    BaselineSet set;
    for (const auto& item : j.items()) {
        auto signal = parse_stat_signal(item.key());
        if (!signal) throw ParseError("unknown signal: '" + item.key() + "'");
        const json& entry = item.value();
        if (!entry.is_object()) throw ParseError("baseline entry must be an object");
        for (const auto& field : entry.items())
            if (field.key() != "mean" && field.key() != "stddev" && field.key() != "n")
                throw ParseError("unknown field '" + field.key() + "' in baseline entry");

        Baseline b;
        if (!entry.contains("mean") || !entry.at("mean").is_number())
            throw ParseError("baseline entry for '" + item.key() + "' needs numeric 'mean'");
        if (!entry.contains("stddev") || !entry.at("stddev").is_number())
            throw ParseError("baseline entry for '" + item.key() + "' needs numeric 'stddev'");
        if (!entry.contains("n") || !entry.at("n").is_number_integer())
            throw ParseError("baseline entry for '" + item.key() + "' needs integer 'n'");
        b.mean = entry.at("mean").get<double>();
        b.stddev = entry.at("stddev").get<double>();
        b.n = entry.at("n").get<std::int64_t>();
        if (!std::isfinite(b.mean) || !std::isfinite(b.stddev))
            throw ParseError("baseline values must be finite");
        if (b.stddev < 0.0) throw ParseError("stddev must be non-negative");
        if (b.n < 1) throw ParseError("n must be at least 1");
        if (b.n == 1 && b.stddev != 0.0)
            throw ParseError("stddev must be 0 when n == 1");
        set.entries[*signal] = b;
    }
    return set;
}

} // namespace needsense
