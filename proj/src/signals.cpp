#include "needsense/signals.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

#include "needsense/errors.hpp"

namespace needsense {

using nlohmann::json;

std::string_view to_string(SignalKind k) {
    switch (k) {
        case SignalKind::viewing_distance: return "viewing_distance";
        case SignalKind::audio: return "audio";
        case SignalKind::button: return "button";
        case SignalKind::ui_action: return "ui_action";
        case SignalKind::setting: return "setting";
    }
    return "setting";
}

std::string_view to_string(AudioOutput o) {
    switch (o) {
        case AudioOutput::speaker: return "speaker";
        case AudioOutput::headphones: return "headphones";
        case AudioOutput::other: return "other";
    }
    return "other";
}

std::string_view to_string(Button b) {
    switch (b) {
        case Button::side: return "side";
        case Button::home: return "home";
        case Button::volume_up: return "volume_up";
        case Button::volume_down: return "volume_down";
    }
    return "side";
}

std::string_view to_string(UIActionKind a) {
    switch (a) {
        case UIActionKind::app_open: return "app_open";
        case UIActionKind::screenshot: return "screenshot";
        case UIActionKind::photo_captured: return "photo_captured";
        case UIActionKind::photo_opened: return "photo_opened";
        case UIActionKind::pinch_zoom: return "pinch_zoom";
        case UIActionKind::other: return "other";
    }
    return "other";
}

namespace {

template <typename Enum>
std::optional<Enum> parse_enum(std::string_view text, std::initializer_list<Enum> values) {
    for (Enum v : values)
        if (text == to_string(v)) return v;
    return std::nullopt;
}

} // namespace

std::optional<SignalKind> parse_signal_kind(std::string_view text) {
    return parse_enum(text, {SignalKind::viewing_distance, SignalKind::audio, SignalKind::button,
                             SignalKind::ui_action, SignalKind::setting});
}

std::optional<AudioOutput> parse_audio_output(std::string_view text) {
    return parse_enum(text, {AudioOutput::speaker, AudioOutput::headphones, AudioOutput::other});
}

std::optional<Button> parse_button(std::string_view text) {
    return parse_enum(text, {Button::side, Button::home, Button::volume_up, Button::volume_down});
}

std::optional<UIActionKind> parse_ui_action_kind(std::string_view text) {
    return parse_enum(text, {UIActionKind::app_open, UIActionKind::screenshot,
                             UIActionKind::photo_captured, UIActionKind::photo_opened,
                             UIActionKind::pinch_zoom, UIActionKind::other});
}

namespace {

[[noreturn]] void fail(const std::string& message, int lineno) {
    throw ParseError(message, lineno);
}

double require_number(const json& j, const char* field, int lineno) {
    if (!j.contains(field)) fail(std::string("missing field '") + field + "'", lineno);
    const json& v = j.at(field);
    if (!v.is_number()) fail(std::string("field '") + field + "' must be a number", lineno);
    return v.get<double>();
}

std::string require_string(const json& j, const char* field, int lineno) {
    if (!j.contains(field)) fail(std::string("missing field '") + field + "'", lineno);
    const json& v = j.at(field);
    if (!v.is_string()) fail(std::string("field '") + field + "' must be a string", lineno);
    return v.get<std::string>();
}

bool require_bool(const json& j, const char* field, int lineno) {
    if (!j.contains(field)) fail(std::string("missing field '") + field + "'", lineno);
    const json& v = j.at(field);
    if (!v.is_boolean()) fail(std::string("field '") + field + "' must be a boolean", lineno);
    return v.get<bool>();
}

void check_fields(const json& j, const std::set<std::string>& allowed, bool lenient, int lineno) {
    if (lenient) return;
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            fail("unknown field '" + item.key() + "'", lineno);
}

TraceMeta parse_meta(const json& j, bool lenient, int lineno) {
    if (!j.is_object()) fail("meta must be an object", lineno);
    check_fields(j, {"user_id", "session_id", "initial_settings"}, lenient, lineno);
    TraceMeta meta;
    if (j.contains("user_id")) meta.user_id = require_string(j, "user_id", lineno);
    if (j.contains("session_id")) meta.session_id = require_string(j, "session_id", lineno);
    if (j.contains("initial_settings")) {
        const json& arr = j.at("initial_settings");
        if (!arr.is_array()) fail("initial_settings must be an array", lineno);
        for (const json& f : arr) {
            if (!f.is_string() || !is_valid_feature_id(f.get<std::string>()))
                fail("initial_settings entries must be feature ids", lineno);
            meta.initial_settings.push_back(f.get<std::string>());
        }
    }
    return meta;
}

SignalPayload parse_payload(const json& j, SignalKind kind, bool lenient, int lineno) {
    switch (kind) {
        case SignalKind::viewing_distance: {
            check_fields(j, {"t", "kind", "m"}, lenient, lineno);
            double m = require_number(j, "m", lineno);
            if (!(m > 0.0) || !std::isfinite(m)) fail("m must be a positive number", lineno);
            return ViewingDistance{m};
        }
        case SignalKind::audio: {
            check_fields(j, {"t", "kind", "playing", "volume", "output"}, lenient, lineno);
            AudioSnapshot snap;
            snap.playing = require_bool(j, "playing", lineno);
            snap.volume = require_number(j, "volume", lineno);
            if (!(snap.volume >= 0.0 && snap.volume <= 1.0))
                fail("volume must be within [0,1]", lineno);
            auto output = parse_audio_output(require_string(j, "output", lineno));
            if (!output) fail("unknown output device", lineno);
            snap.output = *output;
            return snap;
        }
        case SignalKind::button: {
            check_fields(j, {"t", "kind", "button"}, lenient, lineno);
            auto button = parse_button(require_string(j, "button", lineno));
            if (!button) fail("unknown button", lineno);
            return ButtonPress{*button};
        }
        case SignalKind::ui_action: {
            check_fields(j, {"t", "kind", "action", "app"}, lenient, lineno);
            UIAction action;
            auto a = parse_ui_action_kind(require_string(j, "action", lineno));
            if (!a) fail("unknown action", lineno);
            action.action = *a;
            if (j.contains("app")) action.app = require_string(j, "app", lineno);
            return action;
        }
        case SignalKind::setting: {
            check_fields(j, {"t", "kind", "feature", "enabled"}, lenient, lineno);
            SettingChange change;
            change.feature = require_string(j, "feature", lineno);
            if (!is_valid_feature_id(change.feature))
                fail("invalid feature id: '" + change.feature + "'", lineno);
            change.enabled = require_bool(j, "enabled", lineno);
            return change;
        }
    }
    fail("unknown kind", lineno);
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

} // namespace

Trace parse_trace(const std::string& text, const TraceParseOptions& opts) {
    Trace trace;
    std::istringstream ss(text);
    std::string line;
    int lineno = 0;
    bool seen_event = false;
    bool seen_meta = false;
    double last_t = 0.0;

    while (std::getline(ss, line)) {
        ++lineno;
        if (blank(line)) continue;

        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            fail(std::string("invalid JSON: ") + e.what(), lineno);
        }
        if (!j.is_object()) fail("each line must be a JSON object", lineno);

        if (j.contains("meta")) {
            if (seen_meta || seen_event) fail("meta line is only allowed first", lineno);
            check_fields(j, {"meta"}, opts.lenient, lineno);
            trace.meta = parse_meta(j.at("meta"), opts.lenient, lineno);
            seen_meta = true;
            continue;
        }

        SignalEvent event;
        event.t = require_number(j, "t", lineno);
        if (!(event.t >= 0.0) || !std::isfinite(event.t))
            fail("t must be non-negative", lineno);
        if (seen_event && event.t < last_t) fail("non-monotone timestamp", lineno);

        auto kind = parse_signal_kind(require_string(j, "kind", lineno));
        if (!kind) fail("unknown kind: '" + j.at("kind").get<std::string>() + "'", lineno);
        event.payload = parse_payload(j, *kind, opts.lenient, lineno);

        last_t = event.t;
        seen_event = true;
        trace.events.push_back(std::move(event));
    }
    return trace;
}

namespace {

json meta_to_json(const TraceMeta& meta) {
    json m = json::object();
    if (meta.user_id) m["user_id"] = *meta.user_id;
    if (meta.session_id) m["session_id"] = *meta.session_id;
    if (!meta.initial_settings.empty()) m["initial_settings"] = meta.initial_settings;
    return m;
}

json event_to_json(const SignalEvent& event) {
    json j;
    j["t"] = event.t;
    j["kind"] = std::string(to_string(event.kind()));
    std::visit(
        [&](const auto& payload) {
            using T = std::decay_t<decltype(payload)>;
            if constexpr (std::is_same_v<T, ViewingDistance>) {
                j["m"] = payload.meters;
            } else if constexpr (std::is_same_v<T, AudioSnapshot>) {
                j["playing"] = payload.playing;
                j["volume"] = payload.volume;
                j["output"] = std::string(to_string(payload.output));
            } else if constexpr (std::is_same_v<T, ButtonPress>) {
                j["button"] = std::string(to_string(payload.button));
            } else if constexpr (std::is_same_v<T, UIAction>) {
                j["action"] = std::string(to_string(payload.action));
                if (payload.app) j["app"] = *payload.app;
            } else if constexpr (std::is_same_v<T, SettingChange>) {
                j["feature"] = payload.feature;
                j["enabled"] = payload.enabled;
            }
        },
        event.payload);
    return j;
}

} // namespace

std::string serialize_trace(const Trace& trace) {
    std::string out;
    if (!trace.meta.empty()) {
        json m;
        m["meta"] = meta_to_json(trace.meta);
        out += m.dump();
        out += '\n';
    }
    for (const auto& event : trace.events) {
        out += event_to_json(event).dump();
        out += '\n';
    }
    return out;
}

std::vector<SignalEvent> filter_signal(const Trace& trace, SignalKind kind) {
    std::vector<SignalEvent> out;
    for (const auto& event : trace.events)
        if (event.kind() == kind) out.push_back(event);
    return out;
}

} // namespace needsense
