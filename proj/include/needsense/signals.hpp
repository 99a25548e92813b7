#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "needsense/catalog.hpp"

namespace needsense {

// Signal event model and the trace container.
//
// Trace file format: UTF-8, one JSON object per line. Every event line has a
// non-negative `t` (seconds since trace start, nondecreasing) and a `kind`:
//
//   {"t":0,"kind":"viewing_distance","m":0.36}
//   {"t":1,"kind":"audio","playing":true,"volume":0.5,"output":"speaker"}
//   {"t":2,"kind":"button","button":"side"}
//   {"t":3,"kind":"ui_action","action":"photo_captured","app":"camera"}
//   {"t":4,"kind":"setting","feature":"bold_text","enabled":true}
//
// An optional first line `{"meta":{"user_id":…,"session_id":…,
// "initial_settings":[…]}}` carries session metadata. Unknown extra fields
// are rejected unless parsing is lenient.

enum class SignalKind { viewing_distance, audio, button, ui_action, setting };

enum class AudioOutput { speaker, headphones, other };
enum class Button { side, home, volume_up, volume_down };
enum class UIActionKind { app_open, screenshot, photo_captured, photo_opened, pinch_zoom, other };

std::string_view to_string(SignalKind k);
std::string_view to_string(AudioOutput o);
std::string_view to_string(Button b);
std::string_view to_string(UIActionKind a);
std::optional<SignalKind> parse_signal_kind(std::string_view text);
std::optional<AudioOutput> parse_audio_output(std::string_view text);
std::optional<Button> parse_button(std::string_view text);
std::optional<UIActionKind> parse_ui_action_kind(std::string_view text);

struct ViewingDistance {
    double meters = 0.0; // > 0
    friend bool operator==(const ViewingDistance&, const ViewingDistance&) = default;
};

struct AudioSnapshot {
    bool playing = false;
    double volume = 0.0; // in [0,1]
    AudioOutput output = AudioOutput::speaker;
    friend bool operator==(const AudioSnapshot&, const AudioSnapshot&) = default;
};

struct ButtonPress {
    Button button = Button::side;
    friend bool operator==(const ButtonPress&, const ButtonPress&) = default;
};

struct UIAction {
    UIActionKind action = UIActionKind::other;
    std::optional<std::string> app;
    friend bool operator==(const UIAction&, const UIAction&) = default;
};

struct SettingChange {
    FeatureId feature;
    bool enabled = false;
    friend bool operator==(const SettingChange&, const SettingChange&) = default;
};

// Alternative order matches SignalKind.
using SignalPayload =
    std::variant<ViewingDistance, AudioSnapshot, ButtonPress, UIAction, SettingChange>;

struct SignalEvent {
    double t = 0.0; // seconds since trace start, >= 0
    SignalPayload payload;

    SignalKind kind() const { return static_cast<SignalKind>(payload.index()); }

    friend bool operator==(const SignalEvent&, const SignalEvent&) = default;
};

struct TraceMeta {
    std::optional<std::string> user_id;
    std::optional<std::string> session_id;
    std::vector<FeatureId> initial_settings;

    bool empty() const { return !user_id && !session_id && initial_settings.empty(); }

    friend bool operator==(const TraceMeta&, const TraceMeta&) = default;
};

// A finite, time-ordered record of signal events for one usage session.
// Immutable by convention after parse; equal timestamps keep document order.
struct Trace {
    std::vector<SignalEvent> events;
    TraceMeta meta;

    friend bool operator==(const Trace&, const Trace&) = default;
};

struct TraceParseOptions {
    bool lenient = false; // tolerate unknown extra fields
};

// Parses a line-delimited JSON trace document. Throws ParseError with the
// 1-based line number on malformed JSON, unknown kinds, field-range
// violations, or non-monotone timestamps.
Trace parse_trace(const std::string& text, const TraceParseOptions& opts = {});

// Canonical serialization: one compact JSON object per line, keys sorted,
// doubles in shortest round-trip form. serialize(parse(serialize(t))) is
// byte-identical to serialize(t).
std::string serialize_trace(const Trace& trace);

// Subsequence of events of the given kind, order and timestamps preserved.
std::vector<SignalEvent> filter_signal(const Trace& trace, SignalKind kind);

} // namespace needsense
