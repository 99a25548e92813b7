#include "needsense/policy.hpp"

#include <sstream>
#include <unordered_set>

#include "needsense/errors.hpp"

namespace needsense {

TemplateMap default_templates() {
    return {
        {"larger_text", "Did you know you can adjust the font size?"},
        {"subtitles_captions", "Did you know you can turn on subtitles and captions?"},
        {"side_button_click_speed", "Did you know you can allow more time between side-button clicks?"},
        {"magnifier", "Did you know you can use your camera as a magnifier?"},
        {"side_button", "Did you know you can customize how the side button works?"},
        {"type_to_siri", "Did you know you can type your questions to Siri?"},
        {"zoom", "Did you know you can zoom in on the screen?"},
    };
}

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

TemplateMap parse_templates(const std::string& text) {
    TemplateMap map;
    std::istringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'feature_id = message text'", lineno);
        std::string id = trim(stripped.substr(0, eq));
        std::string message = trim(stripped.substr(eq + 1));
        if (!is_valid_feature_id(id)) throw ParseError("invalid feature id: '" + id + "'", lineno);
        if (message.empty()) throw ParseError("empty message for '" + id + "'", lineno);
        if (map.count(id)) throw ParseError("duplicate template for '" + id + "'", lineno);
        map[id] = message;
    }
    return map;
}

std::vector<Recommendation> surface(const std::vector<Firing>& firings, const Trace& trace,
                                    const PolicyConfig& cfg, const TemplateMap& templates) {
    std::unordered_set<FeatureId> enabled(trace.meta.initial_settings.begin(),
                                          trace.meta.initial_settings.end());
    std::size_t next_event = 0;
    std::map<FeatureId, double> last_emitted;
    std::vector<Recommendation> out;

    for (const Firing& firing : firings) {
        // Fold setting changes up to the firing time.
        while (next_event < trace.events.size() && trace.events[next_event].t <= firing.t) {
            if (const auto* change = std::get_if<SettingChange>(&trace.events[next_event].payload)) {
                if (change->enabled)
                    enabled.insert(change->feature);
                else
                    enabled.erase(change->feature);
            }
            ++next_event;
        }

        if (cfg.suppress_enabled && enabled.count(firing.feature)) continue;
        auto prev = last_emitted.find(firing.feature);
        if (prev != last_emitted.end() && firing.t - prev->second < cfg.cooldown) continue;
        if (out.size() >= static_cast<std::size_t>(cfg.max_per_trace)) break;

        auto tmpl = templates.find(firing.feature);
        std::string message = tmpl != templates.end()
                                  ? tmpl->second
                                  : "Did you know about " + firing.feature + "?";
        out.push_back(Recommendation{firing.feature, firing.t, std::move(message), firing.rule,
                                     firing.evidence});
        last_emitted[firing.feature] = firing.t;
    }
    return out;
}

} // namespace needsense
