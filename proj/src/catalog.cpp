#include "needsense/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "needsense/errors.hpp"

namespace needsense {

bool is_valid_feature_id(std::string_view id) {
    if (id.empty()) return false;
    if (!(id.front() >= 'a' && id.front() <= 'z')) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::vision: return "vision";
        case Category::hearing: return "hearing";
        case Category::physical_motor: return "physical_motor";
        case Category::general: return "general";
    }
    return "general";
}

std::string_view to_string(Strategy s) {
    switch (s) {
        case Strategy::required: return "required";
        case Strategy::statistical: return "statistical";
        case Strategy::near_miss: return "near_miss";
        case Strategy::sequence: return "sequence";
        case Strategy::grouping: return "grouping";
    }
    return "required";
}

std::optional<Category> parse_category(std::string_view text) {
    for (auto c : {Category::vision, Category::hearing, Category::physical_motor, Category::general})
        if (text == to_string(c)) return c;
    return std::nullopt;
}

std::optional<Strategy> parse_strategy(std::string_view text) {
    for (auto s : {Strategy::required, Strategy::statistical, Strategy::near_miss,
                   Strategy::sequence, Strategy::grouping})
        if (text == to_string(s)) return s;
    return std::nullopt;
}

FeatureCatalog::FeatureCatalog(std::vector<FeatureEntry> entries, std::vector<GroupRule> group_rules)
    : entries_(std::move(entries)), group_rules_(std::move(group_rules)) {
    std::unordered_set<std::string> ids;
    std::map<int, int> group_sizes;
    for (const auto& e : entries_) {
        if (!is_valid_feature_id(e.feature))
            throw ParseError("invalid feature id: '" + e.feature + "'");
        if (!ids.insert(e.feature).second)
            throw ParseError("duplicate feature id: '" + e.feature + "'");
        if (e.group) ++group_sizes[*e.group];
    }
    for (const auto& e : entries_) {
        if (e.group && group_sizes[*e.group] < 2)
            throw ParseError("feature '" + e.feature + "' is alone in group " +
                             std::to_string(*e.group));
    }
    std::set<std::pair<FeatureId, FeatureId>> pairs;
    for (const auto& g : group_rules_) {
        if (!ids.count(g.antecedent))
            throw ParseError("group rule references unknown feature: '" + g.antecedent + "'");
        if (!ids.count(g.consequent))
            throw ParseError("group rule references unknown feature: '" + g.consequent + "'");
        if (g.antecedent == g.consequent)
            throw ParseError("self-implication: '" + g.antecedent + "'");
        if (!pairs.insert({g.antecedent, g.consequent}).second)
            throw ParseError("duplicate group rule: '" + g.antecedent + " => " + g.consequent + "'");
    }
}

const FeatureEntry* FeatureCatalog::find(const FeatureId& id) const {
    for (const auto& e : entries_)
        if (e.feature == id) return &e;
    return nullptr;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

FeatureEntry parse_feature_line(const std::vector<std::string>& toks, int lineno) {
    if (toks.size() < 2) throw ParseError("feature statement needs an id", lineno);
    FeatureEntry entry;
    entry.feature = toks[1];
    if (!is_valid_feature_id(entry.feature))
        throw ParseError("invalid feature id: '" + entry.feature + "'", lineno);

    bool have_category = false;
    bool have_strategies = false;
    for (std::size_t i = 2; i < toks.size(); ++i) {
        const std::string& tok = toks[i];
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value, found '" + tok + "'", lineno);
        std::string key = tok.substr(0, eq);
        std::string value = tok.substr(eq + 1);
        if (key == "category") {
            if (have_category) throw ParseError("duplicate category clause", lineno);
            auto c = parse_category(value);
            if (!c) throw ParseError("unknown category: '" + value + "'", lineno);
            entry.category = *c;
            have_category = true;
        } else if (key == "strategies") {
            if (have_strategies) throw ParseError("duplicate strategies clause", lineno);
            std::size_t pos = 0;
            while (pos <= value.size()) {
                auto comma = value.find(',', pos);
                std::string item = value.substr(pos, comma == std::string::npos ? std::string::npos
                                                                                : comma - pos);
                auto s = parse_strategy(item);
                if (!s) throw ParseError("unknown strategy: '" + item + "'", lineno);
                entry.strategies.insert(*s);
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            have_strategies = true;
        } else if (key == "group") {
            if (entry.group) throw ParseError("duplicate group clause", lineno);
            try {
                std::size_t used = 0;
                entry.group = std::stoi(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            } catch (const std::exception&) {
                throw ParseError("group must be an integer, found '" + value + "'", lineno);
            }
        } else {
            throw ParseError("unknown clause '" + key + "' in feature statement", lineno);
        }
    }
    if (!have_category) throw ParseError("feature statement missing category", lineno);
    if (!have_strategies) throw ParseError("feature statement missing strategies", lineno);
    return entry;
}

GroupRule parse_group_line(const std::vector<std::string>& toks, int lineno) {
    if (toks.size() != 4 || toks[2] != "=>")
        throw ParseError("group statement must be: group <antecedent> => <consequent>", lineno);
    if (!is_valid_feature_id(toks[1]))
        throw ParseError("invalid feature id: '" + toks[1] + "'", lineno);
    if (!is_valid_feature_id(toks[3]))
        throw ParseError("invalid feature id: '" + toks[3] + "'", lineno);
    if (toks[1] == toks[3]) throw ParseError("self-implication: '" + toks[1] + "'", lineno);
    return GroupRule{toks[1], toks[3]};
}

} // namespace

FeatureCatalog load_catalog(const std::string& text) {
    std::vector<FeatureEntry> entries;
    std::vector<GroupRule> groups;

    std::istringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (toks[0] == "feature") {
            entries.push_back(parse_feature_line(toks, lineno));
        } else if (toks[0] == "group") {
            groups.push_back(parse_group_line(toks, lineno));
        } else {
            throw ParseError("unknown statement '" + toks[0] + "' (expected feature or group)",
                             lineno);
        }
    }
    return FeatureCatalog(std::move(entries), std::move(groups));
}

std::vector<GroupRule> default_group_rules() {
    return {
        {"assistive_touch", "side_button"},
        {"closed_captioning", "type_to_siri"},
        {"bold_text", "larger_text"},
    };
}

FeatureCatalog default_catalog() {
    using enum Strategy;
    std::vector<FeatureEntry> entries = {
        {"larger_text", Category::vision, {statistical, grouping}, 3},
        {"bold_text", Category::vision, {grouping}, 3},
        {"zoom", Category::vision, {statistical}, std::nullopt},
        {"magnifier", Category::vision, {sequence}, std::nullopt},
        {"voice_over", Category::vision, {required}, std::nullopt},
        {"subtitles_captions", Category::hearing, {statistical}, std::nullopt},
        {"closed_captioning", Category::hearing, {grouping}, 2},
        {"type_to_siri", Category::general, {grouping}, 2},
        {"assistive_touch", Category::physical_motor, {grouping}, 1},
        {"side_button", Category::physical_motor, {grouping}, 1},
        {"side_button_click_speed", Category::physical_motor, {near_miss}, std::nullopt},
    };
    return FeatureCatalog(std::move(entries), default_group_rules());
}

} // namespace needsense
