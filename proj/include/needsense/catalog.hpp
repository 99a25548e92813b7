#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace needsense {

// Symbolic accessibility-feature identifier, snake_case ("larger_text").
using FeatureId = std::string;

bool is_valid_feature_id(std::string_view id);

enum class Category { vision, hearing, physical_motor, general };

// How a feature can be detected. `required` marks features whose users could
// not operate the device without them; those are never recommendation targets.
enum class Strategy { required, statistical, near_miss, sequence, grouping };

std::string_view to_string(Category c);
std::string_view to_string(Strategy s);
std::optional<Category> parse_category(std::string_view text);
std::optional<Strategy> parse_strategy(std::string_view text);

struct FeatureEntry {
    FeatureId feature;
    Category category = Category::general;
    std::set<Strategy> strategies;
    std::optional<int> group;

    bool required_only() const {
        return strategies.size() == 1 && strategies.count(Strategy::required) == 1;
    }

    friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

// Directional implication: enabling `antecedent` suggests `consequent`.
struct GroupRule {
    FeatureId antecedent;
    FeatureId consequent;

    friend auto operator<=>(const GroupRule&, const GroupRule&) = default;
};

class FeatureCatalog {
public:
    FeatureCatalog() = default;

    // Validates all catalog invariants (unique ids, resolvable group rules,
    // no self-implications or duplicate pairs, no orphan group numbers).
    // Throws ParseError on violation.
    FeatureCatalog(std::vector<FeatureEntry> entries, std::vector<GroupRule> group_rules);

    const std::vector<FeatureEntry>& entries() const { return entries_; }
    const std::vector<GroupRule>& group_rules() const { return group_rules_; }
    const FeatureEntry* find(const FeatureId& id) const;
    bool contains(const FeatureId& id) const { return find(id) != nullptr; }

    friend bool operator==(const FeatureCatalog&, const FeatureCatalog&) = default;

private:
    std::vector<FeatureEntry> entries_;
    std::vector<GroupRule> group_rules_;
};

// Parses a catalog document. One statement per line:
//   feature <id> category=<vision|hearing|physical_motor|general> strategies=<comma list> [group=<int>]
//   group <antecedent> => <consequent>
// `#` starts a comment; blank lines are ignored. Throws ParseError.
FeatureCatalog load_catalog(const std::string& text);

// The three implications shipped with the default configuration.
std::vector<GroupRule> default_group_rules();

// Built-in catalog covering every feature the default rule set targets.
FeatureCatalog default_catalog();

} // namespace needsense
