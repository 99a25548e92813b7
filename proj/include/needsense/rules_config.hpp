#pragma once

#include <string>

#include "needsense/detectors.hpp"

namespace needsense {

// Declarative rules language (`.a11yrules`). Tokens are whitespace-separated;
// `:`, `->` and `=>` also self-delimit; `#` comments to end of line.
//
//   config  := { stmt }
//   stmt    := statrule | nmrule | seqrule | grouprule
//   statrule:= "statistical" NAME "signal" SIGNAL "sides" SIDES
//              "k" NUM "min_samples" INT "recommend" FEATURE
//   nmrule  := "nearmiss" NAME "button" BUTTON "ladder" NUM NUM NUM
//              ["level" LEVEL] ["min_count" INT] "recommend" FEATURE
//   seqrule := "sequence" NAME ":" STEP { "->" STEP } "window" NUM
//              "recommend" FEATURE
//   STEP    := ACTION ["within" NUM]
//   grouprule := "group" FEATURE "=>" FEATURE
//
// Clause order is fixed. Omitted optional clauses take the rule-type
// defaults. All steps of a sequence share one `within` value (stating
// conflicting values is an error; the first step takes none).

// Parses a rules document into a rule set in canonical (kind, name) order.
// Every diagnostic — syntax or semantic — carries a 1-based line and column.
RuleSet parse_rules(const std::string& text);

// Canonical form: rules sorted by (kind, name), one per line, all clauses
// explicit, numbers in shortest round-trip decimal. parse(print(rs)) == rs
// for any parse-produced rule set, and print(parse(text)) is idempotent.
std::string print_rules(const RuleSet& rules);

// The four built-in recommenders plus the default group implications.
RuleSet default_rules();

} // namespace needsense
