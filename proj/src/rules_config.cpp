#include "needsense/rules_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "needsense/errors.hpp"

namespace needsense {

namespace {

// --------------------------------------------------------------------------
// Lexer

struct Token {
    enum class Kind { word, number, colon, thin_arrow, fat_arrow };
    Kind kind = Kind::word;
    std::string text;
    double value = 0.0; // numbers only
    int line = 1;
    int col = 1;
};

struct TokenStream {
    std::vector<Token> tokens;
    int end_line = 1;
    int end_col = 1;
};

bool word_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool word_char(unsigned char c) {
    return word_start(c) || (c >= '0' && c <= '9');
}

bool digit(unsigned char c) {
    return c >= '0' && c <= '9';
}

TokenStream lex(const std::string& src) {
    TokenStream out;
    int line = 1, col = 1;
    std::size_t i = 0;
    const std::size_t n = src.size();

    auto advance = [&](std::size_t count) {
        while (count--) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };

    while (i < n) {
        unsigned char c = static_cast<unsigned char>(src[i]);
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < n && src[i] != '\n') advance(1);
            continue;
        }
        const int tl = line, tc = col;
        if (c == ':') {
            out.tokens.push_back({Token::Kind::colon, ":", 0.0, tl, tc});
            advance(1);
            continue;
        }
        if (c == '=') {
            if (i + 1 < n && src[i + 1] == '>') {
                out.tokens.push_back({Token::Kind::fat_arrow, "=>", 0.0, tl, tc});
                advance(2);
                continue;
            }
            throw ParseError("unexpected character '='", tl, tc);
        }
        if (c == '-' && i + 1 < n && src[i + 1] == '>') {
            out.tokens.push_back({Token::Kind::thin_arrow, "->", 0.0, tl, tc});
            advance(2);
            continue;
        }
        if (word_start(c)) {
            std::size_t j = i;
            while (j < n && word_char(static_cast<unsigned char>(src[j]))) ++j;
            out.tokens.push_back({Token::Kind::word, src.substr(i, j - i), 0.0, tl, tc});
            advance(j - i);
            continue;
        }
        if (c == '-' || c == '+' || c == '.' || digit(c)) {
            std::size_t j = i;
            if (src[j] == '-' || src[j] == '+') ++j;
            bool saw_exp = false;
            while (j < n) {
                unsigned char d = static_cast<unsigned char>(src[j]);
                if (digit(d) || d == '.') {
                    ++j;
                } else if ((d == 'e' || d == 'E') && !saw_exp) {
                    saw_exp = true;
                    ++j;
                    if (j < n && (src[j] == '+' || src[j] == '-')) ++j;
                } else {
                    break;
                }
            }
            std::string text = src.substr(i, j - i);
            const char* first = text.c_str();
            if (*first == '+') ++first; // from_chars takes no leading '+'
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(first, text.c_str() + text.size(), value);
            if (ec != std::errc() || ptr != text.c_str() + text.size() || !std::isfinite(value))
                throw ParseError("malformed number '" + text + "'", tl, tc);
            out.tokens.push_back({Token::Kind::number, text, value, tl, tc});
            advance(j - i);
            continue;
        }
        throw ParseError("unexpected character", tl, tc);
    }
    out.end_line = line;
    out.end_col = col;
    return out;
}

// --------------------------------------------------------------------------
// Parser

const char* kind_name(Token::Kind kind) {
    switch (kind) {
        case Token::Kind::word: return "identifier";
        case Token::Kind::number: return "number";
        case Token::Kind::colon: return "':'";
        case Token::Kind::thin_arrow: return "'->'";
        case Token::Kind::fat_arrow: return "'=>'";
    }
    return "token";
}

class Parser {
public:
    explicit Parser(const TokenStream& stream) : stream_(stream) {}

    bool at_end() const { return pos_ >= stream_.tokens.size(); }

    const Token* peek() const { return at_end() ? nullptr : &stream_.tokens[pos_]; }

    const Token& next(const std::string& expected) {
        if (at_end())
            throw ParseError("unexpected end of input, expected " + expected, stream_.end_line,
                             stream_.end_col);
        return stream_.tokens[pos_++];
    }

    const Token& expect(Token::Kind kind, const std::string& expected) {
        const Token& tok = next(expected);
        if (tok.kind != kind)
            throw ParseError("expected " + expected + ", found " + describe(tok), tok.line, tok.col);
        return tok;
    }

    void expect_keyword(const std::string& keyword) {
        const Token& tok = next("'" + keyword + "'");
        if (tok.kind != Token::Kind::word || tok.text != keyword)
            throw ParseError("expected '" + keyword + "', found " + describe(tok), tok.line,
                             tok.col);
    }

    bool peek_keyword(const std::string& keyword) const {
        const Token* tok = peek();
        return tok && tok->kind == Token::Kind::word && tok->text == keyword;
    }

    const Token& expect_number(const std::string& what) {
        return expect(Token::Kind::number, "number (" + what + ")");
    }

    int expect_int(const std::string& what) {
        const Token& tok = expect_number(what);
        if (tok.value != std::floor(tok.value) || std::abs(tok.value) > 1e9)
            throw ParseError(what + " must be an integer", tok.line, tok.col);
        return static_cast<int>(tok.value);
    }

    std::string expect_name() {
        const Token& tok = expect(Token::Kind::word, "rule name");
        return tok.text;
    }

    FeatureId expect_feature() {
        const Token& tok = expect(Token::Kind::word, "feature id");
        if (!is_valid_feature_id(tok.text))
            throw ParseError("invalid feature id: '" + tok.text + "'", tok.line, tok.col);
        return tok.text;
    }

    static std::string describe(const Token& tok) {
        return std::string(kind_name(tok.kind)) +
               (tok.kind == Token::Kind::word || tok.kind == Token::Kind::number
                    ? " '" + tok.text + "'"
                    : "");
    }

private:
    const TokenStream& stream_;
    std::size_t pos_ = 0;
};

struct NameRegistry {
    std::set<std::string> names;

    void add(const std::string& name, const Token& tok) {
        if (!names.insert(name).second)
            throw ParseError("duplicate rule name: '" + name + "'", tok.line, tok.col);
    }
};

StatisticalRule parse_statistical(Parser& p, NameRegistry& names) {
    StatisticalRule rule;
    const Token& name_tok = p.expect(Token::Kind::word, "rule name");
    rule.name = name_tok.text;
    names.add(rule.name, name_tok);

    p.expect_keyword("signal");
    const Token& signal_tok = p.expect(Token::Kind::word, "signal");
    auto signal = parse_stat_signal(signal_tok.text);
    if (!signal)
        throw ParseError("unknown signal '" + signal_tok.text +
                             "' (expected viewing_distance or audio_volume)",
                         signal_tok.line, signal_tok.col);
    rule.signal = *signal;

    p.expect_keyword("sides");
    const Token& sides_tok = p.expect(Token::Kind::word, "sides");
    auto sides = parse_sides(sides_tok.text);
    if (!sides)
        throw ParseError("unknown sides '" + sides_tok.text + "' (expected above, below or both)",
                         sides_tok.line, sides_tok.col);
    rule.sides = *sides;

    p.expect_keyword("k");
    const Token& k_tok = p.expect_number("k");
    if (!(k_tok.value > 0.0)) throw ParseError("k must be positive", k_tok.line, k_tok.col);
    rule.k_sigma = k_tok.value;

    p.expect_keyword("min_samples");
    const Token* ms_tok = p.peek();
    rule.min_samples = p.expect_int("min_samples");
    if (rule.min_samples < 1)
        throw ParseError("min_samples must be at least 1", ms_tok->line, ms_tok->col);

    p.expect_keyword("recommend");
    rule.recommend = p.expect_feature();
    return rule;
}

NearMissRule parse_near_miss(Parser& p, NameRegistry& names) {
    NearMissRule rule;
    const Token& name_tok = p.expect(Token::Kind::word, "rule name");
    rule.name = name_tok.text;
    names.add(rule.name, name_tok);

    p.expect_keyword("button");
    const Token& button_tok = p.expect(Token::Kind::word, "button");
    auto button = parse_button(button_tok.text);
    if (!button)
        throw ParseError("unknown button '" + button_tok.text + "'", button_tok.line,
                         button_tok.col);
    rule.button = *button;

    p.expect_keyword("ladder");
    const Token& ladder_tok = p.expect_number("ladder threshold");
    rule.t_default = ladder_tok.value;
    rule.t_slow = p.expect_number("ladder threshold").value;
    rule.t_slowest = p.expect_number("ladder threshold").value;
    if (!(rule.t_default > 0.0))
        throw ParseError("ladder values must be positive", ladder_tok.line, ladder_tok.col);
    if (!(rule.t_default < rule.t_slow && rule.t_slow < rule.t_slowest))
        throw ParseError("ladder must be strictly increasing", ladder_tok.line, ladder_tok.col);

    if (p.peek_keyword("level")) {
        p.expect_keyword("level");
        const Token& level_tok = p.expect(Token::Kind::word, "level");
        auto level = parse_click_level(level_tok.text);
        if (!level)
            throw ParseError("unknown level '" + level_tok.text +
                                 "' (expected default, slow or slowest)",
                             level_tok.line, level_tok.col);
        rule.current_level = *level;
    }
    if (p.peek_keyword("min_count")) {
        p.expect_keyword("min_count");
        const Token* tok = p.peek();
        rule.min_count = p.expect_int("min_count");
        if (rule.min_count < 1)
            throw ParseError("min_count must be at least 1", tok->line, tok->col);
    }

    p.expect_keyword("recommend");
    rule.recommend = p.expect_feature();
    return rule;
}

SequencePattern parse_sequence(Parser& p, NameRegistry& names) {
    SequencePattern rule;
    const Token& name_tok = p.expect(Token::Kind::word, "rule name");
    rule.name = name_tok.text;
    names.add(rule.name, name_tok);
    p.expect(Token::Kind::colon, "':'");

    std::optional<double> within;
    const Token* within_tok = nullptr;
    bool first_step = true;
    while (true) {
        const Token& action_tok = p.expect(Token::Kind::word, "action");
        auto action = parse_ui_action_kind(action_tok.text);
        if (!action)
            throw ParseError("unknown action '" + action_tok.text + "'", action_tok.line,
                             action_tok.col);
        rule.steps.push_back(*action);

        if (p.peek_keyword("within")) {
            const Token* kw = p.peek();
            p.expect_keyword("within");
            const Token& value_tok = p.expect_number("within");
            if (first_step)
                throw ParseError("the first step cannot take a 'within' clause", kw->line, kw->col);
            if (!(value_tok.value > 0.0))
                throw ParseError("within must be positive", value_tok.line, value_tok.col);
            if (within && *within != value_tok.value)
                throw ParseError("conflicting 'within' values; all steps share one",
                                 value_tok.line, value_tok.col);
            within = value_tok.value;
            within_tok = &value_tok;
        }
        first_step = false;

        const Token* tok = p.peek();
        if (tok && tok->kind == Token::Kind::thin_arrow) {
            p.next("'->'");
            continue;
        }
        break;
    }
    if (rule.steps.size() < 2)
        throw ParseError("sequence needs at least 2 steps", name_tok.line, name_tok.col);
    if (within) rule.per_step_within = *within;

    p.expect_keyword("window");
    const Token& window_tok = p.expect_number("window");
    if (!(window_tok.value > 0.0))
        throw ParseError("window must be positive", window_tok.line, window_tok.col);
    rule.window = window_tok.value;
    if (rule.per_step_within > rule.window) {
        const Token& at = within_tok ? *within_tok : window_tok;
        throw ParseError("per-step within exceeds window", at.line, at.col);
    }

    p.expect_keyword("recommend");
    rule.recommend = p.expect_feature();
    return rule;
}

GroupRule parse_group(Parser& p, std::set<std::pair<FeatureId, FeatureId>>& pairs) {
    const Token* first = p.peek();
    GroupRule rule;
    rule.antecedent = p.expect_feature();
    p.expect(Token::Kind::fat_arrow, "'=>'");
    rule.consequent = p.expect_feature();
    if (rule.antecedent == rule.consequent)
        throw ParseError("self-implication: '" + rule.antecedent + "'", first->line, first->col);
    if (!pairs.insert({rule.antecedent, rule.consequent}).second)
        throw ParseError("duplicate group rule: '" + group_rule_name(rule) + "'", first->line,
                         first->col);
    return rule;
}

void canonical_sort(RuleSet& rules) {
    auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
    std::sort(rules.statistical.begin(), rules.statistical.end(), by_name);
    std::sort(rules.near_miss.begin(), rules.near_miss.end(), by_name);
    std::sort(rules.sequences.begin(), rules.sequences.end(), by_name);
    std::sort(rules.groups.begin(), rules.groups.end());
}

std::string format_number(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

} // namespace

RuleSet parse_rules(const std::string& text) {
    TokenStream stream = lex(text);
    Parser p(stream);
    RuleSet rules;
    NameRegistry names;
    std::set<std::pair<FeatureId, FeatureId>> pairs;

    while (!p.at_end()) {
        const Token& kw = p.next("rule keyword");
        if (kw.kind != Token::Kind::word)
            throw ParseError("expected 'statistical', 'nearmiss', 'sequence' or 'group', found " +
                                 Parser::describe(kw),
                             kw.line, kw.col);
        if (kw.text == "statistical") {
            rules.statistical.push_back(parse_statistical(p, names));
        } else if (kw.text == "nearmiss") {
            rules.near_miss.push_back(parse_near_miss(p, names));
        } else if (kw.text == "sequence") {
            rules.sequences.push_back(parse_sequence(p, names));
        } else if (kw.text == "group") {
            rules.groups.push_back(parse_group(p, pairs));
        } else {
            throw ParseError("expected 'statistical', 'nearmiss', 'sequence' or 'group', found '" +
                                 kw.text + "'",
                             kw.line, kw.col);
        }
    }
    canonical_sort(rules);
    return rules;
}

std::string print_rules(const RuleSet& rules) {
    RuleSet sorted = rules;
    canonical_sort(sorted);

    std::string out;
    for (const auto& r : sorted.statistical) {
        out += "statistical " + r.name + " signal " + std::string(to_string(r.signal)) +
               " sides " + std::string(to_string(r.sides)) + " k " + format_number(r.k_sigma) +
               " min_samples " + std::to_string(r.min_samples) + " recommend " + r.recommend +
               "\n";
    }
    for (const auto& r : sorted.near_miss) {
        out += "nearmiss " + r.name + " button " + std::string(to_string(r.button)) + " ladder " +
               format_number(r.t_default) + " " + format_number(r.t_slow) + " " +
               format_number(r.t_slowest) + " level " + std::string(to_string(r.current_level)) +
               " min_count " + std::to_string(r.min_count) + " recommend " + r.recommend + "\n";
    }
    for (const auto& r : sorted.sequences) {
        out += "sequence " + r.name + ":";
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
            if (i > 0) out += " ->";
            out += " " + std::string(to_string(r.steps[i]));
            if (i > 0) out += " within " + format_number(r.per_step_within);
        }
        out += " window " + format_number(r.window) + " recommend " + r.recommend + "\n";
    }
    for (const auto& g : sorted.groups) {
        out += "group " + g.antecedent + " => " + g.consequent + "\n";
    }
    return out;
}

RuleSet default_rules() {
    RuleSet rules;
    rules.statistical = {
        {"font_size", StatSignal::viewing_distance, Sides::both, 2.0, 30, "larger_text"},
        {"subtitles", StatSignal::audio_volume, Sides::above, 2.0, 30, "subtitles_captions"},
    };
    rules.near_miss = {
        {"side_click", Button::side, 0.25, 0.35, 0.50, ClickLevel::default_, 1,
         "side_button_click_speed"},
    };
    rules.sequences = {
        {"magnifier",
         {UIActionKind::photo_captured, UIActionKind::photo_opened, UIActionKind::pinch_zoom},
         60.0,
         120.0,
         "magnifier"},
    };
    rules.groups = default_group_rules();
    canonical_sort(rules);
    return rules;
}

} // namespace needsense
