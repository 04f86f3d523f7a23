#include "kinecoach/compliance.hpp"

#include "kinecoach/numeric_tokens.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace kinecoach {

namespace {

using json = nlohmann::json;

struct Alias {
    std::string_view phrase;
    std::vector<std::string_view> features;
};

// Longest phrases first; matching is greedy and non-overlapping.
const std::vector<Alias>& aliases() {
    static const std::vector<Alias> table = [] {
        std::vector<Alias> a = {
            {"maximum racket velocity", {"racket_velocity_max"}},
            {"max racket velocity", {"racket_velocity_max"}},
            {"racket velocity", {"racket_velocity_max"}},
            {"racket head speed", {"racket_velocity_max"}},
            {"racket speed", {"racket_velocity_max"}},
            {"swing speed", {"racket_velocity_max"}},
            {"peak power", {"peak_power"}},
            {"power output", {"peak_power"}},
            {"rotation range", {"rotation_range_deg"}},
            {"range of rotation", {"rotation_range_deg"}},
            {"trunk rotation", {"rotation_range_deg"}},
            {"hip rotation", {"rotation_range_deg"}},
            {"rotation", {"rotation_range_deg"}},
            {"stroke duration", {"stroke_duration_frames", "stroke_duration_s"}},
            {"swing duration", {"stroke_duration_frames", "stroke_duration_s"}},
            {"duration", {"stroke_duration_frames", "stroke_duration_s"}},
            {"peak angular velocity", {"peak_angular_velocity"}},
            {"peak trunk angular velocity", {"peak_angular_velocity"}},
            {"angular velocity", {"peak_angular_velocity"}},
            {"rotational speed", {"peak_angular_velocity"}},
            {"impact timing", {"impact_timing_pct"}},
            {"contact timing", {"impact_timing_pct"}},
        };
        std::stable_sort(a.begin(), a.end(),
                         [](const Alias& x, const Alias& y) { return x.phrase.size() > y.phrase.size(); });
        return a;
    }();
    return table;
}

const std::vector<std::string_view> kHighWords = {"high",    "higher",    "highest", "excessive", "excessively",
                                                  "excess",  "above",     "exceeds", "exceeding", "exceeded",
                                                  "longer",  "larger",    "greater"};
const std::vector<std::string_view> kLowWords = {"low",       "lower",   "lowest",  "below",   "short",
                                                 "shorter",   "shortened", "insufficient", "reduced", "smaller",
                                                 "slower",    "deficient", "lacking"};

struct Span {
    std::size_t begin;
    std::size_t end;
};

struct Mention {
    Span span;
    const Alias* alias;
};

struct Claim {
    Span span;
    Verdict direction;
};

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool at_word_boundary(std::string_view text, std::size_t begin, std::size_t end) {
    return (begin == 0 || !is_word_char(text[begin - 1])) && (end >= text.size() || !is_word_char(text[end]));
}

std::vector<Span> find_words(std::string_view text, std::string_view word) {
    std::vector<Span> out;
    for (std::size_t pos = text.find(word); pos != std::string_view::npos; pos = text.find(word, pos + 1)) {
        if (at_word_boundary(text, pos, pos + word.size())) out.push_back({pos, pos + word.size()});
    }
    return out;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (;;) {
        const auto nl = text.find('\n', start);
        auto line = std::string(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return lines;
}

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// Clauses end at , ; ! ? and at periods that are not decimal points.
std::vector<std::string> split_clauses(std::string_view text) {
    std::vector<std::string> out;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        const bool decimal_point =
            c == '.' && i > 0 && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
            std::isdigit(static_cast<unsigned char>(text[i + 1]));
        if ((c == ',' || c == ';' || c == '!' || c == '?' || c == '\n' || c == '.') && !decimal_point) {
            if (!blank(current)) out.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!blank(current)) out.push_back(std::move(current));
    return out;
}

std::vector<Mention> find_mentions(std::string_view clause) {
    std::vector<Mention> out;
    for (const auto& alias : aliases()) {
        for (const auto& span : find_words(clause, alias.phrase)) {
            const bool overlaps = std::any_of(out.begin(), out.end(), [&](const Mention& m) {
                return span.begin < m.span.end && m.span.begin < span.end;
            });
            if (!overlaps) out.push_back({span, &alias});
        }
    }
    return out;
}

std::vector<Claim> find_claims(std::string_view clause) {
    std::vector<Claim> out;
    for (const auto w : kHighWords) {
        for (const auto& s : find_words(clause, w)) out.push_back({s, Verdict::High});
    }
    for (const auto w : kLowWords) {
        for (const auto& s : find_words(clause, w)) out.push_back({s, Verdict::Low});
    }
    return out;
}

std::size_t distance(const Span& a, const Span& b) {
    if (a.end <= b.begin) return b.begin - a.end;
    if (b.end <= a.begin) return a.begin - b.end;
    return 0;
}

const std::regex& score_pattern() {
    static const std::regex re(R"(^\s*[*_#]*\s*overall score\s*:\s*(\d+)\s*/\s*10\s*[*_]*\s*$)",
                               std::regex::icase);
    return re;
}

const std::regex& item_pattern() {
    static const std::regex re("^\\s*(?:\\d+[.)]|[-*]|\xE2\x80\xA2)\\s+\\S");
    return re;
}

const std::regex& marker_pattern() {
    static const std::regex re("^\\s*(?:\\d+[.)]|[-*]|\xE2\x80\xA2)\\s+");
    return re;
}

}  // namespace

ComplianceReport check_feedback(std::string_view text, const PromptBundle& bundle,
                                const std::vector<Finding>& findings) {
    ComplianceReport report;
    const auto lines = split_lines(text);

    // Constraint 1a: the score line.
    std::size_t first = 0;
    while (first < lines.size() && blank(lines[first])) ++first;
    std::size_t body_start = first;
    if (first < lines.size()) {
        std::smatch m;
        if (std::regex_match(lines[first], m, score_pattern())) {
            const int score = std::stoi(m[1].str().substr(0, 3));
            if (score >= 0 && score <= 10) {
                report.has_score_line = true;
                report.score = score;
                body_start = first + 1;
            }
        }
    }

    // Constraint 1b: three enumerated corrections.
    std::size_t section = lines.size();
    for (std::size_t i = body_start; i < lines.size(); ++i) {
        if (lowercase(lines[i]).find("correction") != std::string::npos && !std::regex_search(lines[i], item_pattern())) {
            section = i + 1;
            break;
        }
    }
    if (section == lines.size()) {
        // No heading: count numbered items anywhere in the body.
        static const std::regex numbered(R"(^\s*\d+[.)]\s+\S)");
        for (std::size_t i = body_start; i < lines.size(); ++i) {
            if (std::regex_search(lines[i], numbered)) ++report.correction_count;
        }
    } else {
        for (std::size_t i = section; i < lines.size(); ++i) {
            if (std::regex_search(lines[i], item_pattern())) ++report.correction_count;
        }
    }
    report.has_three_corrections = report.correction_count == 3;

    // Constraint 3: numbers must come from the prompt.
    std::string body;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (report.has_score_line && i == first) continue;
        const auto stripped = std::regex_replace(lines[i], marker_pattern(), "", std::regex_constants::format_first_only);
        for (const auto& token : extract_numeric_tokens(stripped)) {
            if (!matches_any(token, bundle.input_numbers) &&
                std::find(report.fabricated_numbers.begin(), report.fabricated_numbers.end(), token) ==
                    report.fabricated_numbers.end()) {
                report.fabricated_numbers.push_back(token);
            }
        }
        body += lines[i] + "\n";
    }

    // Constraint 2: each direction word binds to the nearest feature mention
    // in its clause; only claims opposite to a LOW/HIGH finding fail.
    for (const auto& clause : split_clauses(lowercase(body))) {
        const auto mentions = find_mentions(clause);
        if (mentions.empty()) continue;
        for (const auto& claim : find_claims(clause)) {
            const Mention* nearest = nullptr;
            for (const auto& m : mentions) {
                if (nearest == nullptr || distance(claim.span, m.span) < distance(claim.span, nearest->span) ||
                    (distance(claim.span, m.span) == distance(claim.span, nearest->span) &&
                     m.span.begin < nearest->span.begin)) {
                    nearest = &m;
                }
            }
            for (const auto feature : nearest->alias->features) {
                for (const auto& f : findings) {
                    if (f.feature != feature) continue;
                    if ((f.verdict == Verdict::Low || f.verdict == Verdict::High) && f.verdict != claim.direction) {
                        const auto note = std::string(feature) + ": text says " +
                                          std::string(to_string(claim.direction)) + ", finding is " +
                                          std::string(to_string(f.verdict));
                        if (std::find(report.direction_conflicts.begin(), report.direction_conflicts.end(), note) ==
                            report.direction_conflicts.end()) {
                            report.direction_conflicts.push_back(note);
                        }
                    }
                }
            }
        }
    }
    report.directions_consistent = report.direction_conflicts.empty();

    report.pass = report.format_ok() && report.directions_consistent && report.numbers_ok();
    return report;
}

json to_json(const ComplianceReport& r) {
    return {{"has_score_line", r.has_score_line},
            {"score", r.score ? json(*r.score) : json(nullptr)},
            {"correction_count", r.correction_count},
            {"has_three_corrections", r.has_three_corrections},
            {"directions_consistent", r.directions_consistent},
            {"direction_conflicts", r.direction_conflicts},
            {"fabricated_numbers", r.fabricated_numbers},
            {"pass", r.pass}};
}

}  // namespace kinecoach
