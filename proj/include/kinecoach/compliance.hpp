#pragma once

#include "kinecoach/feedback.hpp"
#include "kinecoach/grounding.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kinecoach {

struct ComplianceReport {
    bool has_score_line = false;
    std::optional<int> score;
    std::size_t correction_count = 0;
    bool has_three_corrections = false;
    bool directions_consistent = true;
    // "<feature>: text says HIGH, finding is LOW" style notes.
    std::vector<std::string> direction_conflicts;
    std::vector<std::string> fabricated_numbers;
    bool pass = false;

    bool format_ok() const { return has_score_line && has_three_corrections; }
    bool numbers_ok() const { return fabricated_numbers.empty(); }
};

// Checks the three output constraints:
//  1. first non-empty line is "Overall Score: X/10" (0 <= X <= 10) and the
//     corrections section enumerates exactly three items;
//  2. every high/low claim about a feature agrees with its finding;
//  3. every number outside the score line and list markers appears in the
//     prompt (two-decimal matching).
ComplianceReport check_feedback(std::string_view text, const PromptBundle& bundle,
                                const std::vector<Finding>& findings);

nlohmann::json to_json(const ComplianceReport& report);

}  // namespace kinecoach
