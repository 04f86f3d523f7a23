#pragma once

// Every piece of fixed prompt wording lives here. Numbers written into these
// strings become part of the user prompt and therefore of the set of numbers
// the model is allowed to repeat.

#include <string_view>

namespace kinecoach::prompt {

inline constexpr std::string_view kSystemPrompt = "You are a precise, evidence-based tennis coach.";

inline constexpr std::string_view kStrokeHeading = "Stroke type: ";
inline constexpr std::string_view kComparisonHeading = "Optimal-range comparison:";
inline constexpr std::string_view kRawFeaturesHeading = "Raw feature values:";
inline constexpr std::string_view kNoFindings = "(no reference comparisons available)";
inline constexpr std::string_view kUnavailable = "n/a";
inline constexpr std::string_view kUnknownStroke = "UNKNOWN";

inline constexpr std::string_view kInstructions =
    "Write feedback on this stroke in exactly this format:\n"
    "- First line: \"Overall Score: X/10\", where X is an integer from 0 (very poor) to 10 (perfect).\n"
    "- A concise diagnostic summary of 2–3 sentences.\n"
    "- The heading \"Actionable Corrections:\" followed by exactly three numbered, actionable corrections.\n"
    "Adhere strictly to the optimal-range comparison above: call a feature high or low only as it is "
    "labelled there. Do not fabricate numerical values; use only numbers that appear in this prompt.";

}  // namespace kinecoach::prompt
