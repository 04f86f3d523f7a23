#pragma once

#include "kinecoach/grounding.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kinecoach {

struct PromptBundle {
    std::string system_prompt;
    std::string user_prompt;
    // Every numeric token of user_prompt.
    std::set<std::string> input_numbers;

    bool operator==(const PromptBundle&) const = default;
};

PromptBundle build_context_summary(const FeatureSet& features, const std::vector<Finding>& findings);
PromptBundle build_context_summary(const FeatureReport& report, const std::vector<Finding>& findings);

// "SYSTEM:\n...\n\nUSER:\n..." as written to prompt.txt.
std::string render_prompt(const PromptBundle& bundle);

inline constexpr std::string_view kDefaultModel = "gpt-4o";
inline constexpr std::string_view kDefaultApiBase = "https://api.openai.com/v1";
inline constexpr std::string_view kMissingKeyMessage =
    "error: no API key configured (set KINECOACH_API_KEY); feedback was not generated";

struct FeedbackConfig {
    std::optional<std::string> api_key;
    std::string model{kDefaultModel};
    std::string api_base{kDefaultApiBase};
    double temperature = 0.2;
    int max_tokens = 120;
    std::chrono::seconds timeout{30};

    // Reads KINECOACH_API_KEY, KINECOACH_MODEL and KINECOACH_API_BASE.
    static FeedbackConfig from_environment();
};

struct FeedbackResult {
    std::string text;
    std::string model;
    double temperature = 0.0;
    int max_tokens = 0;
    bool ok = false;
};

nlohmann::json build_chat_request(const PromptBundle& bundle, const FeedbackConfig& config);

// One chat-completions call. Never throws: a missing key, transport failure or
// non-200 reply yields ok = false and a one-line "error: ..." text.
FeedbackResult generate_feedback(const PromptBundle& bundle, const FeedbackConfig& config) noexcept;

}  // namespace kinecoach
