#include "kinecoach/feedback.hpp"

#include "kinecoach/numeric_tokens.hpp"
#include "kinecoach/prompt_template.hpp"
#include "kinecoach/text.hpp"

#include <httplib.h>

#include <cstdlib>

namespace kinecoach {

namespace {

using json = nlohmann::json;

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;    // request path
};

Endpoint chat_endpoint(std::string_view base) {
    while (!base.empty() && base.back() == '/') base.remove_suffix(1);
    const auto scheme_end = base.find("://");
    const auto host_start = scheme_end == std::string_view::npos ? 0 : scheme_end + 3;
    const auto path_start = base.find('/', host_start);
    Endpoint ep;
    ep.origin = std::string(base.substr(0, path_start));
    ep.path = (path_start == std::string_view::npos ? std::string() : std::string(base.substr(path_start))) +
              "/chat/completions";
    return ep;
}

std::string status_class(int status) {
    if (status >= 500) return "server error";
    if (status == 429) return "rate limited";
    if (status == 401 || status == 403) return "authentication error";
    if (status >= 400) return "client error";
    return "unexpected status";
}

FeedbackResult failure(const FeedbackConfig& config, std::string text) {
    return {std::move(text), config.model, config.temperature, config.max_tokens, false};
}

}  // namespace

PromptBundle build_context_summary(const FeatureSet& features, const std::vector<Finding>& findings) {
    PromptBundle bundle;
    bundle.system_prompt = std::string(prompt::kSystemPrompt);

    std::string user;
    user += std::string(prompt::kStrokeHeading) + features.predicted_stroke.value_or(std::string(prompt::kUnknownStroke)) +
            "\n\n";

    user += std::string(prompt::kComparisonHeading) + "\n";
    if (findings.empty()) user += std::string(prompt::kNoFindings) + "\n";
    for (const auto& f : findings) user += "- " + f.rendered + "\n";
    user += "\n";

    user += std::string(prompt::kRawFeaturesHeading) + "\n";
    for (const auto key : scalar_feature_keys()) {
        std::string units = feature_units(key);
        if (key == "stroke_duration_frames" && features.sample_rate_hz) {
            units = "frames at " + format_compact(*features.sample_rate_hz) + "fps";
        }
        std::optional<double> value;
        if (const auto it = features.values.find(std::string(key)); it != features.values.end()) {
            value = coerce_to_real(it->second);
        }
        user += "- " + std::string(key) + " (" + units + "): " +
                (value ? format_fixed2(*value) : std::string(prompt::kUnavailable)) + "\n";
    }
    user += "\n";
    user += std::string(prompt::kInstructions) + "\n";

    bundle.user_prompt = std::move(user);
    for (auto& token : extract_numeric_tokens(bundle.user_prompt)) bundle.input_numbers.insert(std::move(token));
    return bundle;
}

PromptBundle build_context_summary(const FeatureReport& report, const std::vector<Finding>& findings) {
    return build_context_summary(feature_set(report), findings);
}

std::string render_prompt(const PromptBundle& bundle) {
    return "SYSTEM:\n" + bundle.system_prompt + "\n\nUSER:\n" + bundle.user_prompt;
}

FeedbackConfig FeedbackConfig::from_environment() {
    FeedbackConfig config;
    config.api_key = env("KINECOACH_API_KEY");
    if (auto model = env("KINECOACH_MODEL")) config.model = std::move(*model);
    if (auto base = env("KINECOACH_API_BASE")) config.api_base = std::move(*base);
    return config;
}

json build_chat_request(const PromptBundle& bundle, const FeedbackConfig& config) {
    return {{"model", config.model},
            {"temperature", config.temperature},
            {"max_tokens", config.max_tokens},
            {"messages",
             json::array({{{"role", "system"}, {"content", bundle.system_prompt}},
                          {{"role", "user"}, {"content", bundle.user_prompt}}})}};
}

FeedbackResult generate_feedback(const PromptBundle& bundle, const FeedbackConfig& config) noexcept {
    try {
        if (!config.api_key) return failure(config, std::string(kMissingKeyMessage));

        const auto ep = chat_endpoint(config.api_base);
        httplib::Client client(ep.origin);
        if (!client.is_valid()) return failure(config, "error: invalid API base URL '" + config.api_base + "'");
        client.set_connection_timeout(config.timeout);
        client.set_read_timeout(config.timeout);
        client.set_write_timeout(config.timeout);
        client.set_bearer_token_auth(*config.api_key);

        const auto res = client.Post(ep.path, build_chat_request(bundle, config).dump(), "application/json");
        if (!res) return failure(config, "error: request failed (" + httplib::to_string(res.error()) + ")");
        if (res->status != 200) {
            return failure(config, "error: API returned HTTP " + std::to_string(res->status) + " (" +
                                       status_class(res->status) + ")");
        }
        const auto body = json::parse(res->body, nullptr, false);
        if (body.is_discarded()) return failure(config, "error: API response is not valid JSON");
        const auto* content = &body;
        for (const auto& step : {json("choices"), json(0), json("message"), json("content")}) {
            if (step.is_string() && content->is_object() && content->contains(step.get<std::string>())) {
                content = &(*content)[step.get<std::string>()];
            } else if (step.is_number() && content->is_array() && !content->empty()) {
                content = &(*content)[0];
            } else {
                return failure(config, "error: API response has no message content");
            }
        }
        if (!content->is_string()) return failure(config, "error: API response has no message content");
        return {content->get<std::string>(), config.model, config.temperature, config.max_tokens, true};
    } catch (const std::exception& e) {
        return failure(config, std::string("error: ") + e.what());
    } catch (...) {
        return failure(config, "error: unknown failure during feedback generation");
    }
}

}  // namespace kinecoach
