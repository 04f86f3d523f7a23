#include "mock_server.hpp"

#include "kinecoach/feedback.hpp"
#include "kinecoach/numeric_tokens.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

using namespace kinecoach;
using Catch::Matchers::ContainsSubstring;

namespace {

FeatureSet example_features() {
    FeatureSet fs;
    fs.predicted_stroke = "forehand";
    fs.sample_rate_hz = 60.0;
    fs.values["racket_velocity_max"] = 20.0;
    fs.values["rotation_range_deg"] = 75.123;
    fs.values["stroke_duration_frames"] = 48.0;
    fs.values["peak_power"] = std::monostate{};
    return fs;
}

std::vector<Finding> example_findings(const FeatureSet& fs) {
    const auto table = parse_reference_table(nlohmann::json::parse(
        R"({"forehand": {"racket_velocity_max": {"lo": 25, "hi": 35}, "rotation_range_deg": {"lo": 40, "hi": 90}}})"));
    return compare_to_reference(fs, table);
}

FeedbackConfig config_for(const std::string& base) {
    FeedbackConfig c;
    c.api_key = "test-key";
    c.api_base = base;
    c.timeout = std::chrono::seconds(5);
    return c;
}

}  // namespace

TEST_CASE("prompt is built from findings and raw values") {
    const auto fs = example_features();
    const auto bundle = build_context_summary(fs, example_findings(fs));
    CHECK(bundle.system_prompt == "You are a precise, evidence-based tennis coach.");
    CHECK_THAT(bundle.user_prompt, ContainsSubstring("Stroke type: forehand"));
    CHECK_THAT(bundle.user_prompt, ContainsSubstring("- Racket velocity LOW: 20.00 vs optimal 25–35 (50.00% below range)"));
    CHECK_THAT(bundle.user_prompt, ContainsSubstring("- rotation_range_deg (deg): 75.12"));
    CHECK_THAT(bundle.user_prompt, ContainsSubstring("- peak_power (W/kg): n/a"));
    CHECK_THAT(bundle.user_prompt, ContainsSubstring("- stroke_duration_frames (frames at 60fps): 48.00"));
    CHECK_THAT(bundle.user_prompt, ContainsSubstring("Overall Score: X/10"));
    CHECK_THAT(bundle.user_prompt, ContainsSubstring("Actionable Corrections:"));
    CHECK(bundle.input_numbers.count("20.00"));
    CHECK(bundle.input_numbers.count("75.12"));
    CHECK(bundle.input_numbers.count("60"));
}

TEST_CASE("prompt construction is deterministic") {
    const auto fs = example_features();
    const auto a = build_context_summary(fs, example_findings(fs));
    const auto b = build_context_summary(fs, example_findings(fs));
    CHECK(a == b);
    CHECK(render_prompt(a) == render_prompt(b));
}

TEST_CASE("unknown stroke and empty findings still produce a prompt") {
    FeatureSet fs;
    const auto bundle = build_context_summary(fs, {});
    CHECK_THAT(bundle.user_prompt, ContainsSubstring("Stroke type: UNKNOWN"));
    CHECK_THAT(bundle.user_prompt, ContainsSubstring("racket_velocity_max (m/s): n/a"));
}

TEST_CASE("chat request carries the decoding settings") {
    const auto fs = example_features();
    const auto bundle = build_context_summary(fs, example_findings(fs));
    const auto req = build_chat_request(bundle, FeedbackConfig{});
    CHECK(req["model"] == "gpt-4o");
    CHECK(req["temperature"] == 0.2);
    CHECK(req["max_tokens"] == 120);
    CHECK(req["messages"][0]["role"] == "system");
    CHECK(req["messages"][1]["content"] == bundle.user_prompt);
}

TEST_CASE("missing key fails without touching the network") {
    MockServer poisoned(200, chat_reply("should never be seen"));
    FeedbackConfig c = config_for(poisoned.base());
    c.api_key.reset();
    const auto r = generate_feedback(build_context_summary(FeatureSet{}, {}), c);
    CHECK_FALSE(r.ok);
    CHECK(r.text == kMissingKeyMessage);
    CHECK(poisoned.hits() == 0);
}

TEST_CASE("successful call returns the message content") {
    MockServer server(200, chat_reply("Overall Score: 7/10"));
    const auto r = generate_feedback(build_context_summary(FeatureSet{}, {}), config_for(server.base()));
    CHECK(r.ok);
    CHECK(r.text == "Overall Score: 7/10");
    CHECK(server.hits() == 1);
    CHECK(server.last_path() == "/v1/chat/completions");
    CHECK(server.last_auth() == "Bearer test-key");
    const auto sent = nlohmann::json::parse(server.last_body());
    CHECK(sent["max_tokens"] == 120);
}

TEST_CASE("server errors and malformed replies become error strings") {
    {
        MockServer server(500, R"({"error": "boom"})");
        const auto r = generate_feedback(build_context_summary(FeatureSet{}, {}), config_for(server.base()));
        CHECK_FALSE(r.ok);
        CHECK(r.text == "error: API returned HTTP 500 (server error)");
    }
    {
        MockServer server(200, "not json");
        const auto r = generate_feedback(build_context_summary(FeatureSet{}, {}), config_for(server.base()));
        CHECK(r.text == "error: API response is not valid JSON");
    }
    {
        MockServer server(200, R"({"choices": []})");
        const auto r = generate_feedback(build_context_summary(FeatureSet{}, {}), config_for(server.base()));
        CHECK(r.text == "error: API response has no message content");
    }
    {
        MockServer server(429, "{}");
        const auto r = generate_feedback(build_context_summary(FeatureSet{}, {}), config_for(server.base()));
        CHECK_THAT(r.text, ContainsSubstring("429"));
    }
}

TEST_CASE("unreachable endpoint is reported, not thrown") {
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    const auto r = generate_feedback(build_context_summary(FeatureSet{}, {}),
                                     config_for("http://127.0.0.1:" + std::to_string(port)));
    CHECK_FALSE(r.ok);
    CHECK_THAT(r.text, ContainsSubstring("error: request failed"));
}

TEST_CASE("numeric token extraction and matching") {
    const auto tokens = extract_numeric_tokens("Score 4/10, speed 20.00 m/s at 60fps, -3.5 and 1e5");
    CHECK(tokens == std::vector<std::string>{"4", "10", "20.00", "60", "3.5", "1", "5"});
    CHECK(numbers_match("20", "20.00"));
    CHECK_FALSE(numbers_match("42.7", "42.0"));
    CHECK(matches_any("75.12", {"1", "75.12"}));
}
