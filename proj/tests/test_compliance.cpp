#include "backhand_case.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace kinecoach;

TEST_CASE("the fixture findings match the published example") {
    const auto c = backhand_case::make();
    auto verdict = [&](const std::string& key) {
        for (const auto& f : c.findings) {
            if (f.feature == key) return f.verdict;
        }
        return Verdict::Missing;
    };
    CHECK(verdict("rotation_range_deg") == Verdict::High);
    CHECK(verdict("stroke_duration_frames") == Verdict::Low);
    CHECK(verdict("peak_angular_velocity") == Verdict::Low);
    CHECK(verdict("racket_velocity_max") == Verdict::Ok);
}

TEST_CASE("published feedback passes every constraint") {
    const auto c = backhand_case::make();
    const auto r = check_feedback(c.feedback, c.bundle, c.findings);
    CHECK(r.has_score_line);
    CHECK(r.score == 4);
    CHECK(r.correction_count == 3);
    CHECK(r.directions_consistent);
    CHECK(r.fabricated_numbers.empty());
    CHECK(r.pass);
}

TEST_CASE("each constructed violation fails only its own constraint") {
    const auto c = backhand_case::make();

    const auto no_score = check_feedback(backhand_case::without_score_line(c.feedback), c.bundle, c.findings);
    CHECK_FALSE(no_score.has_score_line);
    CHECK(no_score.has_three_corrections);
    CHECK(no_score.directions_consistent);
    CHECK(no_score.numbers_ok());
    CHECK_FALSE(no_score.pass);

    const auto flipped = check_feedback(backhand_case::with_direction_flip(c.feedback), c.bundle, c.findings);
    CHECK(flipped.format_ok());
    CHECK_FALSE(flipped.directions_consistent);
    REQUIRE(flipped.direction_conflicts.size() == 1);
    CHECK(flipped.direction_conflicts[0] == "rotation_range_deg: text says LOW, finding is HIGH");
    CHECK(flipped.numbers_ok());
    CHECK_FALSE(flipped.pass);

    const auto fabricated = check_feedback(backhand_case::with_fabricated_number(c.feedback), c.bundle, c.findings);
    CHECK(fabricated.format_ok());
    CHECK(fabricated.directions_consistent);
    CHECK(fabricated.fabricated_numbers == std::vector<std::string>{"42.7"});
    CHECK_FALSE(fabricated.pass);
}

TEST_CASE("score line variants") {
    const auto c = backhand_case::make();
    const std::string tail = "\nActionable Corrections:\n1. a\n2. b\n3. c\n";
    CHECK(check_feedback("**Overall Score: 10/10**" + tail, c.bundle, c.findings).score == 10);
    CHECK(check_feedback("overall score : 0 / 10" + tail, c.bundle, c.findings).has_score_line);
    CHECK_FALSE(check_feedback("Overall Score: 11/10" + tail, c.bundle, c.findings).has_score_line);
    CHECK_FALSE(check_feedback("Intro\nOverall Score: 5/10" + tail, c.bundle, c.findings).has_score_line);
}

TEST_CASE("correction counting") {
    const auto c = backhand_case::make();
    auto count = [&](const std::string& text) { return check_feedback(text, c.bundle, c.findings).correction_count; };
    CHECK(count("Overall Score: 5/10\nActionable Corrections:\n1. a\n2. b\n") == 2);
    CHECK(count("Overall Score: 5/10\nActionable Corrections:\n- a\n- b\n- c\n- d\n") == 4);
    CHECK(count("Overall Score: 5/10\nFix these:\n1) a\n2) b\n3) c\n") == 3);
}

TEST_CASE("directions bind to the nearest feature in the clause") {
    const auto c = backhand_case::make();
    const std::string head = "Overall Score: 4/10\nActionable Corrections:\n1. a\n2. b\n3. c\n";
    auto consistent = [&](const std::string& body) {
        return check_feedback(head + body, c.bundle, c.findings).directions_consistent;
    };
    CHECK(consistent("Rotation is too high, but angular velocity is low."));
    CHECK_FALSE(consistent("Rotation is too low."));
    CHECK_FALSE(consistent("Your stroke duration is longer than it should be."));
    // Racket velocity is OK, so no claim about it can conflict.
    CHECK(consistent("Racket velocity could be higher."));
    // A direction word with no feature in its clause is ignored.
    CHECK(consistent("Keep the lower body stable."));
}
