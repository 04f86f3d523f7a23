#pragma once

#include "kinecoach/features.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kinecoach {

// Guard added to the interval width in the deviation formula.
inline constexpr double kDeviationEpsilon = 1e-9;

// The scalar features compared against reference ranges and listed in
// prompts, in their fixed order.
const std::vector<std::string_view>& scalar_feature_keys();
// Human-readable label, e.g. "Racket velocity".
std::string feature_label(std::string_view key);
std::string feature_units(std::string_view key);

// A feature as found in an arbitrary feature dictionary: absent, numeric, or
// text that may or may not parse as a number.
using FeatureValue = std::variant<std::monostate, double, std::string>;

std::optional<double> coerce_to_real(const FeatureValue& value);

struct FeatureSet {
    std::optional<std::string> predicted_stroke;
    std::map<std::string, FeatureValue> values;
    std::optional<double> sample_rate_hz;
};

FeatureSet feature_set(const FeatureReport& report);
// Accepts a serialized FeatureReport or any loose dictionary; the stroke is
// resolved from predicted_stroke, then classification.label.
FeatureSet feature_set_from_json(const nlohmann::json& j);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    std::string units;
    std::string provenance;
};

struct ReferenceTable {
    // stroke type -> feature -> interval; keys are lowercase.
    std::map<std::string, std::map<std::string, Interval>> strokes;
    std::vector<std::string> warnings;

    const std::map<std::string, Interval>* find(std::string_view stroke) const;
};

ReferenceTable parse_reference_table(const nlohmann::json& doc);
ReferenceTable load_reference_table(const std::filesystem::path& path);

enum class Verdict { Ok, Low, High, Missing };

std::string_view to_string(Verdict verdict);

struct Finding {
    std::string feature;
    std::optional<double> value;
    Verdict verdict = Verdict::Missing;
    // 0 when OK, absent when MISSING.
    std::optional<double> deviation_pct;
    std::optional<Interval> interval;
    std::string rendered;
};

// (lo - v) / (hi - lo + eps) * 100 below, (v - hi) / (hi - lo + eps) * 100
// above, 0 inside the closed interval.
double deviation_pct(double value, double lo, double hi);

std::vector<Finding> compare_to_reference(const FeatureSet& features, const ReferenceTable& table);
std::vector<Finding> compare_to_reference(const FeatureReport& report, const ReferenceTable& table);

std::string render_findings(const std::vector<Finding>& findings);
nlohmann::json to_json(const Finding& finding);

}  // namespace kinecoach
