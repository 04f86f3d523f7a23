#pragma once

#include "kinecoach/features.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace kinecoach {

nlohmann::json to_json(const TimeSeries& series);
TimeSeries time_series_from_json(const nlohmann::json& j);

// Scalar features use the fixed keys predicted_stroke, racket_velocity_max,
// peak_power, rotation_range_deg, stroke_duration_frames, stroke_duration_s,
// peak_angular_velocity, impact_timing_pct; unavailable values are null.
nlohmann::json to_json(const FeatureReport& report);
FeatureReport feature_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ValidationMetrics& metrics);

// Pretty-printed with a trailing newline; byte-stable for equal reports.
std::string dump_report(const FeatureReport& report);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace kinecoach
