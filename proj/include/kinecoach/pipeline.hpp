#pragma once

#include "kinecoach/feedback.hpp"
#include "kinecoach/kinematics.hpp"
#include "kinecoach/skeleton_io.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace kinecoach {

struct PipelineConfig {
    // Files, directories (every .csv/.json inside) or glob patterns.
    std::vector<std::string> inputs;
    std::optional<MotionFormat> format;  // inferred per file when absent
    std::optional<double> sample_rate_hz;  // overrides the file's own rate
    UpAxis up_axis = UpAxis::Z;
    std::optional<std::string> stroke;
    std::filesystem::path ranges_path;
    std::filesystem::path out_dir = "kinecoach_out";
    bool dry_run = false;
    int jobs = 1;
    JointAliases aliases;

    // Throws ConfigError on a non-positive rate or width.
    void validate() const;
};

enum class StrokeStatus { Ok, Failed };

struct StrokeOutcome {
    std::filesystem::path input;
    std::filesystem::path output_dir;
    StrokeStatus status = StrokeStatus::Ok;
    std::string error;
    // "skipped (dry-run)", "ok" or the feedback error string.
    std::string feedback;
    std::optional<bool> compliance_pass;
};

struct PipelineResult {
    std::vector<StrokeOutcome> strokes;

    std::size_t hard_failures() const;
    int exit_code() const { return hard_failures() == 0 ? 0 : 1; }
};

// Sorted, de-duplicated list of input files.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& patterns);

// Per stroke, under out_dir/<source_id>/: report.json, findings.txt,
// prompt.txt, feedback.txt (not in dry-run), compliance.json and plots/.
// Writes out_dir/summary.json. A failing stroke never aborts the batch.
PipelineResult run_pipeline(const PipelineConfig& config, const FeedbackConfig& feedback);

nlohmann::json to_json(const PipelineResult& result);

}  // namespace kinecoach
