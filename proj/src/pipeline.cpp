#include "kinecoach/pipeline.hpp"

#include "kinecoach/compliance.hpp"
#include "kinecoach/dashboard.hpp"
#include "kinecoach/error.hpp"
#include "kinecoach/features.hpp"
#include "kinecoach/grounding.hpp"
#include "kinecoach/report_json.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>

namespace kinecoach {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

bool is_motion_file(const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".csv" || ext == ".json" || ext == ".CSV" || ext == ".JSON";
}

bool has_wildcard(const std::string& s) { return s.find_first_of("*?[") != std::string::npos; }

// Output directory names keyed by input, unique within the batch.
std::map<fs::path, std::string> output_names(const std::vector<fs::path>& files) {
    std::map<std::string, int> seen;
    std::map<fs::path, std::string> out;
    for (const auto& f : files) {
        const auto stem = f.stem().string();
        const int n = seen[stem]++;
        out[f] = n == 0 ? stem : stem + "_" + std::to_string(n + 1);
    }
    return out;
}

StrokeOutcome process_stroke(const fs::path& input, const fs::path& dir, const PipelineConfig& config,
                             const ReferenceTable& table, const FeedbackConfig& feedback_config) {
    StrokeOutcome outcome;
    outcome.input = input;
    outcome.output_dir = dir;
    try {
        const auto format = config.format.value_or(motion_format_from_path(input));
        auto raw = parse_motion_file(input, format, config.sample_rate_hz.value_or(60.0));
        if (config.sample_rate_hz) raw.sample_rate_hz = *config.sample_rate_hz;
        const auto stroke = config.stroke ? config.stroke : raw.predicted_stroke;
        const auto seq = impute_gaps(map_joints(raw, config.aliases));
        const auto report = build_feature_report(seq, stroke, config.up_axis);
        const auto findings = compare_to_reference(report, table);
        const auto bundle = build_context_summary(report, findings);

        fs::create_directories(dir);
        write_text_file(dir / "report.json", dump_report(report));
        write_text_file(dir / "findings.txt", render_findings(findings));
        write_text_file(dir / "prompt.txt", render_prompt(bundle));
        emit_dashboard_data(report, dir / "plots");

        json compliance;
        if (config.dry_run) {
            outcome.feedback = "skipped (dry-run)";
            compliance = {{"evaluated", false}, {"reason", "dry-run: no feedback generated"}};
        } else {
            const auto result = generate_feedback(bundle, feedback_config);
            write_text_file(dir / "feedback.txt", result.text + "\n");
            if (result.ok) {
                outcome.feedback = "ok";
                const auto check = check_feedback(result.text, bundle, findings);
                outcome.compliance_pass = check.pass;
                compliance = to_json(check);
                compliance["evaluated"] = true;
            } else {
                outcome.feedback = result.text;
                compliance = {{"evaluated", false}, {"reason", result.text}};
            }
        }
        write_text_file(dir / "compliance.json", compliance.dump(2) + "\n");
    } catch (const std::exception& e) {
        outcome.status = StrokeStatus::Failed;
        outcome.error = e.what();
    }
    return outcome;
}

}  // namespace

void PipelineConfig::validate() const {
    if (sample_rate_hz && !(*sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
    if (jobs < 1) throw ConfigError("concurrency width must be at least 1");
}

std::size_t PipelineResult::hard_failures() const {
    return static_cast<std::size_t>(std::count_if(strokes.begin(), strokes.end(), [](const StrokeOutcome& s) {
        return s.status == StrokeStatus::Failed;
    }));
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& patterns) {
    std::set<fs::path> files;
    for (const auto& pattern : patterns) {
        const fs::path p(pattern);
        if (has_wildcard(p.filename().string())) {
            const auto parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
            if (!fs::is_directory(parent)) continue;
            for (const auto& entry : fs::directory_iterator(parent)) {
                if (entry.is_regular_file() &&
                    fnmatch(p.filename().c_str(), entry.path().filename().c_str(), 0) == 0) {
                    files.insert(entry.path());
                }
            }
        } else if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && is_motion_file(entry.path())) files.insert(entry.path());
            }
        } else {
            // Missing files are kept so they surface as per-stroke errors.
            files.insert(p);
        }
    }
    return {files.begin(), files.end()};
}

PipelineResult run_pipeline(const PipelineConfig& config, const FeedbackConfig& feedback) {
    config.validate();
    const auto table = config.ranges_path.empty() ? ReferenceTable{} : load_reference_table(config.ranges_path);
    const auto files = expand_inputs(config.inputs);
    const auto names = output_names(files);

    PipelineResult result;
    result.strokes.resize(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
            result.strokes[i] = process_stroke(files[i], config.out_dir / names.at(files[i]), config, table, feedback);
        }
    };
    const auto width = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), std::max<std::size_t>(files.size(), 1));
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < width; ++t) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    fs::create_directories(config.out_dir);
    write_text_file(config.out_dir / "summary.json", to_json(result).dump(2) + "\n");
    return result;
}

json to_json(const PipelineResult& result) {
    json strokes = json::array();
    for (const auto& s : result.strokes) {
        json entry = {{"input", s.input.generic_string()},
                      {"output_dir", s.output_dir.filename().generic_string()},
                      {"status", s.status == StrokeStatus::Ok ? "ok" : "error"}};
        if (s.status == StrokeStatus::Failed) entry["error"] = s.error;
        if (!s.feedback.empty()) entry["feedback"] = s.feedback;
        entry["compliance_pass"] = s.compliance_pass ? json(*s.compliance_pass) : json(nullptr);
        strokes.push_back(std::move(entry));
    }
    return {{"strokes", strokes}, {"hard_failures", result.hard_failures()}};
}

}  // namespace kinecoach
