#include "kinecoach/cohort_stats.hpp"
#include "kinecoach/compliance.hpp"
#include "kinecoach/dashboard.hpp"
#include "kinecoach/error.hpp"
#include "kinecoach/feedback.hpp"
#include "kinecoach/features.hpp"
#include "kinecoach/grounding.hpp"
#include "kinecoach/pipeline.hpp"
#include "kinecoach/report_json.hpp"
#include "kinecoach/skeleton_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace kinecoach;

namespace {

struct GlobalOptions {
    std::optional<double> rate;
    std::string up_axis = "z";
    std::string ranges = KINECOACH_DEFAULT_RANGES;
    std::string out;
    bool dry_run = false;
    int jobs = 1;
    std::string aliases;
};

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

JointAliases aliases_of(const GlobalOptions& g) {
    return g.aliases.empty() ? JointAliases{} : load_joint_aliases(g.aliases);
}

RawMotionTable read_table(const std::string& input, const std::string& format, const GlobalOptions& g) {
    const auto fmt = format.empty() ? motion_format_from_path(input) : parse_motion_format(format);
    auto raw = parse_motion_file(input, fmt, g.rate.value_or(60.0));
    if (g.rate) raw.sample_rate_hz = *g.rate;
    return raw;
}

FeatureSet read_features(const std::string& report_path, const std::string& stroke) {
    auto features = feature_set_from_json(read_json_file(report_path));
    if (!stroke.empty()) features.predicted_stroke = stroke;
    return features;
}

void emit(const std::string& out, std::string_view text) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text_file(out, text);
    }
}

int cmd_ingest(const std::string& input, const std::string& format, bool report, const GlobalOptions& g) {
    const auto raw = read_table(input, format, g);
    const auto seq = impute_gaps(map_joints(raw, aliases_of(g)));
    const auto metrics = validate_sequence(seq);
    for (const auto& w : seq.warnings) std::cerr << "warning: " << w << "\n";
    if (report) {
        emit(g.out, to_json(metrics).dump(2) + "\n");
    } else {
        std::cout << seq.source_id << ": " << metrics.frame_count << " frames, " << metrics.joint_count
                  << " joints at " << seq.sample_rate_hz << " Hz\n";
    }
    return 0;
}

int cmd_features(const std::string& input, const std::string& format, const std::string& stroke,
                 const GlobalOptions& g) {
    const auto raw = read_table(input, format, g);
    const auto seq = impute_gaps(map_joints(raw, aliases_of(g)));
    std::optional<std::string> label = stroke.empty() ? raw.predicted_stroke : std::optional(stroke);
    const auto report = build_feature_report(seq, label, parse_up_axis(g.up_axis));
    emit(g.out, dump_report(report));
    return 0;
}

int cmd_compare(const std::string& report_path, const std::string& stroke, bool as_json, const GlobalOptions& g) {
    const auto table = load_reference_table(g.ranges);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
    const auto findings = compare_to_reference(read_features(report_path, stroke), table);
    if (as_json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& f : findings) arr.push_back(to_json(f));
        emit(g.out, arr.dump(2) + "\n");
    } else {
        emit(g.out, render_findings(findings));
    }
    return 0;
}

int cmd_feedback(const std::string& report_path, const std::string& stroke, const GlobalOptions& g) {
    const auto features = read_features(report_path, stroke);
    const auto findings = compare_to_reference(features, load_reference_table(g.ranges));
    const auto bundle = build_context_summary(features, findings);
    if (g.dry_run) {
        emit(g.out, render_prompt(bundle));
        return 0;
    }
    const auto result = generate_feedback(bundle, FeedbackConfig::from_environment());
    if (!result.ok) {
        std::cerr << result.text << "\n";
        return 1;
    }
    emit(g.out, result.text + "\n");
    return 0;
}

int cmd_validate(const std::string& feedback_path, const std::string& report_path, const std::string& stroke,
                 bool as_json, const GlobalOptions& g) {
    const auto features = read_features(report_path, stroke);
    const auto findings = compare_to_reference(features, load_reference_table(g.ranges));
    const auto bundle = build_context_summary(features, findings);
    const auto check = check_feedback(read_text(feedback_path), bundle, findings);
    if (as_json) {
        emit(g.out, to_json(check).dump(2) + "\n");
    } else {
        std::ostringstream s;
        s << "score line: " << (check.has_score_line ? "ok" : "missing") << "\n";
        s << "corrections: " << check.correction_count << (check.has_three_corrections ? " (ok)" : " (need 3)")
          << "\n";
        s << "directions: " << (check.directions_consistent ? "consistent" : "conflicting") << "\n";
        for (const auto& c : check.direction_conflicts) s << "  " << c << "\n";
        s << "numbers: " << (check.numbers_ok() ? "grounded" : "fabricated") << "\n";
        for (const auto& n : check.fabricated_numbers) s << "  " << n << "\n";
        s << (check.pass ? "PASS" : "FAIL") << "\n";
        emit(g.out, s.str());
    }
    return check.pass ? 0 : 1;
}

int cmd_stats(const std::string& samples, const std::string& plots, const GlobalOptions& g) {
    const auto stats = run_cohort_analysis(load_cohort_csv(samples));
    for (const auto& f : stats.features) {
        for (const auto& w : f.warnings) std::cerr << "warning: " << f.feature << ": " << w << "\n";
    }
    emit(g.out, to_json(stats).dump(2) + "\n");
    if (!plots.empty()) write_box_plot_csvs(stats, plots);
    return 0;
}

int cmd_run(const std::vector<std::string>& inputs, const std::string& format, const std::string& stroke,
            const GlobalOptions& g) {
    PipelineConfig config;
    config.inputs = inputs;
    if (!format.empty()) config.format = parse_motion_format(format);
    config.sample_rate_hz = g.rate;
    config.up_axis = parse_up_axis(g.up_axis);
    if (!stroke.empty()) config.stroke = stroke;
    config.ranges_path = g.ranges;
    if (!g.out.empty()) config.out_dir = g.out;
    config.dry_run = g.dry_run;
    config.jobs = g.jobs;
    config.aliases = aliases_of(g);

    const auto result = run_pipeline(config, FeedbackConfig::from_environment());
    for (const auto& s : result.strokes) {
        std::cout << s.input.generic_string() << ": ";
        if (s.status == StrokeStatus::Failed) {
            std::cout << "error: " << s.error << "\n";
            continue;
        }
        std::cout << "ok";
        if (!s.feedback.empty() && s.feedback != "ok") std::cout << ", feedback " << s.feedback;
        if (s.compliance_pass) std::cout << ", compliance " << (*s.compliance_pass ? "pass" : "fail");
        std::cout << "\n";
    }
    std::cout << result.strokes.size() - result.hard_failures() << "/" << result.strokes.size()
              << " strokes processed; summary in " << (config.out_dir / "summary.json").generic_string() << "\n";
    return result.exit_code();
}

int cmd_plot(const std::string& report_path, const GlobalOptions& g) {
    const auto report = feature_report_from_json(read_json_file(report_path));
    const auto out = emit_dashboard_data(report, g.out.empty() ? fs::path("plots") : fs::path(g.out));
    for (const auto& n : out.notes) std::cerr << "note: " << n << "\n";
    std::cout << out.files.size() << " files written\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biomechanical feature reports and grounded coaching prompts for tennis strokes"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--rate", g.rate, "Sample rate in Hz (overrides the input file)")->check(CLI::PositiveNumber);
    app.add_option("--up-axis", g.up_axis, "Vertical axis of the data")
        ->check(CLI::IsMember({"x", "y", "z"}, CLI::ignore_case))
        ->capture_default_str();
    app.add_option("--ranges", g.ranges, "Reference range table (JSON)")->capture_default_str();
    app.add_option("--out", g.out, "Output file or directory");
    app.add_flag("--dry-run", g.dry_run, "Build prompts without calling the API");
    app.add_option("--jobs", g.jobs, "Strokes processed concurrently")->check(CLI::PositiveNumber);
    app.add_option("--aliases", g.aliases, "Extra joint aliases (JSON object: name -> canonical joint)");

    std::string input;
    std::string format;
    std::string stroke;
    std::string report_path;
    std::string feedback_path;
    std::string samples;
    std::string plots;
    std::vector<std::string> inputs;
    std::vector<std::string> flagged_inputs;
    bool print_report = false;
    bool as_json = false;

    auto* ingest = app.add_subcommand("ingest", "Parse, map and impute a motion file");
    ingest->add_option("--input", input, "Motion file")->required();
    ingest->add_option("--format", format, "csv or json (default: from extension)");
    ingest->add_flag("--report", print_report, "Print validation metrics as JSON");

    auto* features = app.add_subcommand("features", "Compute a feature report");
    features->add_option("--input", input, "Motion file")->required();
    features->add_option("--format", format, "csv or json (default: from extension)");
    features->add_option("--stroke", stroke, "Stroke label");

    auto* compare = app.add_subcommand("compare", "Compare a report against reference ranges");
    compare->add_option("--report", report_path, "Feature report (JSON)")->required();
    compare->add_option("--stroke", stroke, "Override the report's stroke label");
    compare->add_flag("--json", as_json, "Emit findings as JSON");

    auto* feedback = app.add_subcommand("feedback", "Build the coaching prompt and request feedback");
    feedback->add_option("--report", report_path, "Feature report (JSON)")->required();
    feedback->add_option("--stroke", stroke, "Override the report's stroke label");

    auto* validate = app.add_subcommand("validate", "Check feedback text against its constraints");
    validate->add_option("--feedback", feedback_path, "Feedback text file")->required();
    validate->add_option("--report", report_path, "Feature report (JSON)")->required();
    validate->add_option("--stroke", stroke, "Override the report's stroke label");
    validate->add_flag("--json", as_json, "Emit the compliance report as JSON");

    auto* stats = app.add_subcommand("stats", "Expert vs beginner cohort statistics");
    stats->add_option("--samples", samples, "Cohort samples CSV")->required();
    stats->add_option("--plots", plots, "Directory for box-plot CSVs");

    auto* run = app.add_subcommand("run", "Full pipeline over one or more motion files");
    run->add_option("inputs", inputs, "Files, directories or glob patterns");
    run->add_option("--input", flagged_inputs, "Files, directories or glob patterns");
    run->add_option("--format", format, "csv or json (default: from extension)");
    run->add_option("--stroke", stroke, "Stroke label for every input");

    auto* plot = app.add_subcommand("plot", "Write CSV and SVG series from a report");
    plot->add_option("--report", report_path, "Feature report (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return cmd_ingest(input, format, print_report, g);
        if (*features) return cmd_features(input, format, stroke, g);
        if (*compare) return cmd_compare(report_path, stroke, as_json, g);
        if (*feedback) return cmd_feedback(report_path, stroke, g);
        if (*validate) return cmd_validate(feedback_path, report_path, stroke, as_json, g);
        if (*stats) return cmd_stats(samples, plots, g);
        if (*run) {
            inputs.insert(inputs.end(), flagged_inputs.begin(), flagged_inputs.end());
            if (inputs.empty()) {
                std::cerr << "error: run needs at least one input\n";
                return 2;
            }
            return cmd_run(inputs, format, stroke, g);
        }
        if (*plot) return cmd_plot(report_path, g);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
