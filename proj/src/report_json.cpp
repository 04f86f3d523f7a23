#include "kinecoach/report_json.hpp"

#include "kinecoach/error.hpp"

#include <fstream>
#include <sstream>

namespace kinecoach {

namespace {

using json = nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_null(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<double>();
}

json range_json(const FrameRange& r) { return json::array({r.begin, r.end}); }

FrameRange range_from_json(const json& j) { return {j.at(0).get<Eigen::Index>(), j.at(1).get<Eigen::Index>()}; }

json series_map(const std::map<std::string, TimeSeries>& m) {
    json out = json::object();
    for (const auto& [name, s] : m) out[name] = to_json(s);
    return out;
}

std::map<std::string, TimeSeries> series_map_from_json(const json& j) {
    std::map<std::string, TimeSeries> out;
    if (!j.is_object()) return out;
    for (const auto& [name, s] : j.items()) out.emplace(name, time_series_from_json(s));
    return out;
}

}  // namespace

json to_json(const TimeSeries& series) {
    json values = json::array();
    for (Eigen::Index i = 0; i < series.values.size(); ++i) values.push_back(series.values(i));
    return {{"dt", series.dt}, {"start_frame", series.start_frame}, {"units", series.units}, {"values", values}};
}

TimeSeries time_series_from_json(const json& j) {
    TimeSeries s;
    s.dt = j.value("dt", 0.0);
    s.start_frame = j.value("start_frame", Eigen::Index{0});
    s.units = j.value("units", std::string{});
    const auto& values = j.at("values");
    s.values.resize(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) s.values(static_cast<Eigen::Index>(i)) = values[i].get<double>();
    return s;
}

json to_json(const ValidationMetrics& m) {
    return {{"frame_count", m.frame_count},
            {"joint_count", m.joint_count},
            {"imputed_fraction", m.imputed_fraction},
            {"available_joints", m.available_joints},
            {"unavailable_joints", m.unavailable_joints}};
}

json to_json(const FeatureReport& r) {
    json j;
    j["predicted_stroke"] = r.predicted_stroke ? json(*r.predicted_stroke) : json(nullptr);
    j["racket_velocity_max"] = r.racket_velocity_max;
    j["peak_power"] = optional_number(r.peak_power);
    j["rotation_range_deg"] = optional_number(r.rotation_range_deg);
    j["stroke_duration_frames"] = r.stroke_duration_frames;
    j["stroke_duration_s"] = r.stroke_duration_s;
    j["peak_angular_velocity"] = optional_number(r.peak_angular_velocity);
    j["impact_timing_pct"] = optional_number(r.impact_timing_pct);
    j["kinetic_chain_timing_pct"] = r.kinetic_chain_timing_pct;

    j["joint_angles"] = series_map(r.joint_angles);
    j["segment_speeds"] = series_map(r.segment_speeds);
    j["series"] = series_map(r.series);
    j["phases"] = {{"preparation", range_json(r.phases.preparation)},
                   {"execution", range_json(r.phases.execution)},
                   {"follow_through", range_json(r.phases.follow_through)}};

    json stats = json::object();
    for (const auto& [name, s] : r.summary_stats) {
        stats[name] = {{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}};
    }
    j["summary_stats"] = stats;
    j["validation"] = to_json(r.validation);

    const auto& m = r.metadata;
    j["metadata"] = {{"source_id", m.source_id},
                     {"frames", m.frames},
                     {"joints", m.joints},
                     {"sample_rate_hz", m.sample_rate_hz},
                     {"up_axis", std::string(to_string(m.up_axis))},
                     {"available_joints", m.available_joints},
                     {"end_effector", m.end_effector},
                     {"racket_proxy", m.racket_proxy},
                     {"omitted", m.omitted},
                     {"warnings", m.warnings}};
    return j;
}

FeatureReport feature_report_from_json(const json& j) {
    try {
        FeatureReport r;
        if (j.contains("predicted_stroke") && j["predicted_stroke"].is_string()) {
            r.predicted_stroke = j["predicted_stroke"].get<std::string>();
        }
        r.racket_velocity_max = j.at("racket_velocity_max").get<double>();
        r.peak_power = number_or_null(j, "peak_power");
        r.rotation_range_deg = number_or_null(j, "rotation_range_deg");
        r.stroke_duration_frames = j.at("stroke_duration_frames").get<Eigen::Index>();
        r.stroke_duration_s = j.at("stroke_duration_s").get<double>();
        r.peak_angular_velocity = number_or_null(j, "peak_angular_velocity");
        r.impact_timing_pct = number_or_null(j, "impact_timing_pct");
        r.kinetic_chain_timing_pct = j.value("kinetic_chain_timing_pct", 0.0);

        r.joint_angles = series_map_from_json(j.value("joint_angles", json::object()));
        r.segment_speeds = series_map_from_json(j.value("segment_speeds", json::object()));
        r.series = series_map_from_json(j.value("series", json::object()));
        if (j.contains("phases")) {
            const auto& p = j["phases"];
            r.phases = {range_from_json(p.at("preparation")), range_from_json(p.at("execution")),
                        range_from_json(p.at("follow_through"))};
        }
        const json stats = j.value("summary_stats", json::object());
        for (const auto& [name, s] : stats.items()) {
            r.summary_stats.emplace(name, SummaryStats{s.at("mean").get<double>(), s.at("std").get<double>(),
                                                       s.at("min").get<double>(), s.at("max").get<double>()});
        }
        if (j.contains("validation")) {
            const auto& v = j["validation"];
            r.validation.frame_count = v.value("frame_count", Eigen::Index{0});
            r.validation.joint_count = v.value("joint_count", std::size_t{0});
            r.validation.imputed_fraction =
                v.value("imputed_fraction", std::map<std::string, double>{});
            r.validation.available_joints = v.value("available_joints", std::vector<std::string>{});
            r.validation.unavailable_joints = v.value("unavailable_joints", std::vector<std::string>{});
        }
        if (j.contains("metadata")) {
            const auto& m = j["metadata"];
            auto& meta = r.metadata;
            meta.source_id = m.value("source_id", std::string{});
            meta.frames = m.value("frames", Eigen::Index{0});
            meta.joints = m.value("joints", std::size_t{0});
            meta.sample_rate_hz = m.value("sample_rate_hz", 0.0);
            meta.up_axis = parse_up_axis(m.value("up_axis", std::string("z")));
            meta.available_joints = m.value("available_joints", std::vector<std::string>{});
            meta.end_effector = m.value("end_effector", std::string{});
            meta.racket_proxy = m.value("racket_proxy", false);
            meta.omitted = m.value("omitted", std::vector<std::string>{});
            meta.warnings = m.value("warnings", std::vector<std::string>{});
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed feature report: ") + e.what());
    }
}

std::string dump_report(const FeatureReport& report) { return to_json(report).dump(2) + "\n"; }

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("'" + path.string() + "': " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace kinecoach
