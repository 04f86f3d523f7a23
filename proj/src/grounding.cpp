#include "kinecoach/grounding.hpp"

#include "kinecoach/error.hpp"
#include "kinecoach/report_json.hpp"
#include "kinecoach/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

namespace kinecoach {

namespace {

using json = nlohmann::json;

struct FeatureInfo {
    std::string_view key;
    std::string_view label;
    std::string_view units;
};

const std::vector<FeatureInfo> kFeatures = {
    {"racket_velocity_max", "Racket velocity", "m/s"},
    {"peak_power", "Peak power", "W/kg"},
    {"rotation_range_deg", "Rotation range", "deg"},
    {"stroke_duration_frames", "Stroke duration", "frames"},
    {"stroke_duration_s", "Stroke duration (s)", "s"},
    {"peak_angular_velocity", "Peak angular velocity", "rad/s"},
    {"impact_timing_pct", "Impact timing", "%"},
};

// Accepted in tables without a warning, though not part of the prompt subset.
const std::set<std::string_view> kExtraKnownKeys = {"kinetic_chain_timing_pct"};

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

FeatureValue value_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    return std::monostate{};
}

std::string render(const Finding& f, std::string_view stroke) {
    const auto label = feature_label(f.feature);
    if (!f.interval) {
        return label + " MISSING: no reference range for stroke '" + std::string(stroke) + "'";
    }
    const auto range = format_compact(f.interval->lo) + "–" + format_compact(f.interval->hi);
    if (!f.value) return label + " MISSING: no numeric value (optimal " + range + ")";
    std::string line = label + " " + std::string(to_string(f.verdict)) + ": " + format_fixed2(*f.value) +
                       " vs optimal " + range;
    if (f.verdict == Verdict::Low) line += " (" + format_fixed2(*f.deviation_pct) + "% below range)";
    if (f.verdict == Verdict::High) line += " (" + format_fixed2(*f.deviation_pct) + "% above range)";
    return line;
}

}  // namespace

const std::vector<std::string_view>& scalar_feature_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> out;
        for (const auto& f : kFeatures) out.push_back(f.key);
        return out;
    }();
    return keys;
}

std::string feature_label(std::string_view key) {
    for (const auto& f : kFeatures) {
        if (f.key == key) return std::string(f.label);
    }
    return std::string(key);
}

std::string feature_units(std::string_view key) {
    for (const auto& f : kFeatures) {
        if (f.key == key) return std::string(f.units);
    }
    return {};
}

std::optional<double> coerce_to_real(const FeatureValue& value) {
    if (const auto* d = std::get_if<double>(&value)) {
        return std::isfinite(*d) ? std::optional<double>(*d) : std::nullopt;
    }
    if (const auto* s = std::get_if<std::string>(&value)) {
        std::string_view text = *s;
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
        while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
        if (!text.empty() && text.front() == '+') text.remove_prefix(1);
        double out = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(out)) {
            return std::nullopt;
        }
        return out;
    }
    return std::nullopt;
}

FeatureSet feature_set(const FeatureReport& report) {
    FeatureSet fs;
    fs.predicted_stroke = report.predicted_stroke;
    fs.sample_rate_hz = report.metadata.sample_rate_hz > 0 ? std::optional(report.metadata.sample_rate_hz)
                                                            : std::nullopt;
    auto put = [&](std::string_view key, std::optional<double> v) {
        fs.values[std::string(key)] = v ? FeatureValue(*v) : FeatureValue(std::monostate{});
    };
    put("racket_velocity_max", report.racket_velocity_max);
    put("peak_power", report.peak_power);
    put("rotation_range_deg", report.rotation_range_deg);
    put("stroke_duration_frames", static_cast<double>(report.stroke_duration_frames));
    put("stroke_duration_s", report.stroke_duration_s);
    put("peak_angular_velocity", report.peak_angular_velocity);
    put("impact_timing_pct", report.impact_timing_pct);
    put("kinetic_chain_timing_pct", report.kinetic_chain_timing_pct);
    return fs;
}

FeatureSet feature_set_from_json(const json& j) {
    FeatureSet fs;
    if (!j.is_object()) return fs;
    if (j.contains("predicted_stroke") && j["predicted_stroke"].is_string()) {
        fs.predicted_stroke = j["predicted_stroke"].get<std::string>();
    } else if (j.contains("classification") && j["classification"].is_object() &&
               j["classification"].contains("label") && j["classification"]["label"].is_string()) {
        fs.predicted_stroke = j["classification"]["label"].get<std::string>();
    }
    if (fs.predicted_stroke && fs.predicted_stroke->empty()) fs.predicted_stroke.reset();
    for (const auto& [key, value] : j.items()) {
        if (value.is_number() || value.is_string() || value.is_null()) fs.values[lowercase(key)] = value_from_json(value);
    }
    fs.values.erase("predicted_stroke");
    if (j.contains("metadata") && j["metadata"].is_object()) {
        const auto& m = j["metadata"];
        if (m.contains("sample_rate_hz") && m["sample_rate_hz"].is_number() && m["sample_rate_hz"].get<double>() > 0) {
            fs.sample_rate_hz = m["sample_rate_hz"].get<double>();
        }
    }
    return fs;
}

const std::map<std::string, Interval>* ReferenceTable::find(std::string_view stroke) const {
    const auto it = strokes.find(lowercase(stroke));
    return it == strokes.end() ? nullptr : &it->second;
}

ReferenceTable parse_reference_table(const json& doc) {
    if (!doc.is_object()) throw ConfigError("reference table must be a JSON object");
    ReferenceTable table;
    for (const auto& [stroke, features] : doc.items()) {
        if (!stroke.empty() && stroke.front() == '_') continue;  // documentation keys
        if (!features.is_object()) throw ConfigError("stroke '" + stroke + "' must map features to intervals");
        auto& entry = table.strokes[lowercase(stroke)];
        for (const auto& [feature, spec] : features.items()) {
            if (!spec.is_object() || !spec.contains("lo") || !spec.contains("hi") || !spec["lo"].is_number() ||
                !spec["hi"].is_number()) {
                throw ConfigError("stroke '" + stroke + "', feature '" + feature + "': expected numeric lo and hi");
            }
            Interval iv{spec["lo"].get<double>(), spec["hi"].get<double>(), spec.value("units", std::string{}),
                        spec.value("provenance", std::string{})};
            if (!(iv.lo <= iv.hi)) {
                throw ConfigError("stroke '" + stroke + "', feature '" + feature + "': lo " + format_compact(iv.lo) +
                                  " > hi " + format_compact(iv.hi));
            }
            const auto key = lowercase(feature);
            const auto& known = scalar_feature_keys();
            if (std::find(known.begin(), known.end(), key) == known.end() && !kExtraKnownKeys.contains(key)) {
                table.warnings.push_back("stroke '" + stroke + "': unknown feature '" + feature + "'");
            }
            entry[key] = std::move(iv);
        }
    }
    return table;
}

ReferenceTable load_reference_table(const std::filesystem::path& path) {
    try {
        return parse_reference_table(read_json_file(path));
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Ok:
            return "OK";
        case Verdict::Low:
            return "LOW";
        case Verdict::High:
            return "HIGH";
        case Verdict::Missing:
            break;
    }
    return "MISSING";
}

double deviation_pct(double value, double lo, double hi) {
    if (value < lo) return (lo - value) / (hi - lo + kDeviationEpsilon) * 100.0;
    if (value > hi) return (value - hi) / (hi - lo + kDeviationEpsilon) * 100.0;
    return 0.0;
}

std::vector<Finding> compare_to_reference(const FeatureSet& features, const ReferenceTable& table) {
    const std::string stroke = features.predicted_stroke.value_or("UNKNOWN");
    const auto* intervals = table.find(stroke);

    auto value_of = [&](const std::string& key) -> std::optional<double> {
        const auto it = features.values.find(key);
        return it == features.values.end() ? std::nullopt : coerce_to_real(it->second);
    };

    std::vector<Finding> out;
    if (!intervals) {
        for (const auto key : scalar_feature_keys()) {
            Finding f;
            f.feature = std::string(key);
            f.value = value_of(f.feature);
            f.rendered = render(f, stroke);
            out.push_back(std::move(f));
        }
        return out;
    }

    // Fixed keys first in their canonical order, then any others alphabetically.
    std::vector<std::string> order;
    for (const auto key : scalar_feature_keys()) {
        if (intervals->contains(std::string(key))) order.emplace_back(key);
    }
    for (const auto& [key, iv] : *intervals) {
        if (std::find(order.begin(), order.end(), key) == order.end()) order.push_back(key);
    }

    for (const auto& key : order) {
        const auto& iv = intervals->at(key);
        Finding f;
        f.feature = key;
        f.interval = iv;
        f.value = value_of(key);
        if (f.value) {
            const double v = *f.value;
            f.verdict = v < iv.lo ? Verdict::Low : v > iv.hi ? Verdict::High : Verdict::Ok;
            f.deviation_pct = deviation_pct(v, iv.lo, iv.hi);
        }
        f.rendered = render(f, stroke);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Finding> compare_to_reference(const FeatureReport& report, const ReferenceTable& table) {
    return compare_to_reference(feature_set(report), table);
}

std::string render_findings(const std::vector<Finding>& findings) {
    std::string out;
    for (const auto& f : findings) out += f.rendered + "\n";
    return out;
}

json to_json(const Finding& f) {
    json j = {{"feature", f.feature},
              {"value", f.value ? json(*f.value) : json(nullptr)},
              {"verdict", std::string(to_string(f.verdict))},
              {"deviation_pct", f.deviation_pct ? json(*f.deviation_pct) : json(nullptr)},
              {"rendered", f.rendered}};
    if (f.interval) j["interval"] = {{"lo", f.interval->lo}, {"hi", f.interval->hi}, {"units", f.interval->units}};
    return j;
}

}  // namespace kinecoach
