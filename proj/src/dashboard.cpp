#include "kinecoach/dashboard.hpp"

#include "kinecoach/report_json.hpp"

#include <cstdio>

namespace kinecoach {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 240.0;
constexpr double kMargin = 40.0;

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_series_csv(const TimeSeries& series) {
    std::string csv = "frame,value\n";
    for (Eigen::Index i = 0; i < series.size(); ++i) {
        csv += std::to_string(series.start_frame + i) + "," + fmt("%.9g", series.values(i)) + "\n";
    }
    return csv;
}

std::string render_svg_line_chart(const TimeSeries& series, const std::string& title) {
    const double plot_w = kWidth - 2 * kMargin;
    const double plot_h = kHeight - 2 * kMargin;
    const double lo = series.size() ? series.values.minCoeff() : 0.0;
    const double hi = series.size() ? series.values.maxCoeff() : 0.0;
    const double span = hi - lo;
    const double x_step = series.size() > 1 ? plot_w / static_cast<double>(series.size() - 1) : 0.0;

    std::string points;
    for (Eigen::Index i = 0; i < series.size(); ++i) {
        // A flat series sits on the vertical midline.
        const double frac = span > 0 ? (series.values(i) - lo) / span : 0.5;
        const double x = kMargin + x_step * static_cast<double>(i);
        const double y = kMargin + plot_h * (1.0 - frac);
        if (!points.empty()) points += ' ';
        points += fmt("%.2f", x) + "," + fmt("%.2f", y);
    }

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) + "\" height=\"" +
           fmt("%.0f", kHeight) + "\" viewBox=\"0 0 " + fmt("%.0f", kWidth) + " " + fmt("%.0f", kHeight) + "\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "  <text x=\"" + fmt("%.0f", kMargin) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" +
           xml_escape(title) + (series.units.empty() ? "" : " (" + xml_escape(series.units) + ")") + "</text>\n";
    svg += "  <line x1=\"" + fmt("%.0f", kMargin) + "\" y1=\"" + fmt("%.0f", kHeight - kMargin) + "\" x2=\"" +
           fmt("%.0f", kWidth - kMargin) + "\" y2=\"" + fmt("%.0f", kHeight - kMargin) + "\" stroke=\"black\"/>\n";
    svg += "  <line x1=\"" + fmt("%.0f", kMargin) + "\" y1=\"" + fmt("%.0f", kMargin) + "\" x2=\"" +
           fmt("%.0f", kMargin) + "\" y2=\"" + fmt("%.0f", kHeight - kMargin) + "\" stroke=\"black\"/>\n";
    svg += "  <text x=\"4\" y=\"" + fmt("%.0f", kMargin + 4) + "\" font-family=\"sans-serif\" font-size=\"10\">" +
           fmt("%.3g", hi) + "</text>\n";
    svg += "  <text x=\"4\" y=\"" + fmt("%.0f", kHeight - kMargin) + "\" font-family=\"sans-serif\" font-size=\"10\">" +
           fmt("%.3g", lo) + "</text>\n";
    svg += "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
    svg += "</svg>\n";
    return svg;
}

DashboardOutput emit_dashboard_data(const FeatureReport& report, const std::filesystem::path& out_dir) {
    DashboardOutput out;
    std::filesystem::create_directories(out_dir);

    auto emit = [&](const std::string& name, const TimeSeries& s) {
        const auto csv = out_dir / (name + ".csv");
        const auto svg = out_dir / (name + ".svg");
        write_text_file(csv, render_series_csv(s));
        write_text_file(svg, render_svg_line_chart(s, name));
        out.files.push_back(csv);
        out.files.push_back(svg);
    };

    for (const char* name : {"trunk_rotation", "trunk_angular_velocity", "racket_speed", "racket_acceleration",
                             "kinetic_energy"}) {
        const auto it = report.series.find(name);
        if (it == report.series.end()) {
            out.notes.push_back(std::string(name) + ": series not in report, skipped");
            continue;
        }
        emit(name, it->second);
    }
    for (const auto& [name, s] : report.joint_angles) emit("joint_angle_" + name, s);

    const auto phases = out_dir / "phases.csv";
    const auto& p = report.phases;
    std::string csv = "phase,begin_frame,end_frame\n";
    csv += "preparation," + std::to_string(p.preparation.begin) + "," + std::to_string(p.preparation.end) + "\n";
    csv += "execution," + std::to_string(p.execution.begin) + "," + std::to_string(p.execution.end) + "\n";
    csv += "follow_through," + std::to_string(p.follow_through.begin) + "," + std::to_string(p.follow_through.end) + "\n";
    write_text_file(phases, csv);
    out.files.push_back(phases);
    return out;
}

}  // namespace kinecoach
