#pragma once

#include "kinecoach/features.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace kinecoach {

struct DashboardOutput {
    std::vector<std::filesystem::path> files;
    // Series that were expected but absent.
    std::vector<std::string> notes;
};

// Per series: <name>.csv with "frame,value" rows and <name>.svg with a line
// chart. Also phases.csv with the three phase ranges.
DashboardOutput emit_dashboard_data(const FeatureReport& report, const std::filesystem::path& out_dir);

// Minimal line chart: axes, a title and one polyline.
std::string render_svg_line_chart(const TimeSeries& series, const std::string& title);

std::string render_series_csv(const TimeSeries& series);

}  // namespace kinecoach
