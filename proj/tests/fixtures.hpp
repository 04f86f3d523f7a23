#pragma once

#include "kinecoach/skeleton_io.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

namespace fixtures {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(KINECOACH_TEST_DATA) / name; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

using PositionFn = std::function<Eigen::Vector3d(int frame)>;

// Builds a fully valid sequence straight through the public ingestion path.
inline kinecoach::SkeletonSequence make_sequence(int frames, const std::map<std::string, PositionFn>& joints,
                                                 double rate = 60.0) {
    kinecoach::RawMotionTable table;
    table.sample_rate_hz = rate;
    table.source_id = "fixture";
    for (int t = 0; t < frames; ++t) {
        for (const auto& [name, fn] : joints) table.rows.push_back({t, name, fn(t), true});
    }
    return kinecoach::impute_gaps(kinecoach::map_joints(table));
}

inline PositionFn constant(Eigen::Vector3d p) {
    return [p](int) { return p; };
}

// A fixed standing pose with every canonical joint; the arm and trunk turn
// with the frame index so no angle is constant.
inline std::map<std::string, PositionFn> full_skeleton() {
    auto turn = [](int t) { return 0.05 * t; };
    auto around = [turn](Eigen::Vector3d offset, Eigen::Vector3d centre) {
        return [=](int t) {
            const double a = turn(t);
            Eigen::Vector3d r(std::cos(a) * offset.x() - std::sin(a) * offset.y(),
                              std::sin(a) * offset.x() + std::cos(a) * offset.y(), offset.z());
            return Eigen::Vector3d(centre + r);
        };
    };
    const Eigen::Vector3d chest(0, 0, 1.45);
    const Eigen::Vector3d pelvis(0, 0, 1.0);
    return {
        {"head", constant({0, 0, 1.7})},
        {"neck", constant({0, 0, 1.5})},
        {"spine", constant({0, 0, 1.2})},
        {"left_shoulder", around({0, 0.2, 0}, chest)},
        {"right_shoulder", around({0, -0.2, 0}, chest)},
        {"left_elbow", around({0.1, 0.25, -0.25}, chest)},
        {"right_elbow", [](int t) { return Eigen::Vector3d(0.1 + 0.01 * t, -0.45, 1.3 + 0.005 * t); }},
        {"left_wrist", around({0.3, 0.25, -0.35}, chest)},
        {"right_wrist", [](int t) { return Eigen::Vector3d(0.35 + 0.02 * t, -0.4, 1.2 + 0.01 * t); }},
        {"left_hand", around({0.37, 0.25, -0.37}, chest)},
        {"right_hand", [](int t) { return Eigen::Vector3d(0.42 + 0.03 * t, -0.38, 1.18 + 0.012 * t); }},
        {"left_hip", around({0, 0.12, 0}, pelvis)},
        {"right_hip", around({0, -0.12, 0}, pelvis)},
        {"left_knee", constant({0.05, 0.13, 0.52})},
        {"right_knee", constant({0.08, -0.13, 0.53})},
        {"left_ankle", constant({0.02, 0.13, 0.07})},
        {"right_ankle", constant({0.05, -0.13, 0.08})},
        {"racket_tip", [](int t) { return Eigen::Vector3d(0.9 + 0.002 * t * t, -0.3 + 0.01 * t, 1.1); }},
    };
}

}  // namespace fixtures
