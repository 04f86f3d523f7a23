#include "kinecoach/features.hpp"

#include "kinecoach/interpolate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>

namespace kinecoach {

namespace {

struct AngleDefinition {
    std::string_view motion;
    JointId proximal;
    JointId vertex;
    JointId distal;
};

const std::array<AngleDefinition, 5> kLeftAngles = {{
    {"left_shoulder_flexion", JointId::LeftHip, JointId::LeftShoulder, JointId::LeftElbow},
    {"left_elbow_flexion", JointId::LeftShoulder, JointId::LeftElbow, JointId::LeftWrist},
    {"left_wrist_extension", JointId::LeftElbow, JointId::LeftWrist, JointId::LeftHand},
    {"left_hip_rotation", JointId::LeftShoulder, JointId::LeftHip, JointId::LeftKnee},
    {"left_knee_flexion", JointId::LeftHip, JointId::LeftKnee, JointId::LeftAnkle},
}};

const std::array<AngleDefinition, 5> kRightAngles = {{
    {"right_shoulder_flexion", JointId::RightHip, JointId::RightShoulder, JointId::RightElbow},
    {"right_elbow_flexion", JointId::RightShoulder, JointId::RightElbow, JointId::RightWrist},
    {"right_wrist_extension", JointId::RightElbow, JointId::RightWrist, JointId::RightHand},
    {"right_hip_rotation", JointId::RightShoulder, JointId::RightHip, JointId::RightKnee},
    {"right_knee_flexion", JointId::RightHip, JointId::RightKnee, JointId::RightAnkle},
}};

std::vector<double> frame_abscissa(const SkeletonSequence& seq) {
    return {seq.frame_numbers.begin(), seq.frame_numbers.end()};
}

std::string joint_name(JointId id) { return std::string(canonical_joint(id).name); }

// Fills flagged gaps; returns false when no sample is valid.
bool fill_series(Eigen::VectorXd& values, const std::vector<char>& valid, const std::vector<double>& abscissa) {
    std::unique_ptr<bool[]> mask(new bool[valid.size()]);
    for (std::size_t i = 0; i < valid.size(); ++i) mask[i] = valid[i] != 0;
    return fill_gaps(values, std::span<const bool>(mask.get(), valid.size()), abscissa) > 0;
}

}  // namespace

JointAngleSet tennis_joint_angles(const SkeletonSequence& seq) {
    JointAngleSet out;
    const auto frames = seq.frame_count();
    const auto abscissa = frame_abscissa(seq);
    for (const auto* defs : {&kLeftAngles, &kRightAngles}) {
        for (const auto& def : *defs) {
            std::vector<std::string> missing;
            for (const auto id : {def.proximal, def.vertex, def.distal}) {
                if (!seq.has(id)) missing.push_back(joint_name(id));
            }
            if (!missing.empty()) {
                std::string note = std::string(def.motion) + ": missing";
                for (const auto& m : missing) note += " " + m;
                out.omitted.push_back(std::move(note));
                continue;
            }
            const auto& a = seq.trajectory(def.proximal);
            const auto& b = seq.trajectory(def.vertex);
            const auto& c = seq.trajectory(def.distal);
            Eigen::VectorXd values = Eigen::VectorXd::Zero(frames);
            std::vector<char> valid(static_cast<std::size_t>(frames), 0);
            for (Eigen::Index t = 0; t < frames; ++t) {
                try {
                    values(t) = joint_angle<double>(a.row(t).transpose(), b.row(t).transpose(), c.row(t).transpose());
                    valid[static_cast<std::size_t>(t)] = 1;
                } catch (const DegenerateGeometryError&) {
                }
            }
            if (!fill_series(values, valid, abscissa)) {
                out.omitted.push_back(std::string(def.motion) + ": degenerate geometry in every frame");
                continue;
            }
            out.angles.emplace(std::string(def.motion), TimeSeries{std::move(values), seq.dt(), 0, "rad"});
        }
    }
    return out;
}

TimeSeries trunk_rotation(const SkeletonSequence& seq, UpAxis up) {
    if (!seq.has(JointId::LeftShoulder) || !seq.has(JointId::RightShoulder)) {
        throw MissingJointError("trunk rotation needs both shoulders");
    }
    const auto& left = seq.trajectory(JointId::LeftShoulder);
    const auto& right = seq.trajectory(JointId::RightShoulder);
    const auto frames = seq.frame_count();

    std::vector<Eigen::Index> good;
    std::vector<double> raw;
    for (Eigen::Index t = 0; t < frames; ++t) {
        const Vec3<double> shoulder_line = (right.row(t) - left.row(t)).transpose();
        const auto g = ground_components(shoulder_line, up);
        if (g.norm() < kMinSegmentLength) continue;
        good.push_back(t);
        raw.push_back(std::atan2(g(1), g(0)));
    }
    if (good.empty()) throw DegenerateGeometryError("trunk rotation: shoulders coincide in every frame");

    // Unwrap the valid samples first so gap filling never straddles a 2*pi jump.
    const Eigen::VectorXd unwrapped = unwrap_angles(Eigen::Map<const Eigen::VectorXd>(raw.data(), raw.size()));
    Eigen::VectorXd values = Eigen::VectorXd::Zero(frames);
    std::vector<char> valid(static_cast<std::size_t>(frames), 0);
    for (std::size_t i = 0; i < good.size(); ++i) {
        values(good[i]) = unwrapped(static_cast<Eigen::Index>(i));
        valid[static_cast<std::size_t>(good[i])] = 1;
    }
    fill_series(values, valid, frame_abscissa(seq));
    return {std::move(values), seq.dt(), 0, "rad"};
}

TimeSeries trunk_angular_velocity(const TimeSeries& theta) {
    return {central_difference(theta.values, theta.dt), theta.dt, theta.start_frame + 1, "rad/s"};
}

RacketDynamics racket_dynamics(const SkeletonSequence& seq) {
    RacketDynamics out;
    if (seq.has(JointId::RacketTip)) {
        out.marker = JointId::RacketTip;
    } else if (seq.has(JointId::RightHand)) {
        out.marker = JointId::RightHand;
        out.proxy = true;
    } else {
        throw MissingEndEffectorError("neither racket_tip nor right_hand is available");
    }
    const auto& p = seq.trajectory(out.marker);
    const double dt = seq.dt();
    const auto frames = seq.frame_count();

    out.speed = {row_norms(central_velocity(p, dt)), dt, 1, "m/s"};
    out.max_speed = out.speed.values.maxCoeff();
    if (frames >= 5) {
        TimeSeries accel{row_norms(central_acceleration(p, dt)), dt, 2, "m/s^2"};
        const auto peak = argmax_earliest(accel.values);
        out.impact_frame = peak + accel.start_frame;
        out.impact_timing_pct = 100.0 * static_cast<double>(*out.impact_frame) / static_cast<double>(frames - 1);
        out.peak_accel_magnitude = accel.values(peak);
        out.acceleration_magnitude = std::move(accel);
    }
    return out;
}

SummaryStats summarize(const Eigen::VectorXd& values) {
    SummaryStats s;
    if (values.size() == 0) return s;
    s.mean = values.mean();
    s.std = std::sqrt((values.array() - s.mean).square().mean());
    s.min = values.minCoeff();
    s.max = values.maxCoeff();
    // Keep min <= mean <= max under rounding for near-constant series.
    s.mean = std::clamp(s.mean, s.min, s.max);
    return s;
}

FeatureReport build_feature_report(const SkeletonSequence& seq, std::optional<std::string> predicted_stroke,
                                   UpAxis up) {
    FeatureReport report;
    report.predicted_stroke = std::move(predicted_stroke);
    const auto frames = seq.frame_count();
    if (frames < 3) throw InsufficientFramesError("feature report needs at least 3 frames");

    report.validation = validate_sequence(seq);
    auto& meta = report.metadata;
    meta.source_id = seq.source_id;
    meta.frames = frames;
    meta.joints = seq.joints.size();
    meta.sample_rate_hz = seq.sample_rate_hz;
    meta.up_axis = up;
    meta.available_joints = report.validation.available_joints;
    meta.warnings = seq.warnings;

    report.stroke_duration_frames = frames;
    report.stroke_duration_s = static_cast<double>(frames) / seq.sample_rate_hz;
    report.phases = segment_phases(frames);

    auto racket = racket_dynamics(seq);
    meta.end_effector = joint_name(racket.marker);
    meta.racket_proxy = racket.proxy;
    report.racket_velocity_max = racket.max_speed;
    report.kinetic_chain_timing_pct = kinetic_chain_timing(racket.speed.values, frames);
    report.impact_timing_pct = racket.impact_timing_pct;
    if (!racket.impact_timing_pct) meta.omitted.emplace_back("impact_timing_pct: needs at least 5 frames");

    TimeSeries ke{kinetic_energy(racket.speed.values), racket.speed.dt, racket.speed.start_frame, "J/kg"};
    if (ke.size() >= 3) {
        report.peak_power = peak_power(ke.values, ke.dt);
    } else {
        meta.omitted.emplace_back("peak_power: needs at least 5 frames");
    }
    report.series.emplace("racket_speed", std::move(racket.speed));
    if (racket.acceleration_magnitude) {
        report.series.emplace("racket_acceleration", std::move(*racket.acceleration_magnitude));
    }
    report.series.emplace("kinetic_energy", std::move(ke));

    try {
        auto theta = trunk_rotation(seq, up);
        auto omega = trunk_angular_velocity(theta);
        report.rotation_range_deg = (theta.values.maxCoeff() - theta.values.minCoeff()) * 180.0 / std::numbers::pi;
        report.peak_angular_velocity = omega.values.cwiseAbs().maxCoeff();
        report.series.emplace("trunk_rotation", std::move(theta));
        report.series.emplace("trunk_angular_velocity", std::move(omega));
    } catch (const MissingJointError& e) {
        meta.omitted.push_back(std::string("trunk_rotation: ") + e.what());
    } catch (const DegenerateGeometryError& e) {
        meta.omitted.push_back(std::string("trunk_rotation: ") + e.what());
    }

    auto angles = tennis_joint_angles(seq);
    report.joint_angles = std::move(angles.angles);
    meta.omitted.insert(meta.omitted.end(), angles.omitted.begin(), angles.omitted.end());

    for (std::size_t j = 0; j < seq.joints.size(); ++j) {
        report.segment_speeds.emplace(joint_name(seq.joints[j]),
                                      TimeSeries{row_norms(central_velocity(seq.positions[j], seq.dt())),
                                                 seq.dt(), 1, "m/s"});
    }

    for (const auto& [name, s] : report.series) report.summary_stats.emplace(name, summarize(s.values));
    for (const auto& [name, s] : report.joint_angles) {
        report.summary_stats.emplace("joint_angles." + name, summarize(s.values));
    }
    for (const auto& [name, s] : report.segment_speeds) {
        report.summary_stats.emplace("segment_speeds." + name, summarize(s.values));
    }
    return report;
}

}  // namespace kinecoach
