#pragma once

#include "kinecoach/kinematics.hpp"
#include "kinecoach/skeleton_io.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kinecoach {

struct TimeSeries {
    Eigen::VectorXd values;
    double dt = 0.0;
    // Position of values(0) on the sequence frame axis.
    Eigen::Index start_frame = 0;
    std::string units;

    Eigen::Index size() const { return values.size(); }
};

struct JointAngleSet {
    std::map<std::string, TimeSeries> angles;
    // Angles that could not be computed, with the reason.
    std::vector<std::string> omitted;
};

// Three-point angles per available side, keyed <side>_<joint>_<motion>:
//   shoulder_flexion  hip - shoulder - elbow
//   elbow_flexion     shoulder - elbow - wrist
//   wrist_extension   elbow - wrist - hand
//   hip_rotation      shoulder - hip - knee
//   knee_flexion      hip - knee - ankle
// Degenerate frames are interpolated over.
JointAngleSet tennis_joint_angles(const SkeletonSequence& seq);

// Unwrapped heading of the right-minus-left shoulder vector in the ground
// plane. Throws MissingJointError without both shoulders and
// DegenerateGeometryError when they coincide in every frame.
TimeSeries trunk_rotation(const SkeletonSequence& seq, UpAxis up = UpAxis::Z);

// Central difference of an (unwrapped) angle series.
TimeSeries trunk_angular_velocity(const TimeSeries& theta);

struct RacketDynamics {
    TimeSeries speed;
    // Absent when the stroke has fewer than 5 frames.
    std::optional<TimeSeries> acceleration_magnitude;
    double max_speed = 0.0;
    std::optional<Eigen::Index> impact_frame;
    std::optional<double> impact_timing_pct;
    std::optional<double> peak_accel_magnitude;
    JointId marker = JointId::RacketTip;
    bool proxy = false;
};

// Uses racket_tip, falling back to right_hand as a proxy.
RacketDynamics racket_dynamics(const SkeletonSequence& seq);

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;  // population (ddof = 0)
    double min = 0.0;
    double max = 0.0;
};

SummaryStats summarize(const Eigen::VectorXd& values);

struct ReportMetadata {
    std::string source_id;
    Eigen::Index frames = 0;
    std::size_t joints = 0;
    double sample_rate_hz = 0.0;
    UpAxis up_axis = UpAxis::Z;
    std::vector<std::string> available_joints;
    std::string end_effector;
    bool racket_proxy = false;
    std::vector<std::string> omitted;
    std::vector<std::string> warnings;
};

struct FeatureReport {
    std::optional<std::string> predicted_stroke;

    double racket_velocity_max = 0.0;
    std::optional<double> peak_power;
    std::optional<double> rotation_range_deg;
    Eigen::Index stroke_duration_frames = 0;
    double stroke_duration_s = 0.0;
    std::optional<double> peak_angular_velocity;
    std::optional<double> impact_timing_pct;
    double kinetic_chain_timing_pct = 0.0;

    std::map<std::string, TimeSeries> joint_angles;
    std::map<std::string, TimeSeries> segment_speeds;
    // trunk_rotation, trunk_angular_velocity, racket_speed,
    // racket_acceleration, kinetic_energy (whichever are available).
    std::map<std::string, TimeSeries> series;
    StrokePhases phases;
    std::map<std::string, SummaryStats> summary_stats;
    ValidationMetrics validation;
    ReportMetadata metadata;
};

FeatureReport build_feature_report(const SkeletonSequence& seq, std::optional<std::string> predicted_stroke,
                                   UpAxis up = UpAxis::Z);

}  // namespace kinecoach
