#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kinecoach {

enum class Side { Left, Right, Center };

// Closed vocabulary of joints the feature pipeline understands.
enum class JointId {
    Head,
    Neck,
    Spine,
    LeftShoulder,
    RightShoulder,
    LeftElbow,
    RightElbow,
    LeftWrist,
    RightWrist,
    LeftHand,
    RightHand,
    LeftHip,
    RightHip,
    LeftKnee,
    RightKnee,
    LeftAnkle,
    RightAnkle,
    RacketTip,
};

struct CanonicalJoint {
    JointId id;
    std::string_view name;
    Side side;
};

// All canonical joints in vocabulary order.
const std::vector<CanonicalJoint>& canonical_joints();
const CanonicalJoint& canonical_joint(JointId id);
std::optional<JointId> joint_from_canonical_name(std::string_view name);

enum class MotionFormat { Csv, Json };

MotionFormat parse_motion_format(std::string_view text);
// Guess from the file extension; throws ParseError when unknown.
MotionFormat motion_format_from_path(const std::filesystem::path& path);

struct RawObservation {
    long frame = 0;
    std::string joint;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    bool valid = true;
};

struct RawMotionTable {
    std::vector<RawObservation> rows;
    double sample_rate_hz = 60.0;
    std::string source_id;
    // Optional stroke label carried by the JSON wide form.
    std::optional<std::string> predicted_stroke;
    std::vector<std::string> warnings;
};

// Per-joint, per-frame positions on a shared frame axis.
struct SkeletonSequence {
    std::vector<JointId> joints;
    std::vector<long> frame_numbers;
    // One T x 3 trajectory per entry of `joints`.
    std::vector<Eigen::Matrix<double, Eigen::Dynamic, 3>> positions;
    // T x J; true where the value was filled in by imputation.
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> imputed;
    double sample_rate_hz = 60.0;
    std::string source_id;
    std::vector<std::string> warnings;

    Eigen::Index frame_count() const { return static_cast<Eigen::Index>(frame_numbers.size()); }
    double dt() const { return 1.0 / sample_rate_hz; }
    bool has(JointId id) const;
    // Throws std::out_of_range when the joint is absent.
    const Eigen::Matrix<double, Eigen::Dynamic, 3>& trajectory(JointId id) const;
};

struct ValidationMetrics {
    Eigen::Index frame_count = 0;
    std::size_t joint_count = 0;
    std::map<std::string, double> imputed_fraction;
    std::vector<std::string> available_joints;
    std::vector<std::string> unavailable_joints;
};

RawMotionTable parse_motion_csv(std::string_view text, double sample_rate_hz = 60.0);
RawMotionTable parse_motion_json(std::string_view text, double sample_rate_hz = 60.0);
RawMotionTable parse_motion_file(const std::filesystem::path& path, MotionFormat format,
                                 double sample_rate_hz = 60.0);

// Extra alias -> canonical joint entries, matched after normalization.
using JointAliases = std::map<std::string, JointId>;

JointAliases load_joint_aliases(const std::filesystem::path& path);

// Lowercase with separators removed, e.g. "Right_Shoulder" -> "rightshoulder".
std::string normalize_joint_name(std::string_view name);
std::optional<JointId> resolve_joint_name(std::string_view name, const JointAliases& extra = {});

RawMotionTable map_joints(const RawMotionTable& table, const JointAliases& extra = {});

// Expects canonical joint names (output of map_joints).
SkeletonSequence impute_gaps(const RawMotionTable& table);

// Long-form view of a sequence, every row valid.
RawMotionTable to_table(const SkeletonSequence& seq);

ValidationMetrics validate_sequence(const SkeletonSequence& seq);

// parse -> map -> impute in one call.
SkeletonSequence load_skeleton(const std::filesystem::path& path, MotionFormat format,
                               double sample_rate_hz = 60.0, const JointAliases& extra = {});

}  // namespace kinecoach
