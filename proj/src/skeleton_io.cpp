#include "kinecoach/skeleton_io.hpp"

#include "kinecoach/error.hpp"
#include "kinecoach/interpolate.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <utility>

namespace kinecoach {

namespace {

using json = nlohmann::json;

const std::vector<CanonicalJoint> kVocabulary = {
    {JointId::Head, "head", Side::Center},
    {JointId::Neck, "neck", Side::Center},
    {JointId::Spine, "spine", Side::Center},
    {JointId::LeftShoulder, "left_shoulder", Side::Left},
    {JointId::RightShoulder, "right_shoulder", Side::Right},
    {JointId::LeftElbow, "left_elbow", Side::Left},
    {JointId::RightElbow, "right_elbow", Side::Right},
    {JointId::LeftWrist, "left_wrist", Side::Left},
    {JointId::RightWrist, "right_wrist", Side::Right},
    {JointId::LeftHand, "left_hand", Side::Left},
    {JointId::RightHand, "right_hand", Side::Right},
    {JointId::LeftHip, "left_hip", Side::Left},
    {JointId::RightHip, "right_hip", Side::Right},
    {JointId::LeftKnee, "left_knee", Side::Left},
    {JointId::RightKnee, "right_knee", Side::Right},
    {JointId::LeftAnkle, "left_ankle", Side::Left},
    {JointId::RightAnkle, "right_ankle", Side::Right},
    {JointId::RacketTip, "racket_tip", Side::Center},
};

struct CenterAlias {
    std::string_view key;
    JointId id;
};

const std::array<CenterAlias, 11> kCenterAliases = {{
    {"head", JointId::Head},
    {"neck", JointId::Neck},
    {"spine", JointId::Spine},
    {"spinemid", JointId::Spine},
    {"torso", JointId::Spine},
    {"chest", JointId::Spine},
    {"rackettip", JointId::RacketTip},
    {"racket", JointId::RacketTip},
    {"racquettip", JointId::RacketTip},
    {"racquet", JointId::RacketTip},
    {"rackethead", JointId::RacketTip},
}};

struct SidedPart {
    std::string_view key;
    JointId left;
    JointId right;
};

const std::array<SidedPart, 7> kSidedParts = {{
    {"shoulder", JointId::LeftShoulder, JointId::RightShoulder},
    {"elbow", JointId::LeftElbow, JointId::RightElbow},
    {"wrist", JointId::LeftWrist, JointId::RightWrist},
    {"hand", JointId::LeftHand, JointId::RightHand},
    {"hip", JointId::LeftHip, JointId::RightHip},
    {"knee", JointId::LeftKnee, JointId::RightKnee},
    {"ankle", JointId::LeftAnkle, JointId::RightAnkle},
}};

// Longest first so "right" wins over "r".
const std::array<std::pair<std::string_view, Side>, 4> kSideTokens = {{
    {"right", Side::Right},
    {"left", Side::Left},
    {"r", Side::Right},
    {"l", Side::Left},
}};

std::optional<JointId> sided_part(std::string_view base, Side side) {
    for (const auto& part : kSidedParts) {
        if (part.key == base) return side == Side::Left ? part.left : part.right;
    }
    return std::nullopt;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                              : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    double value = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

std::optional<long> parse_long(std::string_view s) {
    long value = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

void check_duplicates_and_frames(const RawMotionTable& table) {
    std::set<std::pair<long, std::string>> seen;
    std::set<long> frames;
    for (const auto& row : table.rows) {
        if (!seen.emplace(row.frame, row.joint).second) throw DuplicateObservationError(row.frame, row.joint);
        frames.insert(row.frame);
    }
    if (frames.size() < 3) {
        throw ParseError("need at least 3 distinct frames, found " + std::to_string(frames.size()));
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

const std::vector<CanonicalJoint>& canonical_joints() { return kVocabulary; }

const CanonicalJoint& canonical_joint(JointId id) { return kVocabulary.at(static_cast<std::size_t>(id)); }

std::optional<JointId> joint_from_canonical_name(std::string_view name) {
    for (const auto& j : kVocabulary) {
        if (j.name == name) return j.id;
    }
    return std::nullopt;
}

MotionFormat parse_motion_format(std::string_view text) {
    if (text == "csv") return MotionFormat::Csv;
    if (text == "json") return MotionFormat::Json;
    throw ParseError("unknown motion format '" + std::string(text) + "' (expected csv or json)");
}

MotionFormat motion_format_from_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".csv") return MotionFormat::Csv;
    if (ext == ".json") return MotionFormat::Json;
    throw ParseError("cannot infer motion format from '" + path.string() + "'");
}

bool SkeletonSequence::has(JointId id) const {
    return std::find(joints.begin(), joints.end(), id) != joints.end();
}

const Eigen::Matrix<double, Eigen::Dynamic, 3>& SkeletonSequence::trajectory(JointId id) const {
    const auto it = std::find(joints.begin(), joints.end(), id);
    if (it == joints.end()) {
        throw std::out_of_range("joint '" + std::string(canonical_joint(id).name) + "' not in sequence");
    }
    return positions[static_cast<std::size_t>(it - joints.begin())];
}

RawMotionTable parse_motion_csv(std::string_view text, double sample_rate_hz) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    if (trim(text).empty()) throw ParseError("empty file");

    RawMotionTable table;
    table.sample_rate_hz = sample_rate_hz;

    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (trim(line).empty()) continue;

        const auto fields = split_fields(line);
        if (!header_seen) {
            const std::array<std::string_view, 5> expected = {"frame", "joint", "x", "y", "z"};
            if (fields.size() != expected.size() || !std::equal(fields.begin(), fields.end(), expected.begin())) {
                throw ParseError("expected header 'frame,joint,x,y,z'", line_no);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 5) {
            throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
        }
        const auto frame = parse_long(fields[0]);
        if (!frame || *frame < 0) throw ParseError("invalid frame index '" + std::string(fields[0]) + "'", line_no);
        if (fields[1].empty()) throw ParseError("empty joint name", line_no);

        RawObservation obs;
        obs.frame = *frame;
        obs.joint = std::string(fields[1]);
        for (int k = 0; k < 3; ++k) {
            const auto cell = fields[static_cast<std::size_t>(2 + k)];
            if (cell.empty()) {
                obs.valid = false;
                continue;
            }
            const auto v = parse_double(cell);
            if (!v) throw ParseError("invalid coordinate '" + std::string(cell) + "'", line_no);
            if (!std::isfinite(*v)) obs.valid = false;
            obs.position[k] = *v;
        }
        if (!obs.valid) obs.position.setZero();
        table.rows.push_back(std::move(obs));
    }
    if (table.rows.empty()) throw ParseError("no observations");
    check_duplicates_and_frames(table);
    return table;
}

RawMotionTable parse_motion_json(std::string_view text, double sample_rate_hz) {
    if (trim(text).empty()) throw ParseError("empty file");
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("top-level JSON value must be an object");

    RawMotionTable table;
    table.sample_rate_hz = sample_rate_hz;
    if (doc.contains("sample_rate_hz")) {
        if (!doc["sample_rate_hz"].is_number() || doc["sample_rate_hz"].get<double>() <= 0.0) {
            throw ParseError("sample_rate_hz must be a positive number");
        }
        table.sample_rate_hz = doc["sample_rate_hz"].get<double>();
    }
    if (doc.contains("predicted_stroke") && doc["predicted_stroke"].is_string()) {
        table.predicted_stroke = doc["predicted_stroke"].get<std::string>();
    }
    if (!doc.contains("joints") || !doc["joints"].is_array()) throw ParseError("missing 'joints' array");
    if (!doc.contains("frames") || !doc["frames"].is_array()) throw ParseError("missing 'frames' array");

    std::vector<std::string> joints;
    for (const auto& j : doc["joints"]) {
        if (!j.is_string()) throw ParseError("joint names must be strings");
        joints.push_back(j.get<std::string>());
    }
    const auto& frames = doc["frames"];
    if (frames.empty()) throw ParseError("no frames");
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto& frame = frames[t];
        if (!frame.is_array() || frame.size() != joints.size()) {
            throw ParseError("frame " + std::to_string(t) + " must list " + std::to_string(joints.size()) +
                             " joints");
        }
        for (std::size_t j = 0; j < joints.size(); ++j) {
            RawObservation obs;
            obs.frame = static_cast<long>(t);
            obs.joint = joints[j];
            const auto& cell = frame[j];
            if (cell.is_null()) {
                obs.valid = false;
            } else {
                if (!cell.is_array() || cell.size() != 3) {
                    throw ParseError("frame " + std::to_string(t) + ", joint '" + joints[j] +
                                     "': expected [x, y, z] or null");
                }
                for (int k = 0; k < 3; ++k) {
                    const auto& c = cell[static_cast<std::size_t>(k)];
                    if (c.is_null()) {
                        obs.valid = false;
                    } else if (c.is_number()) {
                        obs.position[k] = c.get<double>();
                        if (!std::isfinite(obs.position[k])) obs.valid = false;
                    } else {
                        throw ParseError("frame " + std::to_string(t) + ", joint '" + joints[j] +
                                         "': non-numeric coordinate");
                    }
                }
                if (!obs.valid) obs.position.setZero();
            }
            table.rows.push_back(std::move(obs));
        }
    }
    check_duplicates_and_frames(table);
    return table;
}

RawMotionTable parse_motion_file(const std::filesystem::path& path, MotionFormat format, double sample_rate_hz) {
    const auto text = read_file(path);
    auto table = format == MotionFormat::Csv ? parse_motion_csv(text, sample_rate_hz)
                                             : parse_motion_json(text, sample_rate_hz);
    table.source_id = path.stem().string();
    return table;
}

std::string normalize_joint_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (const unsigned char c : name) {
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::optional<JointId> resolve_joint_name(std::string_view name, const JointAliases& extra) {
    const auto key = normalize_joint_name(name);
    if (key.empty()) return std::nullopt;

    for (const auto& [alias, id] : extra) {
        if (normalize_joint_name(alias) == key) return id;
    }
    for (const auto& j : kVocabulary) {
        if (normalize_joint_name(j.name) == key) return j.id;
    }
    for (const auto& alias : kCenterAliases) {
        if (alias.key == key) return alias.id;
    }
    const std::string_view k = key;
    for (const auto& [token, side] : kSideTokens) {
        if (k.size() > token.size() && k.substr(0, token.size()) == token) {
            if (auto id = sided_part(k.substr(token.size()), side)) return id;
        }
        if (k.size() > token.size() && k.substr(k.size() - token.size()) == token) {
            if (auto id = sided_part(k.substr(0, k.size() - token.size()), side)) return id;
        }
    }
    return std::nullopt;
}

JointAliases load_joint_aliases(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("alias file '" + path.string() + "': " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("alias file must map alias -> canonical joint name");
    JointAliases out;
    for (const auto& [alias, target] : doc.items()) {
        if (!target.is_string()) throw ConfigError("alias '" + alias + "' must map to a string");
        const auto id = joint_from_canonical_name(target.get<std::string>());
        if (!id) throw ConfigError("alias '" + alias + "' targets unknown joint '" + target.get<std::string>() + "'");
        out.emplace(alias, *id);
    }
    return out;
}

RawMotionTable map_joints(const RawMotionTable& table, const JointAliases& extra) {
    RawMotionTable out;
    out.sample_rate_hz = table.sample_rate_hz;
    out.source_id = table.source_id;
    out.predicted_stroke = table.predicted_stroke;
    out.warnings = table.warnings;

    std::map<std::string, std::optional<JointId>> cache;
    std::set<std::string> dropped;
    std::map<std::pair<long, JointId>, std::string> claimed;
    for (const auto& row : table.rows) {
        auto [it, inserted] = cache.try_emplace(row.joint);
        if (inserted) it->second = resolve_joint_name(row.joint, extra);
        const auto& id = it->second;
        if (!id) {
            if (dropped.insert(row.joint).second) {
                out.warnings.push_back("dropped unmapped joint '" + row.joint + "'");
            }
            continue;
        }
        const auto [claim, fresh] = claimed.try_emplace({row.frame, *id}, row.joint);
        if (!fresh && claim->second != row.joint) {
            throw MappingError("joints '" + claim->second + "' and '" + row.joint + "' both map to '" +
                               std::string(canonical_joint(*id).name) + "' in frame " + std::to_string(row.frame));
        }
        RawObservation mapped = row;
        mapped.joint = std::string(canonical_joint(*id).name);
        out.rows.push_back(std::move(mapped));
    }
    return out;
}

SkeletonSequence impute_gaps(const RawMotionTable& table) {
    std::set<long> frame_set;
    std::set<JointId> joint_set;
    for (const auto& row : table.rows) {
        frame_set.insert(row.frame);
        const auto id = joint_from_canonical_name(row.joint);
        if (!id) throw ImputationError("joint '" + row.joint + "' is not canonical; run map_joints first");
        joint_set.insert(*id);
    }
    if (frame_set.size() < 3) {
        throw InsufficientFramesError("need at least 3 frames, found " + std::to_string(frame_set.size()));
    }

    SkeletonSequence seq;
    seq.frame_numbers.assign(frame_set.begin(), frame_set.end());
    seq.joints.assign(joint_set.begin(), joint_set.end());
    seq.sample_rate_hz = table.sample_rate_hz;
    seq.source_id = table.source_id;
    seq.warnings = table.warnings;

    const auto frames = seq.frame_count();
    const auto joint_count = static_cast<Eigen::Index>(seq.joints.size());
    std::map<long, Eigen::Index> frame_index;
    for (Eigen::Index t = 0; t < frames; ++t) frame_index[seq.frame_numbers[static_cast<std::size_t>(t)]] = t;

    std::vector<Eigen::Matrix<double, Eigen::Dynamic, 3>> positions(
        seq.joints.size(), Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(frames, 3));
    std::vector<std::vector<char>> valid(seq.joints.size(), std::vector<char>(static_cast<std::size_t>(frames), 0));
    for (const auto& row : table.rows) {
        if (!row.valid) continue;
        const auto j = static_cast<std::size_t>(
            std::find(seq.joints.begin(), seq.joints.end(), *joint_from_canonical_name(row.joint)) -
            seq.joints.begin());
        const auto t = frame_index.at(row.frame);
        positions[j].row(t) = row.position.transpose();
        valid[j][static_cast<std::size_t>(t)] = 1;
    }

    std::vector<double> abscissa(seq.frame_numbers.begin(), seq.frame_numbers.end());
    seq.imputed.resize(frames, joint_count);
    for (std::size_t j = 0; j < seq.joints.size(); ++j) {
        std::unique_ptr<bool[]> mask(new bool[static_cast<std::size_t>(frames)]);
        for (Eigen::Index t = 0; t < frames; ++t) mask[static_cast<std::size_t>(t)] = valid[j][static_cast<std::size_t>(t)] != 0;
        const auto n_valid = std::count(valid[j].begin(), valid[j].end(), 1);
        if (n_valid < 2) {
            throw ImputationError("joint '" + std::string(canonical_joint(seq.joints[j]).name) + "' has " +
                                  std::to_string(n_valid) + " valid frame(s); at least 2 required");
        }
        fill_gaps(positions[j], std::span<const bool>(mask.get(), static_cast<std::size_t>(frames)), abscissa);
        for (Eigen::Index t = 0; t < frames; ++t) {
            seq.imputed(t, static_cast<Eigen::Index>(j)) = !mask[static_cast<std::size_t>(t)];
        }
    }
    seq.positions = std::move(positions);
    return seq;
}

RawMotionTable to_table(const SkeletonSequence& seq) {
    RawMotionTable table;
    table.sample_rate_hz = seq.sample_rate_hz;
    table.source_id = seq.source_id;
    for (Eigen::Index t = 0; t < seq.frame_count(); ++t) {
        for (std::size_t j = 0; j < seq.joints.size(); ++j) {
            RawObservation obs;
            obs.frame = seq.frame_numbers[static_cast<std::size_t>(t)];
            obs.joint = std::string(canonical_joint(seq.joints[j]).name);
            obs.position = seq.positions[j].row(t).transpose();
            table.rows.push_back(std::move(obs));
        }
    }
    return table;
}

ValidationMetrics validate_sequence(const SkeletonSequence& seq) {
    ValidationMetrics m;
    m.frame_count = seq.frame_count();
    m.joint_count = seq.joints.size();
    for (std::size_t j = 0; j < seq.joints.size(); ++j) {
        const auto name = std::string(canonical_joint(seq.joints[j]).name);
        const auto imputed = seq.imputed.col(static_cast<Eigen::Index>(j)).count();
        m.imputed_fraction[name] =
            m.frame_count > 0 ? static_cast<double>(imputed) / static_cast<double>(m.frame_count) : 0.0;
    }
    for (const auto& cj : kVocabulary) {
        (seq.has(cj.id) ? m.available_joints : m.unavailable_joints).emplace_back(cj.name);
    }
    return m;
}

SkeletonSequence load_skeleton(const std::filesystem::path& path, MotionFormat format, double sample_rate_hz,
                               const JointAliases& extra) {
    return impute_gaps(map_joints(parse_motion_file(path, format, sample_rate_hz), extra));
}

}  // namespace kinecoach
