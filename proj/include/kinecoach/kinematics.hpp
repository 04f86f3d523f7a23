#pragma once

// Numeric kernels for trajectory analysis. Samples are rows, components are
// columns; everything is templated on the Eigen scalar type.

#include "kinecoach/error.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kinecoach {

template <typename Scalar>
using Trajectory = Eigen::Matrix<Scalar, Eigen::Dynamic, 3>;

template <typename Scalar>
using Series = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

// Vectors shorter than this are treated as zero-length.
inline constexpr double kMinSegmentLength = 1e-9;

// (x(t+1) - x(t-1)) / (2 dt) for t = 1 .. n-2; result has n-2 rows.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime>
central_difference(const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar dt) {
    const Eigen::Index n = x.rows();
    if (n < 3) {
        throw InsufficientFramesError("central difference needs at least 3 samples, got " + std::to_string(n));
    }
    if (!(dt > 0)) throw std::invalid_argument("central difference: dt must be positive");
    return (x.bottomRows(n - 2) - x.topRows(n - 2)) / (typename Derived::Scalar(2) * dt);
}

// Velocity at interior frames 1 .. T-2.
template <typename Derived>
auto central_velocity(const Eigen::MatrixBase<Derived>& positions, typename Derived::Scalar dt) {
    return central_difference(positions, dt);
}

// Central difference of the central velocity: frames 2 .. T-3.
template <typename Derived>
auto central_acceleration(const Eigen::MatrixBase<Derived>& positions, typename Derived::Scalar dt) {
    if (positions.rows() < 5) {
        throw InsufficientFramesError("acceleration needs at least 5 frames, got " +
                                      std::to_string(positions.rows()));
    }
    return central_difference(central_difference(positions, dt), dt);
}

// Row-wise Euclidean norm.
template <typename Derived>
Series<typename Derived::Scalar> row_norms(const Eigen::MatrixBase<Derived>& x) {
    return x.rowwise().norm();
}

// Angle at vertex b between (a - b) and (c - b), in [0, pi].
template <typename Scalar>
Scalar joint_angle(const Vec3<Scalar>& a, const Vec3<Scalar>& b, const Vec3<Scalar>& c) {
    const Vec3<Scalar> u = a - b;
    const Vec3<Scalar> v = c - b;
    if (u.norm() < Scalar(kMinSegmentLength) || v.norm() < Scalar(kMinSegmentLength)) {
        throw DegenerateGeometryError("joint angle: zero-length segment");
    }
    using std::atan2;
    return atan2(u.cross(v).norm(), u.dot(v));
}

// Shifts each sample by a multiple of 2*pi so successive differences fall in
// (-pi, pi].
template <typename Derived>
Series<typename Derived::Scalar> unwrap_angles(const Eigen::MatrixBase<Derived>& raw) {
    using Scalar = typename Derived::Scalar;
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    constexpr Scalar two_pi = 2 * pi;
    Series<Scalar> out(raw.size());
    if (raw.size() == 0) return out;
    out(0) = raw(0);
    for (Eigen::Index i = 1; i < raw.size(); ++i) {
        Scalar candidate = raw(i) + two_pi * std::round((out(i - 1) - raw(i)) / two_pi);
        const Scalar step = candidate - out(i - 1);
        if (step <= -pi) {
            candidate += two_pi;
        } else if (step > pi) {
            candidate -= two_pi;
        }
        out(i) = candidate;
    }
    return out;
}

// Maps an angle into (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar angle) {
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    Scalar w = std::remainder(angle, 2 * pi);
    if (w <= -pi) w += 2 * pi;
    return w;
}

// Index of the maximum, earliest on ties. Requires a non-empty input.
template <typename Derived>
Eigen::Index argmax_earliest(const Eigen::MatrixBase<Derived>& x) {
    if (x.size() == 0) throw std::invalid_argument("argmax of empty series");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < x.size(); ++i) {
        if (x(i) > x(best)) best = i;
    }
    return best;
}

// 0.5 * v^2 with unit mass.
template <typename Derived>
Series<typename Derived::Scalar> kinetic_energy(const Eigen::MatrixBase<Derived>& speed) {
    return (typename Derived::Scalar(0.5) * speed.array().square()).matrix();
}

// Largest |dKE/dt| over interior samples of a kinetic-energy series.
template <typename Derived>
typename Derived::Scalar peak_power(const Eigen::MatrixBase<Derived>& ke, typename Derived::Scalar dt) {
    if (ke.size() < 3) {
        throw InsufficientFramesError("peak power needs at least 3 samples, got " + std::to_string(ke.size()));
    }
    return central_difference(ke, dt).cwiseAbs().maxCoeff();
}

// Timing of the peak of `speed` as a percentage of a T-frame stroke. The
// series is assumed centred in the stroke (T - 2 interior samples map to
// frames 1 .. T-2; a full-length series maps one-to-one).
template <typename Derived>
double kinetic_chain_timing(const Eigen::MatrixBase<Derived>& speed, Eigen::Index frame_count) {
    if (frame_count < 2) throw std::invalid_argument("kinetic chain timing needs at least 2 frames");
    const Eigen::Index offset = (frame_count - speed.size()) / 2;
    const Eigen::Index frame = argmax_earliest(speed) + offset;
    return 100.0 * static_cast<double>(frame) / static_cast<double>(frame_count - 1);
}

// Half-open frame interval [begin, end).
struct FrameRange {
    Eigen::Index begin = 0;
    Eigen::Index end = 0;

    Eigen::Index size() const { return end - begin; }
    bool operator==(const FrameRange&) const = default;
};

struct StrokePhases {
    FrameRange preparation;
    FrameRange execution;
    FrameRange follow_through;

    bool operator==(const StrokePhases&) const = default;
};

// Boundaries at floor(0.33 T) and floor(0.67 T), nudged so every phase keeps
// at least one frame.
StrokePhases segment_phases(Eigen::Index frame_count);

enum class UpAxis { X, Y, Z };

UpAxis parse_up_axis(std::string_view text);
std::string_view to_string(UpAxis axis);

// Ground-plane components (first, second) of a vector for the given up axis:
// z-up gives (x, y), y-up gives (z, x), x-up gives (y, z).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> ground_components(const Vec3<Scalar>& v, UpAxis up) {
    switch (up) {
        case UpAxis::X:
            return {v.y(), v.z()};
        case UpAxis::Y:
            return {v.z(), v.x()};
        case UpAxis::Z:
            break;
    }
    return {v.x(), v.y()};
}

}  // namespace kinecoach
