#include "kinecoach/kinematics.hpp"

#include <algorithm>

namespace kinecoach {

StrokePhases segment_phases(Eigen::Index frame_count) {
    if (frame_count < 3) {
        throw InsufficientFramesError("phase segmentation needs at least 3 frames, got " +
                                      std::to_string(frame_count));
    }
    // Integer arithmetic keeps floor(0.33 T) exact.
    Eigen::Index first = (33 * frame_count) / 100;
    Eigen::Index second = (67 * frame_count) / 100;
    first = std::max<Eigen::Index>(first, 1);
    second = std::max(second, first + 1);
    second = std::min(second, frame_count - 1);
    first = std::min(first, second - 1);
    return {{0, first}, {first, second}, {second, frame_count}};
}

UpAxis parse_up_axis(std::string_view text) {
    if (text == "x" || text == "X") return UpAxis::X;
    if (text == "y" || text == "Y") return UpAxis::Y;
    if (text == "z" || text == "Z") return UpAxis::Z;
    throw std::invalid_argument("up axis must be x, y or z, got '" + std::string(text) + "'");
}

std::string_view to_string(UpAxis axis) {
    switch (axis) {
        case UpAxis::X:
            return "x";
        case UpAxis::Y:
            return "y";
        case UpAxis::Z:
            break;
    }
    return "z";
}

}  // namespace kinecoach
