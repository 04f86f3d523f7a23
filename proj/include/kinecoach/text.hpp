#pragma once

#include <cstdio>
#include <string>

namespace kinecoach {

// Fixed two-decimal rendering used for every number shown to the model.
inline std::string format_fixed2(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    std::string out = buf;
    if (out == "-0.00") out = "0.00";
    return out;
}

// Two decimals with trailing zeros dropped: 25 -> "25", 2.5 -> "2.5".
inline std::string format_compact(double value) {
    auto out = format_fixed2(value);
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return out;
}

}  // namespace kinecoach
