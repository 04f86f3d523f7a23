#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace kinecoach {

// Unsigned decimal literals (\d+ or \d+.\d+) in order of appearance.
std::vector<std::string> extract_numeric_tokens(std::string_view text);

// Equal after rounding both to two decimals: "25", "25.0" and "25.00" agree.
bool numbers_match(std::string_view a, std::string_view b);

bool matches_any(std::string_view token, const std::set<std::string>& literals);

}  // namespace kinecoach
