#include "kinecoach/numeric_tokens.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

namespace kinecoach {

namespace {

std::optional<long long> hundredths(std::string_view token) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    return std::llround(v * 100.0);
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<std::string> extract_numeric_tokens(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_digit(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_digit(text[j])) ++j;
        if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1])) {
            ++j;
            while (j < text.size() && is_digit(text[j])) ++j;
        }
        out.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

bool numbers_match(std::string_view a, std::string_view b) {
    const auto x = hundredths(a);
    const auto y = hundredths(b);
    return x && y && *x == *y;
}

bool matches_any(std::string_view token, const std::set<std::string>& literals) {
    for (const auto& lit : literals) {
        if (numbers_match(token, lit)) return true;
    }
    return false;
}

}  // namespace kinecoach
