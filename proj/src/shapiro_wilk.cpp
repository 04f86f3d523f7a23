// Shapiro-Wilk W and its p-value following Royston (1995), algorithm AS R94.

#include "kinecoach/cohort_stats.hpp"
#include "kinecoach/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace kinecoach {

namespace {

// c[0] + c[1] x + c[2] x^2 + ...
template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
    double result = 0.0;
    for (std::size_t i = N; i-- > 0;) result = result * x + c[i];
    return result;
}

constexpr std::array<double, 6> kC1 = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
constexpr std::array<double, 6> kC2 = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr std::array<double, 4> kC3 = {0.5440, -0.39978, 0.025054, -6.714e-4};
constexpr std::array<double, 4> kC4 = {1.3822, -0.77857, 0.062767, -0.0020322};
constexpr std::array<double, 4> kC5 = {-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr std::array<double, 3> kC6 = {-0.4803, -0.082676, 0.0030302};
constexpr std::array<double, 2> kG = {-2.273, 0.459};

// Coefficients a_1..a_{n/2} for the lower half of the order statistics.
std::vector<double> coefficients(std::size_t n) {
    const std::size_t half = n / 2;
    std::vector<double> a(half);
    if (n == 3) {
        a[0] = std::sqrt(0.5);
        return a;
    }
    const boost::math::normal_distribution<double> standard;
    const double an = static_cast<double>(n);
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        m[i] = boost::math::quantile(standard, (static_cast<double>(i + 1) - 0.375) / (an + 0.25));
        summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(kC1, rsn) - m[0] / ssumm2;

    std::size_t first_plain;
    double fac;
    if (n > 5) {
        first_plain = 2;
        const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        a[1] = a2;
    } else {
        first_plain = 1;
        fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_plain; i < half; ++i) a[i] = -m[i] / fac;
    return a;
}

}  // namespace

ShapiroWilkResult shapiro_wilk(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw StatsError("Shapiro-Wilk needs at least 3 observations");
    if (n > 5000) throw StatsError("Shapiro-Wilk approximation is valid only up to 5000 observations");

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const double range = sorted.back() - sorted.front();
    if (!(range > 1e-19 * std::max(1.0, std::abs(sorted.front())))) {
        throw StatsError("Shapiro-Wilk undefined for a constant sample");
    }

    const auto a = coefficients(n);
    double numerator = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) numerator += a[i] * (sorted[n - 1 - i] - sorted[i]);
    double mu = 0.0;
    for (const double v : sorted) mu += v;
    mu /= static_cast<double>(n);
    double ssq = 0.0;
    for (const double v : sorted) ssq += (v - mu) * (v - mu);

    ShapiroWilkResult result;
    result.w = std::min(1.0, numerator * numerator / ssq);
    const double w = result.w;

    if (n == 3) {
        constexpr double pi6 = 6.0 / std::numbers::pi;
        const double stqr = std::asin(std::sqrt(0.75));
        result.p_value = std::max(0.0, pi6 * (std::asin(std::sqrt(w)) - stqr));
        return result;
    }

    const double an = static_cast<double>(n);
    double w1 = std::log(1.0 - w);
    double m;
    double s;
    if (n <= 11) {
        const double gamma = poly(kG, an);
        if (w1 >= gamma) {
            result.p_value = 1e-99;
            return result;
        }
        w1 = -std::log(gamma - w1);
        m = poly(kC3, an);
        s = std::exp(poly(kC4, an));
    } else {
        const double ln_n = std::log(an);
        m = poly(kC5, ln_n);
        s = std::exp(poly(kC6, ln_n));
    }
    const double z = (w1 - m) / s;
    result.p_value = 0.5 * std::erfc(z / std::numbers::sqrt2);
    return result;
}

}  // namespace kinecoach
