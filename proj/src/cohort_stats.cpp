#include "kinecoach/cohort_stats.hpp"

#include "kinecoach/error.hpp"
#include "kinecoach/kinematics.hpp"
#include "kinecoach/report_json.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace kinecoach {

namespace {

using json = nlohmann::json;

const std::vector<std::string_view> kCohortKeys = {"racket_velocity_max", "rotation_range_deg",
                                                   "peak_angular_velocity", "stroke_duration_s"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

void require_size(std::span<const double> x, std::size_t n, const char* what) {
    if (x.size() < n) {
        throw StatsError(std::string(what) + " needs at least " + std::to_string(n) + " observations per group");
    }
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// Type-7 quantile of sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> column(const std::vector<CohortSample>& samples, Group group, std::string_view key) {
    std::vector<double> out;
    for (const auto& s : samples) {
        if (s.group == group) out.push_back(cohort_feature(s, key));
    }
    return out;
}

}  // namespace

std::string_view to_string(Group group) { return group == Group::Expert ? "expert" : "beginner"; }

Group parse_group(std::string_view text) {
    std::string lower(trim(text));
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "expert") return Group::Expert;
    if (lower == "beginner" || lower == "amateur") return Group::Beginner;
    throw ParseError("unknown group '" + std::string(text) + "' (expected expert or beginner)");
}

const std::vector<std::string_view>& cohort_feature_keys() { return kCohortKeys; }

double cohort_feature(const CohortSample& sample, std::string_view key) {
    if (key == "racket_velocity_max") return sample.racket_velocity_max;
    if (key == "rotation_range_deg") return sample.rotation_range_deg;
    if (key == "peak_angular_velocity") return sample.peak_angular_velocity;
    if (key == "stroke_duration_s") return sample.stroke_duration_s;
    throw std::invalid_argument("unknown cohort feature '" + std::string(key) + "'");
}

std::vector<CohortSample> parse_cohort_csv(std::string_view text) {
    std::vector<CohortSample> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        for (;;) {
            const auto comma = rest.find(',');
            fields.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!header) {
            const std::vector<std::string_view> expected = {"group", "source_id", "racket_velocity_max",
                                                            "rotation_range_deg", "peak_angular_velocity",
                                                            "stroke_duration_s"};
            if (fields != expected) throw ParseError("unexpected cohort CSV header", line_no);
            header = true;
            continue;
        }
        if (fields.size() != 6) throw ParseError("expected 6 fields, got " + std::to_string(fields.size()), line_no);
        CohortSample s;
        try {
            s.group = parse_group(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        s.source_id = std::string(fields[1]);
        double* targets[] = {&s.racket_velocity_max, &s.rotation_range_deg, &s.peak_angular_velocity,
                             &s.stroke_duration_s};
        for (std::size_t k = 0; k < 4; ++k) {
            const auto cell = fields[2 + k];
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), *targets[k]);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(*targets[k])) {
                throw ParseError("invalid value '" + std::string(cell) + "'", line_no);
            }
        }
        out.push_back(std::move(s));
    }
    if (!header) throw ParseError("empty cohort file");
    return out;
}

std::vector<CohortSample> load_cohort_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cohort_csv(buf.str());
}

double mean(std::span<const double> x) {
    if (x.empty()) throw StatsError("mean of empty sample");
    double sum = 0.0;
    for (const double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    require_size(x, 2, "sample variance");
    const double mu = mean(x);
    double ss = 0.0;
    for (const double v : x) ss += (v - mu) * (v - mu);
    return ss / static_cast<double>(x.size() - 1);
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
    require_size(a, 2, "Cohen's d");
    require_size(b, 2, "Cohen's d");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double pooled = ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / (na + nb - 2.0);
    if (!(pooled > 0.0)) throw StatsError("Cohen's d undefined: pooled variance is zero");
    return (mean(a) - mean(b)) / std::sqrt(pooled);
}

TestResult welch_t(std::span<const double> a, std::span<const double> b) {
    require_size(a, 2, "Welch t-test");
    require_size(b, 2, "Welch t-test");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double va = sample_variance(a) / na;
    const double vb = sample_variance(b) / nb;
    if (!(va + vb > 0.0)) throw StatsError("Welch t-test undefined: both groups have zero variance");

    TestResult r;
    r.statistic = (mean(a) - mean(b)) / std::sqrt(va + vb);
    r.dof = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    const boost::math::students_t_distribution<double> t(r.dof);
    r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(t, std::abs(r.statistic))));
    return r;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    require_size(a, 2, "Mann-Whitney U");
    require_size(b, 2, "Mann-Whitney U");
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    const std::size_t n = na + nb;

    // Midranks of the pooled sample.
    std::vector<std::pair<double, std::size_t>> pooled;
    pooled.reserve(n);
    for (std::size_t i = 0; i < na; ++i) pooled.emplace_back(a[i], i);
    for (std::size_t i = 0; i < nb; ++i) pooled.emplace_back(b[i], na + i);
    std::sort(pooled.begin(), pooled.end());
    std::vector<double> rank(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && pooled[j + 1].first == pooled[i].first) ++j;
        const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[pooled[k].second] = midrank;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < na; ++i) rank_sum_a += rank[i];

    const double n1 = static_cast<double>(na);
    const double n2 = static_cast<double>(nb);
    const double total = static_cast<double>(n);
    TestResult r;
    r.statistic = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
    const double mu = n1 * n2 / 2.0;
    const double sigma = std::sqrt(n1 * n2 / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0))));
    if (!(sigma > 0.0)) {
        r.p_value = 1.0;
        return r;
    }
    const double u_max = std::max(r.statistic, n1 * n2 - r.statistic);
    const double z = (u_max - mu - 0.5) / sigma;
    r.p_value = std::clamp(2.0 * normal_sf(z), 0.0, 1.0);
    return r;
}

std::string_view to_string(TestKind kind) { return kind == TestKind::WelchT ? "welch-t" : "mann-whitney-u"; }

TestChoice choose_test(std::span<const double> a, std::span<const double> b, double alpha) {
    TestChoice choice;
    if (a.size() < 3 || b.size() < 3) {
        choice.warning = "sample too small for Shapiro-Wilk (n < 3); using Mann-Whitney U";
        return choice;
    }
    try {
        choice.normality_a = shapiro_wilk(a);
        choice.normality_b = shapiro_wilk(b);
    } catch (const StatsError& e) {
        choice.warning = std::string(e.what()) + "; using Mann-Whitney U";
        return choice;
    }
    const bool normal = choice.normality_a->p_value >= alpha && choice.normality_b->p_value >= alpha;
    choice.kind = normal ? TestKind::WelchT : TestKind::MannWhitneyU;
    return choice;
}

AlignedSeries align_and_unwrap(const std::vector<Eigen::VectorXd>& series, const std::vector<Eigen::Index>& impacts) {
    if (series.size() != impacts.size()) throw StatsError("need exactly one impact frame per series");
    AlignedSeries out;
    if (series.empty()) return out;
    Eigen::Index before = 0;
    Eigen::Index after = 0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto len = series[k].size();
        if (impacts[k] < 0 || impacts[k] >= len) {
            throw StatsError("impact frame " + std::to_string(impacts[k]) + " out of range for series " +
                             std::to_string(k) + " of length " + std::to_string(len));
        }
        before = std::max(before, impacts[k]);
        after = std::max(after, len - 1 - impacts[k]);
    }
    out.first_offset = -before;
    out.values = Eigen::MatrixXd::Constant(before + after + 1, static_cast<Eigen::Index>(series.size()),
                                           std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Eigen::VectorXd unwrapped = unwrap_angles(series[k]);
        const auto col = static_cast<Eigen::Index>(k);
        out.values.block(before - impacts[k], col, unwrapped.size(), 1) = unwrapped;
    }
    return out;
}

BoxPlot box_plot(std::span<const double> x) {
    if (x.empty()) throw StatsError("box plot of empty sample");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    BoxPlot b;
    b.q1 = quantile_sorted(sorted, 0.25);
    b.median = quantile_sorted(sorted, 0.5);
    b.q3 = quantile_sorted(sorted, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.lo_whisker = b.q1;
    b.hi_whisker = b.q3;
    for (const double v : sorted) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
        } else {
            b.lo_whisker = std::min(b.lo_whisker, v);
            b.hi_whisker = std::max(b.hi_whisker, v);
        }
    }
    return b;
}

CohortStats run_cohort_analysis(const std::vector<CohortSample>& samples) {
    CohortStats stats;
    for (const auto key : kCohortKeys) {
        const auto expert = column(samples, Group::Expert, key);
        const auto beginner = column(samples, Group::Beginner, key);
        if (expert.empty()) throw StatsError("no expert samples");
        if (beginner.empty()) throw StatsError("no beginner samples");

        FeatureComparison fc;
        fc.feature = std::string(key);
        fc.n_expert = expert.size();
        fc.n_beginner = beginner.size();
        const auto choice = choose_test(expert, beginner);
        if (choice.warning) fc.warnings.push_back(*choice.warning);
        fc.test = choice.kind;
        const auto result = fc.test == TestKind::WelchT ? welch_t(expert, beginner) : mann_whitney_u(expert, beginner);
        fc.statistic = result.statistic;
        fc.p_value = result.p_value;
        try {
            fc.cohens_d = cohens_d(expert, beginner);
        } catch (const StatsError& e) {
            fc.warnings.emplace_back(e.what());
        }
        fc.expert_box = box_plot(expert);
        fc.beginner_box = box_plot(beginner);
        stats.features.push_back(std::move(fc));
    }
    return stats;
}

json to_json(const CohortStats& stats) {
    json features = json::array();
    for (const auto& f : stats.features) {
        features.push_back({{"feature", f.feature},
                            {"test_used", std::string(to_string(f.test))},
                            {"statistic", f.statistic},
                            {"p_value", f.p_value},
                            {"cohens_d", f.cohens_d ? json(*f.cohens_d) : json(nullptr)},
                            {"n_expert", f.n_expert},
                            {"n_beginner", f.n_beginner},
                            {"warnings", f.warnings}});
    }
    return {{"features", features}};
}

std::vector<std::filesystem::path> write_box_plot_csvs(const CohortStats& stats, const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    for (const auto& f : stats.features) {
        std::string csv = "group,q1,median,q3,lo_whisker,hi_whisker,outliers\n";
        for (const auto& [group, box] : {std::pair{Group::Expert, &f.expert_box}, std::pair{Group::Beginner, &f.beginner_box}}) {
            std::string outliers;
            for (const double v : box->outliers) {
                if (!outliers.empty()) outliers += ';';
                outliers += format_value(v);
            }
            csv += std::string(to_string(group)) + "," + format_value(box->q1) + "," + format_value(box->median) +
                   "," + format_value(box->q3) + "," + format_value(box->lo_whisker) + "," +
                   format_value(box->hi_whisker) + "," + outliers + "\n";
        }
        auto path = dir / (f.feature + ".csv");
        write_text_file(path, csv);
        written.push_back(std::move(path));
    }
    return written;
}

}  // namespace kinecoach
