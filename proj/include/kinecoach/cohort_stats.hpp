#pragma once

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kinecoach {

enum class Group { Expert, Beginner };

std::string_view to_string(Group group);
Group parse_group(std::string_view text);

struct CohortSample {
    Group group = Group::Expert;
    std::string source_id;
    double racket_velocity_max = 0.0;
    double rotation_range_deg = 0.0;
    double peak_angular_velocity = 0.0;
    double stroke_duration_s = 0.0;
};

// The four compared features, in output order.
const std::vector<std::string_view>& cohort_feature_keys();
double cohort_feature(const CohortSample& sample, std::string_view key);

// Header: group,source_id,racket_velocity_max,rotation_range_deg,
//         peak_angular_velocity,stroke_duration_s
std::vector<CohortSample> parse_cohort_csv(std::string_view text);
std::vector<CohortSample> load_cohort_csv(const std::filesystem::path& path);

double mean(std::span<const double> x);
// Bessel-corrected.
double sample_variance(std::span<const double> x);

// (mean(a) - mean(b)) / pooled sample standard deviation.
double cohens_d(std::span<const double> a, std::span<const double> b);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    // Welch-Satterthwaite degrees of freedom; 0 for rank tests.
    double dof = 0.0;
};

// Two-sided Welch t-test.
TestResult welch_t(std::span<const double> a, std::span<const double> b);

// U for the first sample (pairs a > b plus half the ties); two-sided p from
// the normal approximation with tie and continuity corrections.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

struct ShapiroWilkResult {
    double w = 1.0;
    double p_value = 1.0;
};

// Royston's approximation (AS R94), 3 <= n <= 5000.
ShapiroWilkResult shapiro_wilk(std::span<const double> x);

enum class TestKind { WelchT, MannWhitneyU };

std::string_view to_string(TestKind kind);

struct TestChoice {
    TestKind kind = TestKind::MannWhitneyU;
    std::optional<ShapiroWilkResult> normality_a;
    std::optional<ShapiroWilkResult> normality_b;
    std::optional<std::string> warning;
};

// Welch when neither sample rejects normality at alpha, else Mann-Whitney.
TestChoice choose_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

struct AlignedSeries {
    // Offset (relative to impact) of row 0.
    Eigen::Index first_offset = 0;
    // Rows are offsets, columns are input series; NaN where a series has no sample.
    Eigen::MatrixXd values;

    Eigen::Index row_of(Eigen::Index offset) const { return offset - first_offset; }
};

// Unwraps each angle series and shifts it so its impact frame sits at offset 0.
AlignedSeries align_and_unwrap(const std::vector<Eigen::VectorXd>& series, const std::vector<Eigen::Index>& impacts);

struct BoxPlot {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double lo_whisker = 0.0;
    double hi_whisker = 0.0;
    std::vector<double> outliers;
};

// Linear-interpolated quartiles; Tukey whiskers at 1.5 IQR.
BoxPlot box_plot(std::span<const double> x);

struct FeatureComparison {
    std::string feature;
    TestKind test = TestKind::MannWhitneyU;
    double statistic = 0.0;
    double p_value = 1.0;
    std::optional<double> cohens_d;  // absent for zero pooled variance
    std::size_t n_expert = 0;
    std::size_t n_beginner = 0;
    std::vector<std::string> warnings;
    BoxPlot expert_box;
    BoxPlot beginner_box;
};

struct CohortStats {
    std::vector<FeatureComparison> features;
};

// Expert is the first sample in every test, so positive d means experts higher.
CohortStats run_cohort_analysis(const std::vector<CohortSample>& samples);

nlohmann::json to_json(const CohortStats& stats);
// One <feature>.csv per feature with columns group,q1,median,q3,lo_whisker,hi_whisker,outliers.
std::vector<std::filesystem::path> write_box_plot_csvs(const CohortStats& stats, const std::filesystem::path& dir);

}  // namespace kinecoach
