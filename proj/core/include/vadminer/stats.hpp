#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace vadminer {

double mean(std::span<const double> x);
/// Sample variance (n - 1 denominator); requires n >= 2.
double sample_variance(std::span<const double> x);
double sample_sd(std::span<const double> x);

/// Lower middle value for even n.
double lower_median(std::span<const double> x);
/// Average of the two middle values for even n.
double median(std::span<const double> x);

enum class EffectLabel { Trivial, Small, Medium, Large };

/// |d| < 0.2 trivial, < 0.5 small, < 0.8 medium, otherwise large.
EffectLabel label_effect(double d);
std::string_view to_string(EffectLabel label);

/// Outcome of a two-sample or paired comparison.
///
/// For independent samples t and d are oriented as a - b. For paired samples
/// they are oriented as after - before (a positive d means an increase).
struct ComparisonResult {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    double d = 0.0;
    EffectLabel d_label = EffectLabel::Trivial;
    bool significant = false;
    /// Set when a variance is zero and t/d are reported as 0 or infinite.
    bool degenerate_variance = false;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

/// Unequal-variance t-test with Welch-Satterthwaite df; d is the pooled-SD
/// Cohen's d. `significant` is p < alpha. Requires |a|, |b| >= 2.
ComparisonResult welch_t_test(std::span<const double> a, std::span<const double> b,
                              double alpha = 0.05);

/// One-sample t-test on after - before; d = mean diff / sd of diffs.
/// Requires equal lengths >= 2.
ComparisonResult paired_t_test(std::span<const double> before, std::span<const double> after,
                               double alpha = 0.05);

/// (mean_a - mean_b) / pooled SD. Throws DegenerateVarianceError when the
/// pooled SD is zero.
double cohens_d(std::span<const double> a, std::span<const double> b);

/// alpha / comparisons.
double bonferroni_alpha(double alpha, int comparisons);

/// Sample Pearson correlation. Throws DegenerateVarianceError on a constant input.
double pearson_r(std::span<const double> x, std::span<const double> y);

struct FitResult {
    std::vector<double> coefficients;  // ascending powers: c0 + c1 x + c2 x^2
    double r_squared = 0.0;
    double residual_ss = 0.0;

    double predict(double x) const;
};

/// Least-squares polynomial of degree 1 or 2. R^2 is 0 for a constant y.
FitResult polyfit(std::span<const double> x, std::span<const double> y, int degree);

} // namespace vadminer
