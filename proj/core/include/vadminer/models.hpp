#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vadminer {

/// Binary resolution-time class. Long is the positive class (coded 1).
enum class Label { Short = 0, Long = 1 };
std::string_view to_string(Label label);

/// Named feature columns plus an outcome (0/1 labels or a real response).
/// The intercept is implicit; fitters add it.
class DesignMatrix {
public:
    DesignMatrix() = default;
    /// Throws ContractError on duplicate names, shape mismatch or non-finite cells.
    DesignMatrix(std::vector<std::string> names, Eigen::MatrixXd features, Eigen::VectorXd outcome);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(features_.rows()); }
    std::size_t cols() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const Eigen::MatrixXd& features() const noexcept { return features_; }
    const Eigen::VectorXd& outcome() const noexcept { return outcome_; }

    std::optional<std::size_t> index_of(std::string_view name) const;
    std::vector<double> column(std::size_t j) const;

    /// Lower median and sample SD of each column.
    std::vector<double> medians() const;
    std::vector<double> sds() const;

    /// Keeps the named columns in the given order. Throws ContractError on an unknown name.
    DesignMatrix select(std::span<const std::string> names) const;
    DesignMatrix drop(std::span<const std::string> names) const;
    DesignMatrix subset_rows(std::span<const std::size_t> rows) const;

    /// Appends columns; same row count required.
    DesignMatrix with_columns(std::span<const std::string> names, const Eigen::MatrixXd& extra) const;

private:
    std::vector<std::string> names_;
    Eigen::MatrixXd features_;
    Eigen::VectorXd outcome_;
};

inline constexpr std::string_view kInterceptName = "(Intercept)";

enum class ModelKind { Logistic, Linear };

struct FittedModel {
    ModelKind kind = ModelKind::Logistic;
    std::vector<std::string> names;  // intercept first
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> statistics;  // z (logistic) or t (linear)
    std::vector<double> p_values;
    /// -2 log-likelihood (logistic) or residual sum of squares (linear).
    double deviance = 0.0;
    double null_deviance = 0.0;
    double df_residual = 0.0;
    double r_squared = 0.0;  // linear only
    bool converged = true;
    bool separation = false;
    int iterations = 0;
    std::size_t n = 0;
    /// Training deviance after each IRLS iteration, starting with the initial fit.
    std::vector<double> deviance_trace;

    std::optional<std::size_t> index_of(std::string_view name) const;
    /// Linear predictor for a feature row (no intercept entry).
    double predict_link(std::span<const double> features) const;
    /// Logistic: probability of Long. Linear: fitted value.
    double predict(std::span<const double> features) const;
};

/// Labels are Long iff time >= lower median.
std::vector<Label> binarize_outcome(std::span<const double> resolution_times);

struct IrlsOptions {
    double tolerance = 1e-8;  // max absolute coefficient change
    int max_iterations = 100;
};

/// Maximum-likelihood logistic regression by IRLS with step halving, so the
/// training deviance never increases. Wald standard errors.
/// Non-convergence (e.g. separation) is flagged, not thrown.
/// Throws SingularDesignError naming the collinear columns.
FittedModel fit_logistic(const DesignMatrix& design, const IrlsOptions& options = {});

/// Ordinary least squares with t-based inference.
/// Throws SingularDesignError on rank deficiency and DegenerateVarianceError
/// for a constant response.
FittedModel fit_linear(const DesignMatrix& design);

/// Columns that do not add rank when appended left to right after the intercept.
std::vector<std::string> collinear_columns(const DesignMatrix& design);

/// Likelihood-ratio (deviance) test of nested logistic models.
/// Throws ContractError if `reduced` is not nested in `full`.
double lr_test(const FittedModel& reduced, const FittedModel& full);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct CvReport {
    ClassMetrics short_class;
    ClassMetrics long_class;
    ClassMetrics weighted;  // support-weighted average of the two classes
    double auc = 0.5;
    std::size_t n = 0;

    friend bool operator==(const CvReport&, const CvReport&) = default;
};

bool operator==(const ClassMetrics& a, const ClassMetrics& b);

/// Harmonic mean; 0 when both are 0.
double f1_score(double precision, double recall);

/// Area under the ROC curve from the Mann-Whitney rank statistic (ties get
/// average ranks). 0.5 when a class is empty.
double auc_score(std::span<const Label> labels, std::span<const double> scores);

/// Metrics at a 0.5 threshold (Long iff probability >= 0.5).
CvReport classification_report(std::span<const Label> labels, std::span<const double> probabilities);

/// Stratified k-fold cross-validation of fit_logistic with a seeded shuffle.
/// Metrics pool the out-of-fold probabilities. `jobs` > 1 fits folds
/// concurrently; the result does not depend on `jobs`.
CvReport crossval(const DesignMatrix& design, int folds, std::uint64_t seed, unsigned jobs = 1);

/// Majority-class baseline; a tie goes to Long.
CvReport zero_r(std::span<const Label> labels);

struct ImpactEntry {
    std::string feature;
    double impact = 0.0;  // percent
    double coefficient = 0.0;
};

/// For each feature: relative change in P(Long) when it moves from its
/// median to median + SD with the others held at their medians.
/// Sorted by descending |impact|. Throws DegenerateVarianceError when the
/// base probability is numerically zero.
std::vector<ImpactEntry> impact_sizes(const FittedModel& model, const DesignMatrix& design);

struct CorrelationDecision {
    std::string keep;
    std::string drop;
    double r = 0.0;  // NaN when a column is constant
    bool dropped = false;
};

struct FilteredDesign {
    DesignMatrix design;
    std::vector<CorrelationDecision> decisions;
};

/// Drops `drop` iff |r(keep, drop)| > threshold. Pairs naming a missing column are skipped.
FilteredDesign correlation_filter(const DesignMatrix& design,
                                  std::span<const std::pair<std::string, std::string>> pairs,
                                  double threshold = 0.7);

} // namespace vadminer
