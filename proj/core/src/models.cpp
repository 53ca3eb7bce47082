#include "vadminer/models.hpp"

#include "vadminer/distributions.hpp"
#include "vadminer/errors.hpp"
#include "vadminer/parallel.hpp"
#include "vadminer/random.hpp"
#include "vadminer/stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace vadminer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd with_intercept(const DesignMatrix& design) {
    const auto n = static_cast<Eigen::Index>(design.rows());
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(design.cols()) + 1);
    x.col(0).setOnes();
    x.rightCols(static_cast<Eigen::Index>(design.cols())) = design.features();
    return x;
}

std::vector<std::string> with_intercept_names(const DesignMatrix& design) {
    std::vector<std::string> names{std::string(kInterceptName)};
    names.insert(names.end(), design.names().begin(), design.names().end());
    return names;
}

Eigen::MatrixXd unit_columns(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd scaled = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double norm = x.col(j).norm();
        if (norm > 0.0) scaled.col(j) /= norm;
    }
    return scaled;
}

Eigen::Index numeric_rank(const Eigen::MatrixXd& scaled) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(1e-10);
    return qr.rank();
}

void require_full_rank(const DesignMatrix& design, const Eigen::MatrixXd& x) {
    if (numeric_rank(unit_columns(x)) < x.cols()) {
        auto names = collinear_columns(design);
        if (names.empty()) names.emplace_back("<unidentified>");
        throw SingularDesignError(std::move(names));
    }
}

/// (R^T R)^{-1} from the thin QR of a full-rank matrix.
Eigen::MatrixXd unscaled_covariance(const Eigen::MatrixXd& a) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::Index p = a.cols();
    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    return r_inv * r_inv.transpose();
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double logistic_deviance(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        dev += y(i) * softplus(-eta(i)) + (1.0 - y(i)) * softplus(eta(i));
    return 2.0 * dev;
}

double ratio_stat(double coefficient, double se) {
    if (se > 0.0 && std::isfinite(se)) return coefficient / se;
    if (coefficient == 0.0) return 0.0;
    return coefficient > 0 ? kInf : -kInf;
}

std::vector<Label> labels_of(const DesignMatrix& design) {
    std::vector<Label> labels(design.rows());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double v = design.outcome()(static_cast<Eigen::Index>(i));
        if (v != 0.0 && v != 1.0) throw ContractError("logistic outcome must be 0 or 1");
        labels[i] = v == 1.0 ? Label::Long : Label::Short;
    }
    return labels;
}

} // namespace

std::string_view to_string(Label label) { return label == Label::Long ? "Long" : "Short"; }

// --- DesignMatrix ------------------------------------------------------------

DesignMatrix::DesignMatrix(std::vector<std::string> names, Eigen::MatrixXd features,
                           Eigen::VectorXd outcome)
    : names_(std::move(names)), features_(std::move(features)), outcome_(std::move(outcome)) {
    if (static_cast<Eigen::Index>(names_.size()) != features_.cols())
        throw ContractError("design: name count does not match column count");
    if (features_.rows() != outcome_.size())
        throw ContractError("design: outcome length does not match row count");
    std::unordered_set<std::string> seen;
    for (const auto& name : names_)
        if (!seen.insert(name).second) throw ContractError("design: duplicate column " + name);
    if (!features_.allFinite() || !outcome_.allFinite())
        throw ContractError("design: non-finite cell");
}

std::optional<std::size_t> DesignMatrix::index_of(std::string_view name) const {
    for (std::size_t j = 0; j < names_.size(); ++j)
        if (names_[j] == name) return j;
    return std::nullopt;
}

std::vector<double> DesignMatrix::column(std::size_t j) const {
    const auto col = features_.col(static_cast<Eigen::Index>(j));
    return {col.data(), col.data() + col.size()};
}

std::vector<double> DesignMatrix::medians() const {
    std::vector<double> out(cols());
    for (std::size_t j = 0; j < cols(); ++j) out[j] = lower_median(column(j));
    return out;
}

std::vector<double> DesignMatrix::sds() const {
    std::vector<double> out(cols());
    for (std::size_t j = 0; j < cols(); ++j) out[j] = sample_sd(column(j));
    return out;
}

DesignMatrix DesignMatrix::select(std::span<const std::string> names) const {
    Eigen::MatrixXd x(features_.rows(), static_cast<Eigen::Index>(names.size()));
    for (std::size_t k = 0; k < names.size(); ++k) {
        const auto j = index_of(names[k]);
        if (!j) throw ContractError("design: unknown column " + names[k]);
        x.col(static_cast<Eigen::Index>(k)) = features_.col(static_cast<Eigen::Index>(*j));
    }
    return DesignMatrix({names.begin(), names.end()}, std::move(x), outcome_);
}

DesignMatrix DesignMatrix::drop(std::span<const std::string> names) const {
    std::vector<std::string> kept;
    for (const auto& name : names_)
        if (std::find(names.begin(), names.end(), name) == names.end()) kept.push_back(name);
    return select(kept);
}

DesignMatrix DesignMatrix::subset_rows(std::span<const std::size_t> rows) const {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), features_.cols());
    Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = features_.row(static_cast<Eigen::Index>(rows[i]));
        y(static_cast<Eigen::Index>(i)) = outcome_(static_cast<Eigen::Index>(rows[i]));
    }
    return DesignMatrix(names_, std::move(x), std::move(y));
}

DesignMatrix DesignMatrix::with_columns(std::span<const std::string> names,
                                        const Eigen::MatrixXd& extra) const {
    if (extra.rows() != features_.rows())
        throw ContractError("design: appended columns have the wrong row count");
    Eigen::MatrixXd x(features_.rows(), features_.cols() + extra.cols());
    x << features_, extra;
    auto all = names_;
    all.insert(all.end(), names.begin(), names.end());
    return DesignMatrix(std::move(all), std::move(x), outcome_);
}

// --- FittedModel -------------------------------------------------------------

std::optional<std::size_t> FittedModel::index_of(std::string_view name) const {
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == name) return j;
    return std::nullopt;
}

double FittedModel::predict_link(std::span<const double> features) const {
    if (features.size() + 1 != coefficients.size())
        throw ContractError("predict: feature count does not match the model");
    double eta = coefficients[0];
    for (std::size_t j = 0; j < features.size(); ++j) eta += coefficients[j + 1] * features[j];
    return eta;
}

double FittedModel::predict(std::span<const double> features) const {
    const double eta = predict_link(features);
    return kind == ModelKind::Logistic ? sigmoid(eta) : eta;
}

// --- fitting -------------------------------------------------------------------

std::vector<Label> binarize_outcome(std::span<const double> resolution_times) {
    if (resolution_times.empty()) return {};
    const double cut = lower_median(resolution_times);
    std::vector<Label> labels(resolution_times.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = resolution_times[i] >= cut ? Label::Long : Label::Short;
    return labels;
}

std::vector<std::string> collinear_columns(const DesignMatrix& design) {
    const Eigen::MatrixXd x = unit_columns(with_intercept(design));
    std::vector<Eigen::Index> kept{0};
    std::vector<std::string> collinear;
    for (Eigen::Index j = 1; j < x.cols(); ++j) {
        Eigen::MatrixXd trial(x.rows(), static_cast<Eigen::Index>(kept.size()) + 1);
        for (std::size_t k = 0; k < kept.size(); ++k)
            trial.col(static_cast<Eigen::Index>(k)) = x.col(kept[k]);
        trial.col(trial.cols() - 1) = x.col(j);
        if (numeric_rank(trial) == trial.cols())
            kept.push_back(j);
        else
            collinear.push_back(design.names()[static_cast<std::size_t>(j - 1)]);
    }
    return collinear;
}

FittedModel fit_logistic(const DesignMatrix& design, const IrlsOptions& options) {
    labels_of(design);  // validates 0/1 coding
    const Eigen::MatrixXd x = with_intercept(design);
    const Eigen::VectorXd& y = design.outcome();
    const auto n = x.rows();
    const auto p = x.cols();
    if (n <= p)
        throw ContractError(fmt::format("fit_logistic: {} rows for {} parameters", n, p));
    require_full_rank(design, x);

    FittedModel model;
    model.kind = ModelKind::Logistic;
    model.names = with_intercept_names(design);
    model.n = static_cast<std::size_t>(n);
    model.df_residual = static_cast<double>(n - p);

    const double ybar = y.mean();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    if (ybar > 0.0 && ybar < 1.0) beta(0) = std::log(ybar / (1.0 - ybar));
    {
        const Eigen::VectorXd eta0 = Eigen::VectorXd::Constant(n, beta(0));
        model.null_deviance = logistic_deviance(eta0, y);
    }

    Eigen::VectorXd eta = x * beta;
    double dev = logistic_deviance(eta, y);
    model.deviance_trace.push_back(dev);
    bool converged = false;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        Eigen::VectorXd sw(n), rhs(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = sigmoid(eta(i));
            const double w = std::max(mu * (1.0 - mu), 1e-12);
            sw(i) = std::sqrt(w);
            rhs(i) = (y(i) - mu) / sw(i);
        }
        const Eigen::MatrixXd a = sw.asDiagonal() * x;
        const Eigen::VectorXd step = a.householderQr().solve(rhs);
        if (!step.allFinite()) break;

        // Near the optimum deviance changes are lost in rounding; allow that much.
        const double slack = 1e-13 * std::max(1.0, dev);
        double scale = 1.0;
        Eigen::VectorXd next = beta + step;
        Eigen::VectorXd next_eta = x * next;
        double next_dev = logistic_deviance(next_eta, y);
        int halvings = 0;
        while (!(next_dev <= dev + slack) && halvings < 40) {
            scale *= 0.5;
            next = beta + scale * step;
            next_eta = x * next;
            next_dev = logistic_deviance(next_eta, y);
            ++halvings;
        }
        if (!(next_dev <= dev + slack)) {
            // No descent direction left at machine precision.
            converged = step.cwiseAbs().maxCoeff() < 1e-6;
            break;
        }
        const double change = (next - beta).cwiseAbs().maxCoeff();
        beta = std::move(next);
        eta = std::move(next_eta);
        dev = next_dev;
        model.deviance_trace.push_back(dev);
        if (change < options.tolerance) {
            converged = true;
            ++iter;
            break;
        }
    }
    model.iterations = iter;
    model.deviance = dev;
    model.separation = eta.cwiseAbs().maxCoeff() > 30.0;
    model.converged = converged && !model.separation;

    Eigen::VectorXd sw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mu = sigmoid(eta(i));
        sw(i) = std::sqrt(std::max(mu * (1.0 - mu), 1e-300));
    }
    const Eigen::MatrixXd cov = unscaled_covariance(sw.asDiagonal() * x);
    model.coefficients.assign(beta.data(), beta.data() + p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double se = std::sqrt(std::max(cov(j, j), 0.0));
        model.std_errors.push_back(se);
        const double z = ratio_stat(beta(j), se);
        model.statistics.push_back(z);
        model.p_values.push_back(normal_two_sided_p(z));
    }
    return model;
}

FittedModel fit_linear(const DesignMatrix& design) {
    const Eigen::MatrixXd x = with_intercept(design);
    const Eigen::VectorXd& y = design.outcome();
    const auto n = x.rows();
    const auto p = x.cols();
    if (n <= p) throw ContractError(fmt::format("fit_linear: {} rows for {} parameters", n, p));
    require_full_rank(design, x);

    const double ybar = y.mean();
    const double total_ss = (y.array() - ybar).square().sum();
    // Averages of equal values can differ in the last bits; treat that as constant too.
    if (y.maxCoeff() - y.minCoeff() <= 1e-12 * std::max(1.0, std::fabs(ybar)))
        throw DegenerateVarianceError("degenerate variance: constant response");

    const Eigen::VectorXd beta = x.householderQr().solve(y);
    const double rss = (y - x * beta).squaredNorm();
    const double df = static_cast<double>(n - p);
    const double sigma2 = rss / df;
    const Eigen::MatrixXd cov = unscaled_covariance(x) * sigma2;

    FittedModel model;
    model.kind = ModelKind::Linear;
    model.names = with_intercept_names(design);
    model.n = static_cast<std::size_t>(n);
    model.df_residual = df;
    model.deviance = rss;
    model.null_deviance = total_ss;
    model.r_squared = std::clamp(1.0 - rss / total_ss, 0.0, 1.0);
    model.iterations = 1;
    model.coefficients.assign(beta.data(), beta.data() + p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double se = std::sqrt(std::max(cov(j, j), 0.0));
        model.std_errors.push_back(se);
        const double t = ratio_stat(beta(j), se);
        model.statistics.push_back(t);
        model.p_values.push_back(student_t_two_sided_p(t, df));
    }
    return model;
}

double lr_test(const FittedModel& reduced, const FittedModel& full) {
    if (reduced.kind != full.kind) throw ContractError("lr_test: models of different kinds");
    if (reduced.n != full.n) throw ContractError("lr_test: models fitted on different rows");
    for (const auto& name : reduced.names)
        if (!full.index_of(name))
            throw ContractError("lr_test: models are not nested (" + name + " missing from full)");
    const auto df = static_cast<double>(full.names.size()) - static_cast<double>(reduced.names.size());
    if (df <= 0.0) return 1.0;
    const double stat = std::max(0.0, reduced.deviance - full.deviance);
    return chi_square_sf(stat, df);
}

// --- evaluation ----------------------------------------------------------------

bool operator==(const ClassMetrics& a, const ClassMetrics& b) {
    return a.precision == b.precision && a.recall == b.recall && a.f1 == b.f1 &&
           a.support == b.support;
}

double f1_score(double precision, double recall) {
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double auc_score(std::span<const Label> labels, std::span<const double> scores) {
    if (labels.size() != scores.size()) throw ContractError("auc: length mismatch");
    const std::size_t n = labels.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_long = 0.0;
    std::size_t n_long = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]] == Label::Long) rank_sum_long += midrank;
        i = j;
    }
    for (auto l : labels) n_long += l == Label::Long;
    const std::size_t n_short = n - n_long;
    if (n_long == 0 || n_short == 0) return 0.5;
    const double nl = static_cast<double>(n_long);
    return (rank_sum_long - nl * (nl + 1.0) / 2.0) / (nl * static_cast<double>(n_short));
}

CvReport classification_report(std::span<const Label> labels,
                                std::span<const double> probabilities) {
    if (labels.size() != probabilities.size())
        throw ContractError("classification_report: length mismatch");
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool predicted_long = probabilities[i] >= 0.5;
        const bool is_long = labels[i] == Label::Long;
        if (predicted_long && is_long) ++tp;
        else if (predicted_long) ++fp;
        else if (is_long) ++fn;
        else ++tn;
    }
    auto ratio = [](std::size_t a, std::size_t b) {
        return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
    };
    CvReport r;
    r.n = labels.size();
    r.long_class = {ratio(tp, tp + fp), ratio(tp, tp + fn), 0.0, tp + fn};
    r.short_class = {ratio(tn, tn + fn), ratio(tn, tn + fp), 0.0, tn + fp};
    r.long_class.f1 = f1_score(r.long_class.precision, r.long_class.recall);
    r.short_class.f1 = f1_score(r.short_class.precision, r.short_class.recall);
    const double nl = static_cast<double>(r.long_class.support);
    const double ns = static_cast<double>(r.short_class.support);
    const double total = nl + ns;
    if (total > 0) {
        r.weighted.precision = (nl * r.long_class.precision + ns * r.short_class.precision) / total;
        r.weighted.recall = (nl * r.long_class.recall + ns * r.short_class.recall) / total;
        r.weighted.f1 = (nl * r.long_class.f1 + ns * r.short_class.f1) / total;
    }
    r.weighted.support = r.n;
    r.auc = auc_score(labels, probabilities);
    return r;
}

CvReport crossval(const DesignMatrix& design, int folds, std::uint64_t seed, unsigned jobs) {
    if (folds < 2) throw ContractError("crossval: need at least 2 folds");
    const auto labels = labels_of(design);
    const std::size_t n = labels.size();
    if (n < static_cast<std::size_t>(folds)) throw ContractError("crossval: fewer rows than folds");

    std::vector<std::size_t> longs, shorts;
    for (std::size_t i = 0; i < n; ++i) (labels[i] == Label::Long ? longs : shorts).push_back(i);
    if (longs.size() < 2 || shorts.size() < 2)
        throw ContractError("crossval: each class needs at least two rows");
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(longs));
    rng.shuffle(std::span<std::size_t>(shorts));
    std::vector<int> fold_of(n);
    for (std::size_t i = 0; i < longs.size(); ++i) fold_of[longs[i]] = static_cast<int>(i % folds);
    // Continue the rotation so fold sizes stay balanced overall.
    for (std::size_t i = 0; i < shorts.size(); ++i)
        fold_of[shorts[i]] = static_cast<int>((longs.size() + i) % folds);

    std::vector<double> probabilities(n, 0.5);
    parallel_for(static_cast<std::size_t>(folds), jobs, [&](std::size_t f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < n; ++i)
            (fold_of[i] == static_cast<int>(f) ? test : train).push_back(i);
        const auto model = fit_logistic(design.subset_rows(train));
        std::vector<double> row(design.cols());
        for (auto i : test) {
            for (std::size_t j = 0; j < row.size(); ++j)
                row[j] = design.features()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            probabilities[i] = model.predict(row);
        }
    });
    return classification_report(labels, probabilities);
}

CvReport zero_r(std::span<const Label> labels) {
    if (labels.empty()) throw ContractError("zero_r: no labels");
    const auto n_long = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Long));
    const bool majority_long = 2 * n_long >= labels.size();
    const std::vector<double> constant(labels.size(), majority_long ? 1.0 : 0.0);
    return classification_report(labels, constant);
}

std::vector<ImpactEntry> impact_sizes(const FittedModel& model, const DesignMatrix& design) {
    if (model.kind != ModelKind::Logistic) throw ContractError("impact_sizes: logistic model required");
    if (model.names.size() != design.cols() + 1)
        throw ContractError("impact_sizes: model was not fitted on this design");
    for (std::size_t j = 0; j < design.cols(); ++j)
        if (model.names[j + 1] != design.names()[j])
            throw ContractError("impact_sizes: column mismatch at " + design.names()[j]);

    const auto medians = design.medians();
    const auto sds = design.sds();
    const double base = model.predict(medians);
    if (!(base > 1e-300)) throw DegenerateVarianceError("degenerate base probability");

    std::vector<ImpactEntry> out;
    out.reserve(design.cols());
    auto row = medians;
    for (std::size_t j = 0; j < design.cols(); ++j) {
        row[j] = medians[j] + sds[j];
        const double dev = model.predict(row);
        row[j] = medians[j];
        out.push_back({design.names()[j], 100.0 * (dev - base) / base, model.coefficients[j + 1]});
    }
    std::stable_sort(out.begin(), out.end(), [](const ImpactEntry& a, const ImpactEntry& b) {
        return std::fabs(a.impact) > std::fabs(b.impact);
    });
    return out;
}

FilteredDesign correlation_filter(const DesignMatrix& design,
                                  std::span<const std::pair<std::string, std::string>> pairs,
                                  double threshold) {
    FilteredDesign result;
    std::vector<std::string> to_drop;
    for (const auto& [keep, drop] : pairs) {
        const auto k = design.index_of(keep);
        const auto d = design.index_of(drop);
        if (!k || !d) continue;
        CorrelationDecision decision{keep, drop, std::numeric_limits<double>::quiet_NaN(), false};
        try {
            decision.r = pearson_r(design.column(*k), design.column(*d));
        } catch (const DegenerateVarianceError&) {
        }
        decision.dropped = std::isfinite(decision.r) && std::fabs(decision.r) > threshold;
        if (decision.dropped) to_drop.push_back(drop);
        result.decisions.push_back(std::move(decision));
    }
    result.design = design.drop(to_drop);
    return result;
}

} // namespace vadminer
