#include "vadminer/stats.hpp"

#include "vadminer/distributions.hpp"
#include "vadminer/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace vadminer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_size(std::span<const double> x, std::size_t n, const char* what) {
    if (x.size() < n) throw ContractError(std::string(what) + ": sample too small");
}

double sum_sq_dev(std::span<const double> x, double m) {
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s;
}

} // namespace

double mean(std::span<const double> x) {
    require_size(x, 1, "mean");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    require_size(x, 2, "sample_variance");
    return sum_sq_dev(x, mean(x)) / static_cast<double>(x.size() - 1);
}

double sample_sd(std::span<const double> x) { return std::sqrt(sample_variance(x)); }

double lower_median(std::span<const double> x) {
    require_size(x, 1, "lower_median");
    std::vector<double> v(x.begin(), x.end());
    const auto k = (v.size() - 1) / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
}

double median(std::span<const double> x) {
    require_size(x, 1, "median");
    std::vector<double> v(x.begin(), x.end());
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

EffectLabel label_effect(double d) {
    const double m = std::fabs(d);
    if (m < 0.2) return EffectLabel::Trivial;
    if (m < 0.5) return EffectLabel::Small;
    if (m < 0.8) return EffectLabel::Medium;
    return EffectLabel::Large;
}

std::string_view to_string(EffectLabel label) {
    switch (label) {
    case EffectLabel::Trivial: return "trivial";
    case EffectLabel::Small: return "small";
    case EffectLabel::Medium: return "medium";
    case EffectLabel::Large: return "large";
    }
    return "trivial";
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
    require_size(a, 2, "cohens_d");
    require_size(b, 2, "cohens_d");
    const double ma = mean(a);
    const double mb = mean(b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double pooled = std::sqrt((sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) / (na + nb - 2.0));
    if (pooled == 0.0) throw DegenerateVarianceError();
    return (ma - mb) / pooled;
}

ComparisonResult welch_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
    require_size(a, 2, "welch_t_test");
    require_size(b, 2, "welch_t_test");
    ComparisonResult r;
    r.n_a = a.size();
    r.n_b = b.size();
    r.mean_a = mean(a);
    r.mean_b = mean(b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double qa = sample_variance(a) / na;
    const double qb = sample_variance(b) / nb;
    const double se2 = qa + qb;
    const double diff = r.mean_a - r.mean_b;

    if (se2 == 0.0) {
        r.df = na + nb - 2.0;
        r.degenerate_variance = true;
        if (diff == 0.0) {
            r.t = 0.0;
            r.p = 1.0;
            r.d = 0.0;
        } else {
            r.t = diff > 0 ? kInf : -kInf;
            r.p = 0.0;
            r.d = r.t;
        }
    } else {
        r.t = diff / std::sqrt(se2);
        r.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
        r.p = student_t_two_sided_p(r.t, r.df);
        r.d = cohens_d(a, b);
    }
    r.d_label = label_effect(r.d);
    r.significant = r.p < alpha;
    return r;
}

ComparisonResult paired_t_test(std::span<const double> before, std::span<const double> after,
                               double alpha) {
    if (before.size() != after.size())
        throw ContractError("paired_t_test: samples differ in length");
    require_size(before, 2, "paired_t_test");
    ComparisonResult r;
    r.n_a = r.n_b = before.size();
    r.mean_a = mean(before);
    r.mean_b = mean(after);
    std::vector<double> diffs(before.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i] = after[i] - before[i];
    const double n = static_cast<double>(diffs.size());
    const double md = mean(diffs);
    const double sd = sample_sd(diffs);
    r.df = n - 1.0;
    if (sd == 0.0) {
        r.degenerate_variance = md != 0.0;
        r.t = md == 0.0 ? 0.0 : (md > 0 ? kInf : -kInf);
        r.d = r.t;
        r.p = md == 0.0 ? 1.0 : 0.0;
    } else {
        r.t = md / (sd / std::sqrt(n));
        r.d = md / sd;
        r.p = student_t_two_sided_p(r.t, r.df);
    }
    r.d_label = label_effect(r.d);
    r.significant = r.p < alpha;
    return r;
}

double bonferroni_alpha(double alpha, int comparisons) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ContractError("bonferroni_alpha: alpha outside (0, 1]");
    if (comparisons < 1) throw ContractError("bonferroni_alpha: comparisons must be >= 1");
    return alpha / comparisons;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ContractError("pearson_r: samples differ in length");
    require_size(x, 2, "pearson_r");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateVarianceError();
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double FitResult::predict(double x) const {
    double y = 0.0;
    double power = 1.0;
    for (double c : coefficients) {
        y += c * power;
        power *= x;
    }
    return y;
}

FitResult polyfit(std::span<const double> x, std::span<const double> y, int degree) {
    if (degree != 1 && degree != 2) throw ContractError("polyfit: degree must be 1 or 2");
    if (x.size() != y.size()) throw ContractError("polyfit: x and y differ in length");
    if (x.size() <= static_cast<std::size_t>(degree) + 1)
        throw ContractError("polyfit: need more points than degree + 1");

    const auto n = static_cast<Eigen::Index>(x.size());
    const Eigen::Index k = degree + 1;
    Eigen::MatrixXd design(n, k);
    Eigen::VectorXd response(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double power = 1.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            design(i, j) = power;
            power *= x[static_cast<std::size_t>(i)];
        }
        response(i) = y[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-12);
    if (qr.rank() < k) {
        std::vector<std::string> names{"x"};
        if (degree == 2) names.emplace_back("x^2");
        throw SingularDesignError(std::move(names));
    }

    FitResult fit;
    const double my = mean(y);
    const double total_ss = sum_sq_dev(y, my);
    if (total_ss == 0.0) {
        fit.coefficients.assign(static_cast<std::size_t>(k), 0.0);
        fit.coefficients[0] = my;
        return fit;
    }
    const Eigen::VectorXd beta = qr.solve(response);
    fit.coefficients.assign(beta.data(), beta.data() + k);
    fit.residual_ss = (response - design * beta).squaredNorm();
    fit.r_squared = std::clamp(1.0 - fit.residual_ss / total_ss, 0.0, 1.0);
    return fit;
}

} // namespace vadminer
