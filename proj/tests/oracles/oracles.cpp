#include "oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

double mean(const Vec& x) {
    long double s = 0;
    for (double v : x) s += v;
    return static_cast<double>(s / x.size());
}

double variance(const Vec& x) {
    const long double m = mean(x);
    long double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return static_cast<double>(s / (x.size() - 1));
}

double student_t_two_sided(double t, double df) {
    if (std::isinf(t)) return 0.0;
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    boost::math::chi_squared dist(df);
    return boost::math::cdf(boost::math::complement(dist, x));
}

double incomplete_beta(double a, double b, double x) { return boost::math::ibeta(a, b, x); }

double incomplete_gamma_lower(double a, double x) { return boost::math::gamma_p(a, x); }

double student_t_cdf(double t, double df) { return boost::math::cdf(boost::math::students_t(df), t); }

double normal_two_sided(double z) {
    boost::math::normal dist;
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(z)));
}

TTest welch(const Vec& a, const Vec& b) {
    const double va = variance(a) / a.size();
    const double vb = variance(b) / b.size();
    TTest r;
    r.t = (mean(a) - mean(b)) / std::sqrt(va + vb);
    r.df = (va + vb) * (va + vb) / (va * va / (a.size() - 1) + vb * vb / (b.size() - 1));
    r.p = student_t_two_sided(r.t, r.df);
    r.d = cohens_d(a, b);
    return r;
}

TTest paired(const Vec& before, const Vec& after) {
    Vec diff(before.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = after[i] - before[i];
    TTest r;
    const double m = mean(diff);
    const double s = std::sqrt(variance(diff));
    r.t = m / (s / std::sqrt(static_cast<double>(diff.size())));
    r.df = static_cast<double>(diff.size() - 1);
    r.p = student_t_two_sided(r.t, r.df);
    r.d = m / s;
    return r;
}

double cohens_d(const Vec& a, const Vec& b) {
    const double na = a.size(), nb = b.size();
    const double pooled = std::sqrt(((na - 1) * variance(a) + (nb - 1) * variance(b)) / (na + nb - 2));
    return (mean(a) - mean(b)) / pooled;
}

double pearson(const Vec& x, const Vec& y) {
    const long double mx = mean(x), my = mean(y);
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

Mat invert(const Mat& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<long double>> a(n, std::vector<long double>(2 * n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (a[pivot][col] == 0) throw std::runtime_error("oracle: singular matrix");
        std::swap(a[pivot], a[col]);
        const long double p = a[col][col];
        for (auto& v : a[col]) v /= p;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const long double f = a[r][col];
            if (f == 0) continue;
            for (std::size_t c = 0; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Mat inv(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = static_cast<double>(a[i][n + j]);
    return inv;
}

namespace {

Mat with_intercept(const Mat& x) {
    Mat out;
    for (const auto& row : x) {
        Vec r{1.0};
        r.insert(r.end(), row.begin(), row.end());
        out.push_back(r);
    }
    return out;
}

// X^T W X and X^T v in long double.
Mat gram(const Mat& x, const Vec& w) {
    const std::size_t p = x.front().size();
    Mat g(p, Vec(p));
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < p; ++k) {
            long double s = 0;
            for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<long double>(x[i][j]) * w[i] * x[i][k];
            g[j][k] = static_cast<double>(s);
        }
    return g;
}

Vec xt_times(const Mat& x, const Vec& v) {
    const std::size_t p = x.front().size();
    Vec out(p);
    for (std::size_t j = 0; j < p; ++j) {
        long double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<long double>(x[i][j]) * v[i];
        out[j] = static_cast<double>(s);
    }
    return out;
}

Vec mat_vec(const Mat& m, const Vec& v) {
    Vec out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        long double s = 0;
        for (std::size_t j = 0; j < v.size(); ++j) s += static_cast<long double>(m[i][j]) * v[j];
        out[i] = static_cast<double>(s);
    }
    return out;
}

} // namespace

Regression ols(const Mat& x_raw, const Vec& y) {
    const Mat x = with_intercept(x_raw);
    const std::size_t n = x.size(), p = x.front().size();
    const Mat inv = invert(gram(x, Vec(n, 1.0)));
    Regression r;
    r.coefficients = mat_vec(inv, xt_times(x, y));
    long double rss = 0, tss = 0;
    const double my = mean(y);
    for (std::size_t i = 0; i < n; ++i) {
        long double fit = 0;
        for (std::size_t j = 0; j < p; ++j) fit += static_cast<long double>(x[i][j]) * r.coefficients[j];
        rss += (y[i] - fit) * (y[i] - fit);
        tss += (y[i] - my) * (y[i] - my);
    }
    r.deviance = static_cast<double>(rss);
    r.r_squared = tss > 0 ? static_cast<double>(1 - rss / tss) : 0.0;
    const double df = static_cast<double>(n - p);
    const double sigma2 = static_cast<double>(rss) / df;
    for (std::size_t j = 0; j < p; ++j) {
        r.std_errors.push_back(std::sqrt(sigma2 * inv[j][j]));
        r.statistics.push_back(r.coefficients[j] / r.std_errors[j]);
        r.p_values.push_back(student_t_two_sided(r.statistics[j], df));
    }
    return r;
}

Regression logistic(const Mat& x_raw, const Vec& y) {
    const Mat x = with_intercept(x_raw);
    const std::size_t n = x.size(), p = x.front().size();
    Vec beta(p, 0.0);
    Mat inv;
    for (int iter = 0; iter < 200; ++iter) {
        Vec w(n), resid(n);
        for (std::size_t i = 0; i < n; ++i) {
            long double eta = 0;
            for (std::size_t j = 0; j < p; ++j) eta += static_cast<long double>(x[i][j]) * beta[j];
            const double mu = static_cast<double>(1 / (1 + std::exp(-eta)));
            w[i] = mu * (1 - mu);
            resid[i] = y[i] - mu;
        }
        inv = invert(gram(x, w));
        const Vec step = mat_vec(inv, xt_times(x, resid));
        double largest = 0;
        for (std::size_t j = 0; j < p; ++j) {
            beta[j] += step[j];
            largest = std::max(largest, std::fabs(step[j]));
        }
        if (largest < 1e-13) break;
    }
    // Final information matrix at the converged beta.
    Vec w(n);
    long double dev = 0;
    for (std::size_t i = 0; i < n; ++i) {
        long double eta = 0;
        for (std::size_t j = 0; j < p; ++j) eta += static_cast<long double>(x[i][j]) * beta[j];
        const long double mu = 1 / (1 + std::exp(-eta));
        w[i] = static_cast<double>(mu * (1 - mu));
        dev += -2 * (y[i] * std::log(mu) + (1 - y[i]) * std::log(1 - mu));
    }
    inv = invert(gram(x, w));
    Regression r;
    r.coefficients = beta;
    r.deviance = static_cast<double>(dev);
    boost::math::normal_distribution<double> z;
    for (std::size_t j = 0; j < p; ++j) {
        r.std_errors.push_back(std::sqrt(inv[j][j]));
        r.statistics.push_back(beta[j] / r.std_errors[j]);
        r.p_values.push_back(2 * boost::math::cdf(boost::math::complement(z, std::fabs(r.statistics[j]))));
    }
    return r;
}

Regression polynomial(const Vec& x, const Vec& y, int degree) {
    Mat design;
    for (double v : x) {
        Vec row;
        for (int k = 1; k <= degree; ++k) row.push_back(std::pow(v, k));
        design.push_back(row);
    }
    return ols(design, y);
}

KsResult ks_uniform(Vec sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double u = std::clamp(sample[i], 0.0, 1.0);
        d = std::max({d, (i + 1) / n - u, u - i / n});
    }
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    // Q_KS(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2)
    double q = 0;
    for (int k = 1; k <= 100; ++k) q += 2 * ((k % 2) ? 1 : -1) * std::exp(-2.0 * k * k * lambda * lambda);
    KsResult r;
    r.statistic = d;
    r.p = lambda < 0.2 ? 1.0 : std::clamp(q, 0.0, 1.0);
    return r;
}

} // namespace oracle
