#include "../oracles/oracles.hpp"

#include "vadminer/errors.hpp"
#include "vadminer/models.hpp"
#include "vadminer/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

using namespace vadminer;

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// n rows, `p` standard-normal features, outcome drawn from logit = b0 + sum beta_j x_j.
DesignMatrix logistic_data(std::uint64_t seed, std::size_t n, const std::vector<double>& beta, double b0 = 0.0) {
    Rng rng(seed);
    Eigen::MatrixXd x(n, beta.size());
    Eigen::VectorXd y(n);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < beta.size(); ++j) names.push_back("x" + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) {
        double eta = b0;
        for (std::size_t j = 0; j < beta.size(); ++j) {
            x(i, j) = rng.normal();
            eta += beta[j] * x(i, j);
        }
        y(i) = rng.bernoulli(sigmoid(eta)) ? 1.0 : 0.0;
    }
    return {names, x, y};
}

std::vector<Label> labels_of(const DesignMatrix& d) {
    std::vector<Label> out;
    for (Eigen::Index i = 0; i < d.outcome().size(); ++i) out.push_back(d.outcome()(i) > 0.5 ? Label::Long : Label::Short);
    return out;
}

std::vector<Label> labels_with_share(std::size_t n, std::size_t longs) {
    std::vector<Label> out(n, Label::Short);
    std::fill_n(out.begin(), longs, Label::Long);
    return out;
}

} // namespace

TEST_SUITE("models") {

TEST_CASE("binarize_outcome") {
    using L = Label;
    CHECK(binarize_outcome(std::vector<double>{1, 2, 3, 4, 5}) == std::vector<L>{L::Short, L::Short, L::Long, L::Long, L::Long});
    CHECK(binarize_outcome(std::vector<double>{7, 7, 7}) == std::vector<L>{L::Long, L::Long, L::Long});
    CHECK(binarize_outcome(std::vector<double>{4, 1, 3, 2}) == std::vector<L>{L::Long, L::Short, L::Long, L::Long});
}

TEST_CASE("DesignMatrix") {
    Eigen::MatrixXd x(3, 2);
    x << 1, 4, 2, 5, 3, 9;
    const DesignMatrix d({"a", "b"}, x, Eigen::VectorXd::Zero(3));
    CHECK(d.index_of("b") == std::optional<std::size_t>(1));
    CHECK_FALSE(d.index_of("c"));
    const std::vector<std::string> keep{"b"};
    CHECK(d.select(keep).column(0) == std::vector<double>{4, 5, 9});
    CHECK(d.drop(keep).names() == std::vector<std::string>{"a"});
    CHECK(d.medians() == std::vector<double>{2, 5});
    CHECK_THROWS_AS(DesignMatrix({"a", "a"}, x, Eigen::VectorXd::Zero(3)), ContractError);
    CHECK_THROWS_AS(DesignMatrix({"a", "b"}, x, Eigen::VectorXd::Zero(2)), ContractError);
    x(0, 0) = std::nan("");
    CHECK_THROWS_AS(DesignMatrix({"a", "b"}, x, Eigen::VectorXd::Zero(3)), ContractError);
}

TEST_CASE("logistic regression recovers a planted coefficient") {
    const auto d = logistic_data(1, 10000, {2.0});
    const auto m = fit_logistic(d);
    CHECK(m.converged);
    CHECK(std::fabs(m.coefficients[1] - 2.0) < 0.1);
    CHECK(m.names[0] == kInterceptName);
    for (std::size_t k = 1; k < m.deviance_trace.size(); ++k)
        CHECK(m.deviance_trace[k] <= m.deviance_trace[k - 1] + 1e-9);
    for (std::size_t i = 0; i < 50; ++i) {
        const double p = m.predict(std::vector<double>{d.features()(i, 0)});
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
}

TEST_CASE("logistic regression matches Newton-Raphson reference") {
    const auto d = logistic_data(3, 300, {0.8, -0.5, 0.0}, 0.3);
    const auto m = fit_logistic(d);
    oracle::Mat x(d.rows(), oracle::Vec(d.cols()));
    oracle::Vec y(d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i) {
        for (std::size_t j = 0; j < d.cols(); ++j) x[i][j] = d.features()(i, j);
        y[i] = d.outcome()(i);
    }
    const auto o = oracle::logistic(x, y);
    for (std::size_t k = 0; k < m.coefficients.size(); ++k) {
        CHECK(m.coefficients[k] == doctest::Approx(o.coefficients[k]).epsilon(1e-9));
        CHECK(m.std_errors[k] == doctest::Approx(o.std_errors[k]).epsilon(1e-9));
        CHECK(m.p_values[k] == doctest::Approx(o.p_values[k]).epsilon(1e-9));
    }
    CHECK(m.deviance == doctest::Approx(o.deviance).epsilon(1e-9));
}

TEST_CASE("null logistic slopes are rarely significant") {
    int significant = 0;
    const int reps = 200;
    for (int s = 0; s < reps; ++s) {
        const auto m = fit_logistic(logistic_data(1000 + s, 400, {0.0}));
        if (m.p_values[1] <= 0.01) ++significant;
    }
    CHECK(significant <= reps / 20);
}

TEST_CASE("balanced intercept-only data") {
    Eigen::MatrixXd x(0, 0);
    x.resize(10, 0);
    Eigen::VectorXd y(10);
    y << 1, 0, 1, 0, 1, 0, 1, 0, 1, 0;
    const auto m = fit_logistic(DesignMatrix({}, x, y));
    CHECK(std::fabs(m.coefficients[0]) < 1e-6);
}

TEST_CASE("separation is flagged, singular designs are named") {
    Eigen::MatrixXd x(6, 1);
    x << -3, -2, -1, 1, 2, 3;
    Eigen::VectorXd y(6);
    y << 0, 0, 0, 1, 1, 1;
    const auto m = fit_logistic(DesignMatrix({"x"}, x, y));
    CHECK_FALSE(m.converged);
    CHECK(m.separation);

    Eigen::MatrixXd x2(6, 3);
    x2 << 1, 2, 3, 2, 4, 1, 3, 6, 2, 4, 8, 9, 5, 10, 4, 6, 12, 7;
    Eigen::VectorXd y2(6);
    y2 << 0, 1, 0, 1, 1, 0;
    const DesignMatrix d({"a", "twice_a", "c"}, x2, y2);
    CHECK(collinear_columns(d) == std::vector<std::string>{"twice_a"});
    try {
        fit_logistic(d);
        FAIL("expected SingularDesignError");
    } catch (const SingularDesignError& e) {
        CHECK(e.columns() == std::vector<std::string>{"twice_a"});
    }
    CHECK_THROWS_AS(fit_linear(d), SingularDesignError);
}

TEST_CASE("likelihood-ratio test") {
    const auto d = logistic_data(11, 10000, {1.0, 1.0});
    const std::vector<std::string> first{"x0"};
    const auto reduced = fit_logistic(d.select(first));
    const auto full = fit_logistic(d);
    CHECK(lr_test(full, full) == doctest::Approx(1.0));
    CHECK(lr_test(reduced, full) < 1e-10);
    CHECK(full.deviance <= reduced.deviance);
    const std::vector<std::string> other{"x1"};
    CHECK_THROWS_AS(lr_test(fit_logistic(d.select(other)), reduced), ContractError);

    // Pure-noise column: p-values uniform.
    oracle::Vec ps;
    for (int s = 0; s < 50; ++s) {
        const auto dn = logistic_data(500 + s, 1000, {1.0, 0.0});
        ps.push_back(lr_test(fit_logistic(dn.select(first)), fit_logistic(dn)));
    }
    CHECK(oracle::ks_uniform(ps).p > 0.01);
}

TEST_CASE("AUC") {
    using L = Label;
    const std::vector<L> labels{L::Short, L::Short, L::Long, L::Long};
    CHECK(auc_score(labels, std::vector<double>{0.1, 0.2, 0.8, 0.9}) == 1.0);
    CHECK(auc_score(labels, std::vector<double>{0.9, 0.8, 0.2, 0.1}) == 0.0);
    CHECK(auc_score(labels, std::vector<double>{0.5, 0.5, 0.5, 0.5}) == 0.5);
    CHECK(auc_score(labels, std::vector<double>{0.1, 0.6, 0.6, 0.9}) == 0.875);
    CHECK(auc_score(std::vector<L>{L::Long, L::Long}, std::vector<double>{0.1, 0.2}) == 0.5);

    Rng rng(4);
    std::vector<L> l(300);
    std::vector<double> s(300), t(300);
    for (std::size_t i = 0; i < l.size(); ++i) {
        l[i] = rng.bernoulli(0.4) ? L::Long : L::Short;
        s[i] = rng.normal() + (l[i] == L::Long ? 0.7 : 0.0);
        t[i] = std::exp(3.0 * s[i]);
    }
    CHECK(auc_score(l, s) == auc_score(l, t));
}

TEST_CASE("classification metrics") {
    using L = Label;
    const std::vector<L> labels{L::Long, L::Long, L::Long, L::Short, L::Short};
    const std::vector<double> probs{0.9, 0.6, 0.2, 0.7, 0.1};
    const auto r = classification_report(labels, probs);
    CHECK(r.long_class.precision == doctest::Approx(2.0 / 3.0));
    CHECK(r.long_class.recall == doctest::Approx(2.0 / 3.0));
    CHECK(r.short_class.precision == doctest::Approx(0.5));
    CHECK(r.short_class.recall == doctest::Approx(0.5));
    CHECK(r.weighted.f1 == doctest::Approx(0.6 * 2.0 / 3.0 + 0.4 * 0.5));
    CHECK(f1_score(0.0, 0.0) == 0.0);
    CHECK(f1_score(0.5, 1.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("ZeroR") {
    auto r = zero_r(labels_with_share(1000, 565));
    CHECK(r.long_class.precision == doctest::Approx(0.565).epsilon(1e-12));
    CHECK(r.long_class.recall == 1.0);
    CHECK(std::round(r.long_class.f1 * 1000) / 1000 == 0.722);
    CHECK(r.auc == 0.5);
    CHECK(r.short_class.precision == 0.0);
    CHECK(r.short_class.f1 == 0.0);

    r = zero_r(labels_with_share(10, 5));
    CHECK(r.long_class.precision == 0.5);
    CHECK(r.long_class.f1 == doctest::Approx(2.0 / 3.0));

    r = zero_r(labels_with_share(7, 7));
    CHECK(r.long_class.precision == 1.0);
    CHECK(r.long_class.f1 == 1.0);
    CHECK(r.short_class.recall == 0.0);

    r = zero_r(labels_with_share(10, 3));
    CHECK(r.short_class.precision == doctest::Approx(0.7));
    CHECK(r.long_class.recall == 0.0);
}

TEST_CASE("cross-validation") {
    SUBCASE("null AUC concentrates at 0.5") {
        const auto d = logistic_data(21, 10000, {0.0, 0.0});
        CHECK(std::fabs(crossval(d, 10, 1).auc - 0.5) < 0.02);
    }
    SUBCASE("separable data") {
        Rng rng(8);
        Eigen::MatrixXd x(400, 1);
        Eigen::VectorXd y(400);
        for (Eigen::Index i = 0; i < 400; ++i) {
            y(i) = i % 2;
            x(i, 0) = (y(i) > 0 ? 2.0 : -2.0) + rng.uniform(-1.0, 1.0);
        }
        CHECK(crossval(DesignMatrix({"x"}, x, y), 10, 3).auc > 0.99);
    }
    SUBCASE("deterministic and independent of jobs") {
        const auto d = logistic_data(5, 2000, {0.5, -0.3});
        const auto a = crossval(d, 10, 42, 1);
        CHECK(a == crossval(d, 10, 42, 1));
        CHECK(a == crossval(d, 10, 42, 4));
        CHECK(a.n == 2000);
        CHECK(a.long_class.support + a.short_class.support == 2000);
    }
    SUBCASE("too few rows") {
        const auto d = logistic_data(5, 8, {0.5});
        CHECK_THROWS_AS(crossval(d, 10, 1), ContractError);
    }
}

TEST_CASE("impact sizes") {
    SUBCASE("closed form: base 0.5, beta 1, sd 1") {
        // Column with median 0 and SD exactly 1: {-1, 0, 0, 1} scaled.
        Eigen::MatrixXd x(4, 1);
        const double s = std::sqrt(1.5);
        x << -s, 0, 0, s;
        const DesignMatrix d({"x"}, x, Eigen::VectorXd::Zero(4));
        FittedModel m;
        m.names = {std::string(kInterceptName), "x"};
        m.coefficients = {0.0, 1.0};
        const auto impacts = impact_sizes(m, d);
        REQUIRE(impacts.size() == 1);
        CHECK(std::fabs(impacts[0].impact - 100.0 * (sigmoid(1.0) - 0.5) / 0.5) < 1e-9);
        CHECK(std::fabs(impacts[0].impact - 46.22) < 0.01);
    }
    SUBCASE("zero coefficient and ordering") {
        const auto d = logistic_data(2, 200, {0.0, 0.0, 0.0});
        FittedModel m;
        m.names = {std::string(kInterceptName), "x0", "x1", "x2"};
        m.coefficients = {0.2, 0.0, -0.8, 0.3};
        const auto impacts = impact_sizes(m, d);
        REQUIRE(impacts.size() == 3);
        CHECK(impacts[0].feature == "x1");
        CHECK(impacts[0].impact < 0.0);
        CHECK(impacts[1].impact > 0.0);
        CHECK(impacts[2].feature == "x0");
        CHECK(impacts[2].impact == 0.0);
    }
    SUBCASE("one at a time, odds multiply") {
        const auto d = logistic_data(6, 500, {0.0, 0.0});
        FittedModel m;
        m.names = {std::string(kInterceptName), "x0", "x1"};
        m.coefficients = {-0.4, 0.7, 0.5};
        const auto med = d.medians();
        const auto sd = d.sds();
        const double eta = -0.4 + 0.7 * med[0] + 0.5 * med[1];
        const double base = sigmoid(eta);
        const auto impacts = impact_sizes(m, d);
        double sum = 0.0;
        for (const auto& e : impacts) {
            const double step = (e.feature == "x0" ? 0.7 * sd[0] : 0.5 * sd[1]);
            CHECK(e.impact == doctest::Approx(100.0 * (sigmoid(eta + step) - base) / base).epsilon(1e-12));
            sum += e.impact;
        }
        const double both = 100.0 * (sigmoid(eta + 0.7 * sd[0] + 0.5 * sd[1]) - base) / base;
        CHECK(std::fabs(both - sum) > 1e-3);
        const double odds = [](double p) { return p / (1 - p); }(base);
        const double odds_both = sigmoid(eta + 0.7 * sd[0] + 0.5 * sd[1]);
        CHECK(odds_both / (1 - odds_both) / odds == doctest::Approx(std::exp(0.7 * sd[0]) * std::exp(0.5 * sd[1])));
    }
    SUBCASE("sign follows the coefficient") {
        const auto d = logistic_data(12, 3000, {0.9, -0.6, 0.2});
        const auto m = fit_logistic(d);
        for (const auto& e : impact_sizes(m, d)) CHECK((e.impact > 0) == (e.coefficient > 0));
    }
    SUBCASE("degenerate base") {
        Eigen::MatrixXd x(3, 1);
        x << 1, 2, 3;
        FittedModel m;
        m.names = {std::string(kInterceptName), "x"};
        m.coefficients = {-2000.0, 1.0};
        CHECK_THROWS_AS(impact_sizes(m, DesignMatrix({"x"}, x, Eigen::VectorXd::Zero(3))), DegenerateVarianceError);
    }
}

TEST_CASE("correlation filter") {
    Rng rng(13);
    const std::size_t n = 10000;
    Eigen::MatrixXd x(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = x(i, 0);
        x(i, 2) = rng.normal();
    }
    const DesignMatrix d({"v", "d", "noise"}, x, Eigen::VectorXd::Zero(n));
    const std::vector<std::pair<std::string, std::string>> pairs{{"v", "d"}, {"v", "noise"}, {"v", "missing"}};
    const auto f = correlation_filter(d, pairs);
    CHECK(f.design.names() == std::vector<std::string>{"v", "noise"});
    REQUIRE(f.decisions.size() == 2);
    CHECK(f.decisions[0].dropped);
    CHECK(f.decisions[0].r == doctest::Approx(1.0));
    CHECK_FALSE(f.decisions[1].dropped);
    CHECK(std::fabs(f.decisions[1].r) < 0.1);

    // Boundary: |r| exactly at the threshold is kept.
    Eigen::MatrixXd b(4, 2);
    b << 1, 1, 2, 3, 3, 2, 4, 4;
    const DesignMatrix db({"a", "b"}, b, Eigen::VectorXd::Zero(4));
    const std::vector<std::pair<std::string, std::string>> ab{{"a", "b"}};
    const double r = correlation_filter(db, ab).decisions[0].r;
    CHECK(r == doctest::Approx(0.8));
    CHECK(correlation_filter(db, ab, r).design.cols() == 2);
    CHECK(correlation_filter(db, ab, std::nextafter(r, 0.0)).design.cols() == 1);
}

TEST_CASE("linear regression") {
    SUBCASE("exact line") {
        Eigen::MatrixXd x(6, 1);
        Eigen::VectorXd y(6);
        for (int i = 0; i < 6; ++i) {
            x(i, 0) = i;
            y(i) = 3.0 * i + 2.0 + (i % 2 ? 1e-6 : -1e-6);
        }
        const auto m = fit_linear(DesignMatrix({"x"}, x, y));
        CHECK(std::fabs(m.coefficients[0] - 2.0) < 1e-5);
        CHECK(std::fabs(m.coefficients[1] - 3.0) < 1e-6);
        CHECK(m.p_values[1] < 1e-12);
    }
    SUBCASE("planted signs") {
        Rng rng(17);
        const std::size_t n = 10000;
        Eigen::MatrixXd x(n, 2);
        Eigen::VectorXd y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x(i, 0) = static_cast<double>(rng.between(1, 5));
            x(i, 1) = static_cast<double>(rng.poisson(5.0));
            y(i) = 0.5 * x(i, 0) - 0.2 * x(i, 1) + rng.normal();
        }
        const auto m = fit_linear(DesignMatrix({"priority", "comments"}, x, y));
        CHECK(m.coefficients[1] > 0);
        CHECK(m.p_values[1] < 0.001);
        CHECK(m.coefficients[2] < 0);
        CHECK(m.p_values[2] < 0.001);
    }
    SUBCASE("matches the OLS reference") {
        Rng rng(19);
        Eigen::MatrixXd x(40, 3);
        Eigen::VectorXd y(40);
        oracle::Mat ox(40, oracle::Vec(3));
        oracle::Vec oy(40);
        for (int i = 0; i < 40; ++i) {
            for (int j = 0; j < 3; ++j) ox[i][j] = x(i, j) = rng.normal();
            oy[i] = y(i) = 1.0 + x(i, 0) - 0.5 * x(i, 2) + rng.normal();
        }
        const auto m = fit_linear(DesignMatrix({"a", "b", "c"}, x, y));
        const auto o = oracle::ols(ox, oy);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(m.coefficients[k] == doctest::Approx(o.coefficients[k]).epsilon(1e-9));
            CHECK(m.p_values[k] == doctest::Approx(o.p_values[k]).epsilon(1e-9));
        }
        CHECK(m.r_squared == doctest::Approx(o.r_squared).epsilon(1e-9));
    }
    SUBCASE("noise predictor is blank at 0.001") {
        int hits = 0;
        for (int s = 0; s < 100; ++s) {
            Rng rng(300 + s);
            Eigen::MatrixXd x(500, 1);
            Eigen::VectorXd y(500);
            for (int i = 0; i < 500; ++i) {
                x(i, 0) = rng.normal();
                y(i) = rng.normal();
            }
            if (fit_linear(DesignMatrix({"x"}, x, y)).p_values[1] < 0.001) ++hits;
        }
        CHECK(hits <= 5);
    }
    SUBCASE("constant response") {
        Eigen::MatrixXd x(5, 1);
        x << 1, 2, 3, 4, 5;
        CHECK_THROWS_AS(fit_linear(DesignMatrix({"x"}, x, Eigen::VectorXd::Constant(5, 2.0))), DegenerateVarianceError);
    }
}

} // TEST_SUITE
