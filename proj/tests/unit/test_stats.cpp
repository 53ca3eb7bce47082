#include "../oracles/oracles.hpp"

#include "vadminer/errors.hpp"
#include "vadminer/random.hpp"
#include "vadminer/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace vadminer;
using Vec = std::vector<double>;

namespace {

Vec normals(Rng& rng, std::size_t n, double mean = 0.0, double sd = 1.0) {
    Vec v(n);
    for (auto& x : v) x = rng.normal(mean, sd);
    return v;
}

} // namespace

TEST_SUITE("stats") {

TEST_CASE("Welch t-test") {
    SUBCASE("identical samples") {
        const Vec a{1, 4, 2, 8, 5};
        const auto r = welch_t_test(a, a);
        CHECK(r.t == 0.0);
        CHECK(r.p == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("textbook example") {
        const Vec a{1, 2, 3, 4, 5}, b{2, 3, 4, 5, 6};
        const auto r = welch_t_test(a, b);
        const auto o = oracle::welch(a, b);
        CHECK(std::fabs(r.t - o.t) < 1e-9);
        CHECK(std::fabs(r.p - o.p) < 1e-9);
        CHECK(std::fabs(r.df - o.df) < 1e-9);
        CHECK(r.t == doctest::Approx(-1.0));
        CHECK(r.df == doctest::Approx(8.0));
    }
    SUBCASE("planted shift of 0.3 sd") {
        Rng rng(2024);
        const auto a = normals(rng, 10000, 0.3);
        const auto b = normals(rng, 10000);
        CHECK(welch_t_test(a, b).p < 0.0025);
    }
    SUBCASE("swap symmetry") {
        Rng rng(5);
        const auto a = normals(rng, 40, 0.2, 2.0);
        const auto b = normals(rng, 25);
        const auto ab = welch_t_test(a, b), ba = welch_t_test(b, a);
        CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-14));
        CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-14));
        CHECK(ab.d == doctest::Approx(-ba.d).epsilon(1e-14));
    }
    SUBCASE("constant samples") {
        const Vec a{2, 2, 2}, b{2, 2}, c{3, 3, 3};
        auto r = welch_t_test(a, b);
        CHECK(r.t == 0.0);
        CHECK(r.p == 1.0);
        CHECK(r.degenerate_variance);
        r = welch_t_test(a, c);
        CHECK(r.p == 0.0);
        CHECK(r.degenerate_variance);
    }
    SUBCASE("significance uses the given alpha") {
        const Vec a{1, 2, 3, 4, 5}, b{3, 4, 5, 6, 7};
        const auto r = welch_t_test(a, b, 0.05);
        CHECK(r.p < 0.1);
        CHECK(r.significant == (r.p < 0.05));
        CHECK_FALSE(welch_t_test(a, b, r.p / 2).significant);
    }
    CHECK_THROWS_AS(welch_t_test(Vec{1}, Vec{1, 2}), ContractError);
}

TEST_CASE("paired t-test") {
    SUBCASE("no change") {
        const Vec x{1, 5, 2, 7};
        const auto r = paired_t_test(x, x);
        CHECK(r.t == 0.0);
        CHECK(r.p == 1.0);
        CHECK(r.d == 0.0);
    }
    SUBCASE("constant nonzero difference is degenerate") {
        const auto r = paired_t_test(Vec{1, 2, 3}, Vec{2, 3, 4});
        CHECK(r.degenerate_variance);
        CHECK(r.p == 0.0);
        CHECK(r.d > 0.0);
    }
    SUBCASE("planted delta 0.2") {
        Rng rng(77);
        const auto before = normals(rng, 5000);
        Vec after(before.size());
        for (std::size_t i = 0; i < before.size(); ++i) after[i] = before[i] + rng.normal(0.2, 1.0);
        const auto r = paired_t_test(before, after);
        CHECK(std::fabs(r.d - 0.2) < 0.05);
        CHECK(r.t > 0.0);
        const auto o = oracle::paired(before, after);
        CHECK(r.t == doctest::Approx(o.t).epsilon(1e-9));
        CHECK(r.d == doctest::Approx(o.d).epsilon(1e-9));
    }
    CHECK_THROWS_AS(paired_t_test(Vec{}, Vec{}), ContractError);
    CHECK_THROWS_AS(paired_t_test(Vec{1, 2}, Vec{1, 2, 3}), ContractError);
}

TEST_CASE("Cohen's d") {
    CHECK(cohens_d(Vec{1, 2, 3}, Vec{3, 4, 5}) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(cohens_d(Vec{1, 4, 6}, Vec{1, 4, 6}) == 0.0);
    CHECK_THROWS_AS(cohens_d(Vec{1, 1}, Vec{2, 2}), DegenerateVarianceError);

    Rng rng(9);
    const auto a = normals(rng, 30, 1.0, 2.0);
    const auto b = normals(rng, 17);
    const double d = cohens_d(a, b);
    CHECK(d == doctest::Approx(-cohens_d(b, a)).epsilon(1e-14));
    Vec a2 = a, b2 = b;
    for (auto& x : a2) x = 3.5 * x - 7.0;
    for (auto& x : b2) x = 3.5 * x - 7.0;
    CHECK(cohens_d(a2, b2) == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("effect labels") {
    CHECK(label_effect(0.324) == EffectLabel::Small);
    CHECK(label_effect(-0.324) == EffectLabel::Small);
    CHECK(label_effect(0.15) == EffectLabel::Trivial);
    CHECK(label_effect(0.2) == EffectLabel::Small);
    CHECK(label_effect(0.5) == EffectLabel::Medium);
    CHECK(label_effect(0.8) == EffectLabel::Large);
    CHECK(to_string(EffectLabel::Small) == "small");
}

TEST_CASE("Bonferroni") {
    CHECK(bonferroni_alpha(0.05, 20) == 0.0025);
    CHECK(bonferroni_alpha(0.05, 1) == 0.05);
    CHECK(bonferroni_alpha(0.01, 4) == 0.0025);
    for (int k = 1; k < 50; ++k) CHECK(bonferroni_alpha(0.05, k + 1) < bonferroni_alpha(0.05, k));
    CHECK_THROWS_AS(bonferroni_alpha(0.05, 0), ContractError);
    CHECK_THROWS_AS(bonferroni_alpha(0.0, 3), ContractError);
    CHECK_THROWS_AS(bonferroni_alpha(1.5, 3), ContractError);
}

TEST_CASE("Pearson r") {
    const Vec x{0.3, 1.7, 2.2, 4.0, 4.1, 6.6, 7.0, 8.3, 9.9, 12.5};
    const Vec y{1.1, 0.4, 2.9, 3.3, 5.0, 4.4, 7.9, 6.1, 9.8, 10.2};
    CHECK(pearson_r(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    Vec neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -2.0 * x[i] + 3.0;
    CHECK(pearson_r(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));
    const double r = pearson_r(x, y);
    CHECK(std::fabs(r - oracle::pearson(x, y)) < 1e-12);
    Vec y2 = y;
    for (auto& v : y2) v = 0.25 * v + 100.0;
    CHECK(pearson_r(x, y2) == doctest::Approx(r).epsilon(1e-12));
    CHECK_THROWS_AS(pearson_r(x, Vec(10, 1.0)), DegenerateVarianceError);
}

TEST_CASE("polynomial fits") {
    SUBCASE("exact quadratic") {
        Vec x, y;
        for (int i = 0; i < 12; ++i) {
            x.push_back(i * 0.7);
            y.push_back(2.0 - 1.5 * x.back() + 0.25 * x.back() * x.back());
        }
        const auto f = polyfit(x, y, 2);
        CHECK(std::fabs(f.r_squared - 1.0) < 1e-9);
        CHECK(f.coefficients[2] == doctest::Approx(0.25).epsilon(1e-9));
        CHECK(f.predict(3.0) == doctest::Approx(-0.25).epsilon(1e-9));
    }
    SUBCASE("U-shape prefers degree 2") {
        Rng rng(31);
        Vec x(1000), y(1000);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = rng.uniform(1.0, 9.0);
            y[i] = (x[i] - 5.0) * (x[i] - 5.0) + rng.normal(0.0, 0.1);
        }
        const auto lin = polyfit(x, y, 1), quad = polyfit(x, y, 2);
        CHECK(quad.r_squared > lin.r_squared + 0.5);
        const auto o = oracle::polynomial(x, y, 2);
        for (int k = 0; k < 3; ++k) CHECK(std::fabs(quad.coefficients[k] - o.coefficients[k]) < 1e-9);
        CHECK(std::fabs(quad.r_squared - o.r_squared) < 1e-9);
    }
    SUBCASE("nested fits never lose R^2") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            Vec x(50), y(50);
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] = rng.normal();
                y[i] = rng.normal() + 0.3 * x[i];
            }
            CHECK(polyfit(x, y, 2).r_squared >= polyfit(x, y, 1).r_squared - 1e-12);
        }
    }
    SUBCASE("constant y") {
        const Vec x{1, 2, 3, 4}, y{5, 5, 5, 5};
        const auto f = polyfit(x, y, 2);
        CHECK(f.r_squared == 0.0);
        CHECK(f.coefficients[0] == doctest::Approx(5.0));
        CHECK(f.coefficients[1] == 0.0);
        CHECK(f.coefficients[2] == 0.0);
    }
    CHECK_THROWS_AS(polyfit(Vec{1, 1, 1, 1}, Vec{1, 2, 3, 4}, 1), SingularDesignError);
    CHECK_THROWS_AS(polyfit(Vec{1, 2, 3}, Vec{1, 2, 3}, 2), ContractError);
    CHECK_THROWS_AS(polyfit(Vec{1, 2, 3, 4}, Vec{1, 2, 3, 4}, 3), ContractError);
}

TEST_CASE("medians") {
    CHECK(median(Vec{3, 1, 2}) == 2.0);
    CHECK(median(Vec{4, 1, 3, 2}) == 2.5);
    CHECK(lower_median(Vec{4, 1, 3, 2}) == 2.0);
    CHECK(sample_variance(Vec{1, 2, 3, 4}) == doctest::Approx(5.0 / 3.0));
}

} // TEST_SUITE
