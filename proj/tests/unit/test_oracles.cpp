#include "oracle_suite.hpp"

#include "../oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>

TEST_SUITE("oracles") {

// The references themselves, on values worked out by hand.
TEST_CASE("reference implementations agree with hand computations") {
    const auto w = oracle::welch({1, 2, 3, 4, 5}, {2, 3, 4, 5, 6});
    CHECK(w.t == doctest::Approx(-1.0));
    CHECK(w.df == doctest::Approx(8.0));
    CHECK(oracle::cohens_d({1, 2, 3}, {3, 4, 5}) == doctest::Approx(-2.0));
    const auto ols = oracle::ols({{0}, {1}, {2}, {3}}, {2, 5, 8, 11});
    CHECK(ols.coefficients[0] == doctest::Approx(2.0));
    CHECK(ols.coefficients[1] == doctest::Approx(3.0));
    const auto inv = oracle::invert({{4, 7}, {2, 6}});
    CHECK(inv[0][0] == doctest::Approx(0.6));
    CHECK(inv[0][1] == doctest::Approx(-0.7));
    // Balanced labels, intercept only: log-odds 0.
    const auto logit = oracle::logistic({{1}, {1}, {1}, {1}, {-1}, {-1}, {-1}, {-1}}, {1, 0, 1, 0, 1, 0, 0, 1});
    CHECK(std::fabs(logit.coefficients[0]) < 1e-12);
    CHECK(oracle::chi_square_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("library matches the references on fixed cases") {
    for (const auto& m : oracle_suite::run(1e-9)) {
        INFO(m.method << ": worst " << m.worst);
        for (const auto& msg : m.messages) INFO(msg);
        CHECK(m.cases >= 20);
        CHECK(m.failures == 0);
    }
}

TEST_CASE("KS check accepts uniform and rejects skewed samples") {
    oracle::Vec u, s;
    for (int i = 0; i < 200; ++i) {
        const double x = (i + 0.5) / 200.0;
        u.push_back(x);
        s.push_back(x * x);
    }
    CHECK(oracle::ks_uniform(u).p > 0.5);
    CHECK(oracle::ks_uniform(s).p < 0.01);
}

} // TEST_SUITE
