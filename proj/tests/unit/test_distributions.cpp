#include "../oracles/oracles.hpp"

#include "vadminer/distributions.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace vadminer;

namespace {

bool close(double got, double want, double tol) { return std::fabs(got - want) <= tol * std::max(1.0, std::fabs(want)); }

} // namespace

TEST_SUITE("distributions") {

TEST_CASE("incomplete beta matches the reference over a grid") {
    for (double a : {0.5, 1.0, 2.5, 10.0, 150.0})
        for (double b : {0.5, 1.0, 3.0, 40.0})
            for (double x : {0.0, 1e-6, 0.05, 0.3, 0.5, 0.77, 0.999, 1.0}) {
                INFO("a=" << a << " b=" << b << " x=" << x);
                CHECK(close(incomplete_beta(a, b, x), oracle::incomplete_beta(a, b, x), 1e-12));
            }
}

TEST_CASE("incomplete gamma matches the reference over a grid") {
    for (double a : {0.5, 1.0, 2.0, 7.5, 60.0})
        for (double x : {0.0, 1e-4, 0.5, 1.0, 3.0, 10.0, 80.0}) {
            INFO("a=" << a << " x=" << x);
            const double want = oracle::incomplete_gamma_lower(a, x);
            CHECK(close(incomplete_gamma_lower(a, x), want, 1e-12));
            CHECK(std::fabs(incomplete_gamma_upper(a, x) - (1.0 - want)) < 1e-12);
        }
}

TEST_CASE("Student t") {
    for (double df : {1.0, 2.0, 4.7, 30.0, 1e4, 1e5})
        for (double t : {-40.0, -3.0, -0.5, 0.0, 0.5, 2.1, 9.0}) {
            INFO("t=" << t << " df=" << df);
            CHECK(close(student_t_cdf(t, df), oracle::student_t_cdf(t, df), 1e-12));
            CHECK(close(student_t_two_sided_p(t, df), oracle::student_t_two_sided(t, df), 1e-12));
        }
    CHECK(student_t_two_sided_p(std::numeric_limits<double>::infinity(), 5) == 0.0);
    CHECK(student_t_two_sided_p(std::numeric_limits<double>::quiet_NaN(), 5) == 1.0);
    CHECK(student_t_two_sided_p(0.0, 5) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("chi-square survival and normal tails") {
    for (double df : {1.0, 2.0, 5.0, 37.0})
        for (double x : {0.0, 0.01, 1.0, 4.0, 30.0, 150.0}) {
            INFO("x=" << x << " df=" << df);
            const double want = oracle::chi_square_sf(x, df);
            // Far tails: absolute agreement is what matters for p-values.
            CHECK(std::fabs(chi_square_sf(x, df) - want) <= 1e-12 * std::max(1e-300, want) + 1e-300);
        }
    for (double z : {0.0, 0.5, 1.96, 4.0, 8.0})
        CHECK(close(normal_two_sided_p(z), oracle::normal_two_sided(z), 1e-12));
    CHECK(normal_two_sided_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-12));
}

} // TEST_SUITE
