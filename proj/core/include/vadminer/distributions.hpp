#pragma once

namespace vadminer {

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
/// Modified Lentz continued fraction, relative accuracy ~1e-14.
double incomplete_beta(double a, double b, double x);

/// Regularized lower / upper incomplete gamma P(a, x), Q(a, x).
double incomplete_gamma_lower(double a, double x);
double incomplete_gamma_upper(double a, double x);

/// P(T <= t) for Student's t with `df` > 0 degrees of freedom (df may be fractional).
double student_t_cdf(double t, double df);

/// P(|T| >= |t|). Infinite t gives 0; NaN t gives 1.
double student_t_two_sided_p(double t, double df);

/// P(X >= x) for chi-square with `df` > 0.
double chi_square_sf(double x, double df);

/// P(|Z| >= |z|) for a standard normal.
double normal_two_sided_p(double z);

} // namespace vadminer
