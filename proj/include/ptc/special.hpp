#pragma once

#include <cstddef>

namespace ptc {

/// Digamma function psi(x) for x > 0 (recurrence + asymptotic series).
double digamma(double x);

/// log Beta(a, b) via lgamma.
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) (continued fraction).
double regularized_incomplete_beta(double a, double b, double x);

/// Standard normal CDF.
double normal_cdf(double x);

/// CDF of the standard Student-t with `dof` degrees of freedom.
double student_t_cdf(double x, double dof);

/// log of the unit d-ball volume, log(pi^{d/2} / Gamma(d/2 + 1)).
double unit_ball_log_volume(std::size_t dim);

}  // namespace ptc
