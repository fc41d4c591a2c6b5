#pragma once

namespace denaturefit::stats {

// Regularized incomplete beta I_x(a, b) by the Lentz continued fraction,
// with the symmetry flip for fast convergence on either side.
double regularized_incomplete_beta(double a, double b, double x);

// CDF of Student's t with dof degrees of freedom.
double t_cdf(double t, double dof);

// Inverse CDF of Student's t, |error| < 1e-10. p in (0, 1), dof > 0.
double t_quantile(double p, double dof);

// Inverse CDF of the F distribution. p in (0, 1), d1 > 0, d2 > 0.
double f_quantile(double p, double d1, double d2);

}  // namespace denaturefit::stats
