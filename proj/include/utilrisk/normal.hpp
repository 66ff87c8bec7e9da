#pragma once

namespace utilrisk {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal distribution function, computed through erfc.
double norm_cdf(double x);

/// Inverse of norm_cdf on (0, 1). Rational initial guess polished with two
/// Newton steps against norm_cdf; absolute error below 1e-13 on (1e-12, 1-1e-12).
double norm_inv(double p);

/// Loss quantile of the standard normal at level alpha in (0, 1):
/// the smallest m with P[m + Z < 0] <= alpha, i.e. -norm_inv(alpha).
double std_normal_var(double alpha);

/// Tail average of loss quantiles, (1/alpha) * integral_0^alpha std_normal_var(u) du,
/// evaluated by composite Simpson on a log-substituted grid (1e4 nodes).
double std_normal_es(double alpha);

} // namespace utilrisk
