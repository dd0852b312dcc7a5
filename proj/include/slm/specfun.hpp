#pragma once

// Self-contained special functions: Gaussian cdf/quantile with far-tail
// support, modified Bessel function of the first kind (plain and
// exponentially scaled), and the regularised incomplete gamma function.
// All functions are pure and thread-safe.

namespace slm::specfun {

// Standard normal density.
double norm_pdf(double z);

// Standard normal cdf. Absolute error below 1e-15; saturates cleanly to
// exactly 0/1 in the extreme tails.
double norm_cdf(double z);

// log N(z), accurate far into the left tail (z << -8) where norm_cdf
// underflows. For z >= -8 it is simply log(norm_cdf(z)).
double log_norm_cdf(double z);

// Scaled complementary error function exp(x^2) erfc(x), valid for all x.
double erfcx(double x);

// Inverse of norm_cdf on [0,1]. Returns -inf at 0 and +inf at 1.
// Throws slm::domain_error outside [0,1].
double norm_quantile(double p);

// e^{-z} I_nu(z) for nu >= 0, z >= 0. Power series for moderate z,
// asymptotic expansion (DLMF 10.40.1) beyond. Relative error ~1e-13 for
// nu <= 5 over the whole half-line.
double bessel_i_scaled(double nu, double z);

// I_nu(z); overflows to +inf for z beyond ~709. Use the scaled version
// whenever e^{-z} factors are available in the caller.
double bessel_i(double nu, double z);

// Regularised lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a), a > 0.
double reg_gamma_lower(double a, double x);

// Regularised upper incomplete gamma Q(a,x) = 1 - P(a,x), computed
// directly in the tail so small values keep relative accuracy.
double reg_gamma_upper(double a, double x);

}  // namespace slm::specfun
