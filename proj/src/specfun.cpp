#include "slm/specfun.hpp"

#include <cmath>
#include <limits>

#include "slm/errors.hpp"

namespace slm::specfun {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;
constexpr double kLogSqrt2Pi = 0.9189385332046727417803297364056;
constexpr double kInvSqrtPi = 0.5641895835477562869480794515608;

// erfcx(x) for x >= 8 via the Laplace continued fraction
//   erfcx(x) = 1/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// evaluated with the modified Lentz scheme. Converges in a handful of
// terms for arguments this large.
double erfcx_cf(double x) {
    const double tiny = 1e-300;
    double f = tiny;
    double c = f;
    double d = 0.0;
    for (int n = 0; n < 60; ++n) {
        const double a = (n == 0) ? 1.0 : 0.5 * n;
        d = x + a * d;
        if (d == 0.0) d = tiny;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    return kInvSqrtPi * f;
}

// Lower incomplete gamma by power series, x < a + 1.
double gamma_series_p(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17)
            return sum * std::exp(a * std::log(x) - x - std::lgamma(a));
    }
    throw numerical_error("reg_gamma: series failed to converge");
}

// Upper incomplete gamma by continued fraction (Lentz), x >= a + 1.
double gamma_cf_q(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int n = 1; n < 500; ++n) {
        const double an = -n * (n - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-17)
            return f * std::exp(a * std::log(x) - x - std::lgamma(a));
    }
    throw numerical_error("reg_gamma: continued fraction failed to converge");
}

}  // namespace

double norm_pdf(double z) {
    return std::exp(-0.5 * z * z) / kSqrt2Pi;
}

double norm_cdf(double z) {
    // erfc-based; monotone and accurate to the last few ulps of glibc erfc.
    return 0.5 * std::erfc(-z * kInvSqrt2);
}

double erfcx(double x) {
    if (std::isnan(x)) return x;
    if (x >= 8.0) return erfcx_cf(x);
    if (x >= -6.0) return std::exp(x * x) * std::erfc(x);
    // erfc(x) = 2 - erfc(-x); the exp term dominates completely here.
    double r = std::exp(x * x);
    return std::isinf(r) ? r : 2.0 * r - erfcx_cf(-x);
}

double log_norm_cdf(double z) {
    if (z >= -8.0) {
        const double p = norm_cdf(z);
        return std::log(p);
    }
    // N(z) = 0.5 erfc(-z/sqrt2) = 0.5 erfcx(-z/sqrt2) e^{-z^2/2}
    return std::log(0.5 * erfcx(-z * kInvSqrt2)) - 0.5 * z * z;
}

double norm_quantile(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0)
        throw domain_error("norm_quantile: p must lie in [0,1]");
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (p == 0.5) return 0.0;

    // Rational initial guess (Acklam), then monotone-safe refinement.
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Halley refinement on N(x) - p. Two passes take the Acklam guess from
    // ~1e-9 to full double precision. In the very far tails work on the log
    // scale instead, where the hazard rate phi/N stays representable.
    for (int it = 0; it < 3; ++it) {
        if (p < 1e-280 || p > 1.0 - 1e-16) {
            const double lp = (p < 0.5) ? std::log(p) : std::log1p(-p);
            const double xa = (p < 0.5) ? x : -x;
            const double g = log_norm_cdf(xa) - lp;
            // d/dx log N = phi/N = 1/(sqrt(pi/2) erfcx(-x/sqrt2))
            const double hazard = 1.0 / (1.2533141373155002512 * erfcx(-xa * kInvSqrt2));
            const double step = g / hazard;
            x = (p < 0.5) ? xa - step : -(xa - step);
        } else {
            const double e = norm_cdf(x) - p;
            const double u = e / norm_pdf(x);
            x -= u / (1.0 + 0.5 * x * u);
        }
    }
    return x;
}

double bessel_i_scaled(double nu, double z) {
    if (std::isnan(nu) || std::isnan(z) || nu < 0.0 || z < 0.0)
        throw domain_error("bessel_i: requires nu >= 0 and z >= 0");
    if (z == 0.0) return (nu == 0.0) ? 1.0 : 0.0;

    if (z <= 100.0) {
        // Ascending series, all terms positive: no cancellation.
        //   I_nu(z) = sum_k (z/2)^{nu+2k} / (k! Gamma(nu+k+1))
        const double q = 0.25 * z * z;
        double term = std::exp(nu * std::log(0.5 * z) - std::lgamma(nu + 1.0));
        double sum = term;
        for (int k = 1; k < 500; ++k) {
            term *= q / (k * (nu + k));
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-z);
    }

    // Large argument (DLMF 10.40.1), mu = 4 nu^2:
    //   e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} [1 - (mu-1)/(8z) + ...]
    // Truncated at the smallest term; for nu <= 5 and z >= 100 that term
    // is far below 1e-15 relative.
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * z * k);
        if (std::abs(term) >= prev) break;  // series turned divergent
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-18 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * M_PI * z);
}

double bessel_i(double nu, double z) {
    const double scaled = bessel_i_scaled(nu, z);
    if (z > 700.0) {
        // e^z overflows; report the overflow honestly.
        const double lg = std::log(scaled) + z;
        return (lg > 709.0) ? std::numeric_limits<double>::infinity() : std::exp(lg);
    }
    return scaled * std::exp(z);
}

double reg_gamma_lower(double a, double x) {
    if (std::isnan(a) || std::isnan(x) || a <= 0.0 || x < 0.0)
        throw domain_error("reg_gamma_lower: requires a > 0 and x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_series_p(a, x);
    return 1.0 - gamma_cf_q(a, x);
}

double reg_gamma_upper(double a, double x) {
    if (std::isnan(a) || std::isnan(x) || a <= 0.0 || x < 0.0)
        throw domain_error("reg_gamma_upper: requires a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
    return gamma_cf_q(a, x);
}

}  // namespace slm::specfun
