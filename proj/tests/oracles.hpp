#pragma once

// Independent oracles for the test suite, kept deliberately separate from
// the library implementation paths: long-double erfc from the Maclaurin
// series / Laplace continued fraction, an adaptive Simpson integrator, and
// Black-Scholes pricing plus bisection inversion built only on those.

#include <cmath>
#include <functional>

namespace oracle {

// erf by Maclaurin series, |x| <= 2.5, long double accumulation.
inline long double erf_series(long double x) {
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        const long double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs(add) < 1e-25L * std::fabs(sum)) break;
    }
    return sum * 1.1283791670955125738961589031195L;  // 2/sqrt(pi)
}

// erfc continued fraction (Laplace), x >= 2, long double Lentz.
inline long double erfc_cf(long double x) {
    const long double tiny = 1e-40L;
    long double f = tiny, c = f, d = 0.0L;
    for (int n = 0; n < 200; ++n) {
        const long double a = (n == 0) ? 1.0L : 0.5L * n;
        d = x + a * d;
        if (d == 0.0L) d = tiny;
        c = x + a / c;
        if (c == 0.0L) c = tiny;
        d = 1.0L / d;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-22L) break;
    }
    // erfc(x) = exp(-x^2)/sqrt(pi) * CF
    return std::exp(-x * x) * 0.56418958354775628694807945156077L * f;
}

inline long double erfc_ld(long double x) {
    if (x < 0.0L) return 2.0L - erfc_ld(-x);
    if (x < 2.5L) return 1.0L - erf_series(x);
    return erfc_cf(x);
}

inline long double norm_cdf_ld(long double z) {
    return 0.5L * erfc_ld(-z * 0.70710678118654752440084436210485L);
}

inline double norm_cdf(double z) { return static_cast<double>(norm_cdf_ld(z)); }

// Quantile by bisection on the erfc oracle.
inline double norm_quantile(double p) {
    long double lo = -40.0L, hi = 40.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (norm_cdf_ld(mid) < p)
            lo = mid;
        else
            hi = mid;
    }
    return static_cast<double>(0.5L * (lo + hi));
}

// Adaptive Simpson in long double.
inline long double simpson_rec(const std::function<long double(long double)>& f,
                               long double a, long double b, long double fa,
                               long double fm, long double fb, long double whole,
                               long double tol, int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m), rm = 0.5L * (m + b);
    const long double flm = f(lm), frm = f(rm);
    const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    const long double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0L * tol)
        return left + right + delta / 15.0L;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5L * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5L * tol, depth - 1);
}

inline double integrate(const std::function<long double(long double)>& f, double a,
                        double b, double tol = 1e-14, int depth = 24) {
    const long double fa = f(a), fb = f(b), fm = f(0.5L * (a + b));
    const long double whole = (static_cast<long double>(b) - a) / 6.0L *
                              (fa + 4.0L * fm + fb);
    return static_cast<double>(
        simpson_rec(f, a, b, fa, fm, fb, whole, static_cast<long double>(tol), depth));
}

// Black-Scholes call on the unit forward from the long-double cdf.
inline double bs_call(double x, double T, double sigma) {
    if (sigma <= 0.0) return (x < 0.0) ? -std::expm1(x) : 0.0;
    const long double st = static_cast<long double>(sigma) * std::sqrt((long double)T);
    const long double d1 = -static_cast<long double>(x) / st + 0.5L * st;
    const long double d2 = d1 - st;
    return static_cast<double>(norm_cdf_ld(d1) -
                               std::exp((long double)x) * norm_cdf_ld(d2));
}

inline double bs_put(double x, double T, double sigma) {
    return static_cast<double>(bs_call(x, T, sigma) + std::expm1((long double)x));
}

// Implied vol by plain bisection on the oracle call price.
inline double implied_vol_bisect(double price, double x, double T) {
    double lo = 0.0, hi = 1.0;
    while (bs_call(x, T, hi) < price) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (bs_call(x, T, mid) < price)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracle
