#include "slm/blackscholes.hpp"

#include <algorithm>
#include <cmath>

#include "slm/errors.hpp"
#include "slm/specfun.hpp"

namespace slm::blackscholes {

namespace {

using specfun::erfcx;
using specfun::norm_cdf;
using specfun::norm_pdf;

constexpr double kInvSqrt2 = 0.7071067811865475244008443621048;

void check_inputs(double x, double T, double sigma) {
    if (!std::isfinite(x) || !(T > 0.0) || !(sigma >= 0.0))
        throw domain_error("blackscholes: need finite x, T > 0, sigma >= 0");
}

// Value of the out-of-the-money option: the call for x >= 0, the put for
// x < 0. In-the-money prices are this value plus intrinsic, which makes
// put-call parity exact by construction. The two-tail branches use
//   N(d) = 0.5 e^{-d^2/2} erfcx(-d/sqrt2)   and   e^x phi(d-) = phi(d+),
// so prices down in the 1e-300 range keep relative accuracy.
double otm_value(double x, double T, double sigma) {
    if (sigma == 0.0) return 0.0;
    const double st = sigma * std::sqrt(T);
    const double d1 = -x / st + 0.5 * st;
    const double d2 = d1 - st;
    if (x >= 0.0) {
        if (d1 <= -6.0)
            return 0.5 * std::exp(-0.5 * d1 * d1) *
                   (erfcx(-d1 * kInvSqrt2) - erfcx(-d2 * kInvSqrt2));
        const double term2 = (d2 <= -8.0)
                                 ? 0.5 * std::exp(-0.5 * d1 * d1) * erfcx(-d2 * kInvSqrt2)
                                 : std::exp(x) * norm_cdf(d2);
        return norm_cdf(d1) - term2;
    }
    if (d2 >= 6.0)
        return 0.5 * std::exp(-0.5 * d1 * d1) *
               (erfcx(d2 * kInvSqrt2) - erfcx(d1 * kInvSqrt2));
    return std::exp(x) * norm_cdf(-d2) - norm_cdf(-d1);
}

// Solve price_fn(sigma) = target for a strictly increasing price_fn.
// Safeguarded Newton on a maintained bracket with bisection fallback;
// stops once the residual meets f_tol and the step has stopped moving,
// or the bracket has collapsed to the resolvable width.
template <class PriceFn>
double invert_monotone(const PriceFn& price_fn, double x, double T, double target,
                       double f_tol) {
    double lo = 0.0, hi = 1.0;
    while (price_fn(hi) < target) {
        hi *= 2.0;
        if (hi > 1e7) throw numerical_error("implied vol: no upper bracket");
    }
    double sigma = std::clamp(std::sqrt(2.0 * std::abs(x) / T) + 0.1, 1e-8, 0.9 * hi);
    double step_old = hi;
    for (int it = 0; it < 300; ++it) {
        const double diff = price_fn(sigma) - target;
        if (diff > 0.0)
            hi = sigma;
        else
            lo = sigma;
        const double vega = norm_pdf(d_plus(x, T, sigma)) * std::sqrt(T);
        double next = sigma - diff / vega;
        // Newton creeps on the exponentially flat wings; force a bisection
        // step whenever it leaves the bracket or fails to halve the step.
        const bool inside = (vega > 0.0) && (next > lo) && (next < hi);
        double step = std::abs(next - sigma);
        if (!inside || step > 0.5 * step_old) {
            next = 0.5 * (lo + hi);
            step = std::abs(next - sigma);
        }
        if (std::abs(diff) <= f_tol && step <= 1e-11 * std::max(1.0, sigma))
            return (diff == 0.0) ? sigma : next;
        if (hi - lo <= 4e-16 * std::max(1.0, hi)) return 0.5 * (lo + hi);
        step_old = step;
        sigma = next;
    }
    throw numerical_error("implied vol: iteration budget exhausted");
}

}  // namespace

double d_plus(double x, double T, double sigma) {
    const double st = sigma * std::sqrt(T);
    return -x / st + 0.5 * st;
}

double d_minus(double x, double T, double sigma) {
    const double st = sigma * std::sqrt(T);
    return -x / st - 0.5 * st;
}

double bs_call(double x, double T, double sigma) {
    check_inputs(x, T, sigma);
    const double v = otm_value(x, T, sigma);
    return (x >= 0.0) ? v : -std::expm1(x) + v;
}

double bs_call(const BsInputs& in) { return bs_call(in.x, in.T, in.sigma); }

double bs_put(double x, double T, double sigma) {
    check_inputs(x, T, sigma);
    const double v = otm_value(x, T, sigma);
    return (x >= 0.0) ? std::expm1(x) + v : v;
}

double bs_put(const BsInputs& in) { return bs_put(in.x, in.T, in.sigma); }

double implied_vol_from_otm(double time_value, double x, double T) {
    if (!(T > 0.0) || !std::isfinite(x) || std::isnan(time_value))
        throw domain_error("implied_vol_from_otm: need finite x and T > 0");
    const double cap = (x >= 0.0) ? 1.0 : std::exp(x);
    if (time_value < 0.0 || time_value >= cap)
        throw out_of_bounds_error("implied_vol_from_otm: time value outside [0, min(1, e^x))",
                                  time_value, 0.0, cap);
    if (time_value == 0.0) return 0.0;
    const double f_tol = 1e-12 * time_value;
    return invert_monotone([&](double s) { return otm_value(x, T, s); }, x, T,
                           time_value, f_tol);
}

double implied_vol_call(double price, double x, double T) {
    if (!(T > 0.0) || !std::isfinite(x) || std::isnan(price))
        throw domain_error("implied_vol_call: need finite x and T > 0");
    const double intrinsic = (x < 0.0) ? -std::expm1(x) : 0.0;
    if (price < intrinsic || price >= 1.0)
        throw out_of_bounds_error("implied_vol_call: price outside [(1-e^x)_+, 1)",
                                  price, intrinsic, 1.0);
    // Only the out-of-the-money component carries volatility information;
    // the subtraction here is the conditioning floor for in-the-money input.
    return implied_vol_from_otm(price - intrinsic, x, T);
}

double implied_vol_put(double price, double x, double T) {
    if (!(T > 0.0) || !std::isfinite(x) || std::isnan(price))
        throw domain_error("implied_vol_put: need finite x and T > 0");
    const double intrinsic = (x > 0.0) ? std::expm1(x) : 0.0;
    const double cap = std::exp(x);
    if (price < intrinsic || price >= cap)
        throw out_of_bounds_error("implied_vol_put: price outside [(e^x-1)_+, e^x)",
                                  price, intrinsic, cap);
    return implied_vol_from_otm(price - intrinsic, x, T);
}

}  // namespace slm::blackscholes
