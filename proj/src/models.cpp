#include "slm/models.hpp"

#include <algorithm>
#include <cmath>

#include "slm/errors.hpp"
#include "slm/quadrature.hpp"
#include "slm/specfun.hpp"

namespace slm::models {

namespace {

constexpr double kLogSqrt2Pi = 0.9189385332046727417803297364056;

quadrature::Options tight_quad() { return {1e-300, 1e-11, 10000}; }

// E[S_T] for a density law: finite part up to the anchor plus the exact
// tail integral (substituted when a tail power is available).
double expectation(const TerminalLaw& law, const quadrature::Options& opt) {
    auto sf = [&law](double s) { return s * law.density(s); };
    double total = quadrature::integrate_split(sf, law.quad_lower, law.quad_anchor,
                                               law.quad_splits, opt)
                       .value;
    if (law.tail_power)
        total += quadrature::integrate_power_tail(sf, law.quad_anchor,
                                                  *law.tail_power, opt)
                     .value;
    return total;
}

}  // namespace

TerminalLaw cev_terminal_law(const CevParams& p) {
    if (!(p.beta > 0.0))
        throw domain_error("cev_terminal_law: beta must be positive (strict local branch)");
    if (!(p.s0 > 0.0) || !(p.sigma > 0.0) || !(p.T > 0.0))
        throw domain_error("cev_terminal_law: need s0, sigma, T > 0");

    const double beta = p.beta, sigma = p.sigma, s0 = p.s0, T = p.T;
    const double nu = 1.0 / (2.0 * beta);
    const double y0 = std::pow(s0, -beta) / (sigma * beta);
    const double log_norm = 0.5 * std::log(s0) - std::log(sigma * sigma * beta * T);

    // Transition density of S_T through the Bessel radial part Y = S^{-beta}/(sigma beta):
    //   f(s) = s0^{1/2} s^{-2 beta - 3/2} / (sigma^2 beta T)
    //          * exp(-(y - y0)^2 / (2T)) * e^{-z} I_nu(z),   z = y0 y / T.
    // Evaluated in log space with the scaled Bessel so neither the power
    // prefactor nor the exponential can overflow on the way.
    auto density = [=](double s) -> double {
        if (!(s > 0.0)) return 0.0;
        const double y = std::pow(s, -beta) / (sigma * beta);
        const double z = y0 * y / T;
        const double ib = specfun::bessel_i_scaled(nu, z);
        if (ib <= 0.0) return 0.0;
        const double log_f = log_norm - (2.0 * beta + 1.5) * std::log(s) -
                             (y - y0) * (y - y0) / (2.0 * T) + std::log(ib);
        return (log_f < -745.0) ? 0.0 : std::exp(log_f);
    };

    TerminalLaw law;
    law.density = density;
    law.mass_at_zero = 0.0;  // the origin is unattainable for beta > 0
    law.maturity = T;
    const double sqrtT = std::sqrt(T);
    const double y_high = y0 + 42.0 * sqrtT;
    law.quad_lower = std::pow(sigma * beta * y_high, -1.0 / beta);
    const double y_bulk = std::max(y0 - 5.0 * sqrtT, 0.25 * sqrtT);
    const double s_bulk = std::pow(sigma * beta * y_bulk, -1.0 / beta);
    law.quad_anchor = 4.0 * std::max(s0, s_bulk);
    law.tail_power = beta;
    law.quad_splits = {s0, s_bulk};
    law.label = "cev(beta=" + std::to_string(beta) + ",sigma=" + std::to_string(sigma) +
                ",s0=" + std::to_string(s0) + ")";

    law.defect = std::clamp(1.0 - expectation(law, tight_quad()), 0.0, 1.0);
    return law;
}

TerminalLaw bridge_terminal_law(const BridgeParams& p) {
    if (!(p.mu >= 0.0) || p.mu == 1.0)
        throw domain_error("bridge_terminal_law: mu must be >= 0 and != 1");
    if (p.mu > 1.0)
        throw domain_error("bridge_terminal_law: mu > 1 violates E[S_T] <= 1");
    if (!(p.T > 0.0)) throw domain_error("bridge_terminal_law: T must be positive");

    TerminalLaw law;
    law.density = [](double) { return 0.0; };
    law.dirac_at = p.mu;
    law.mass_at_zero = (p.mu == 0.0) ? 1.0 : 0.0;
    law.maturity = p.T;
    law.quad_lower = p.mu;
    law.quad_anchor = std::max(p.mu, 1.0);
    law.defect = 1.0 - p.mu;
    law.label = "bridge(mu=" + std::to_string(p.mu) + ")";
    return law;
}

TerminalLaw lognormal_terminal_law(double sigma, double T) {
    if (!(sigma > 0.0) || !(T > 0.0))
        throw domain_error("lognormal_terminal_law: need sigma, T > 0");
    const double v = sigma * std::sqrt(T);
    auto density = [v](double s) -> double {
        if (!(s > 0.0)) return 0.0;
        const double u = (std::log(s) + 0.5 * v * v) / v;
        const double log_f = -0.5 * u * u - std::log(s * v) - kLogSqrt2Pi;
        return (log_f < -745.0) ? 0.0 : std::exp(log_f);
    };
    TerminalLaw law;
    law.density = density;
    law.maturity = T;
    law.quad_lower = std::exp(-0.5 * v * v - 42.0 * v);
    law.quad_anchor = std::exp(-0.5 * v * v + 42.0 * v);
    law.quad_splits = {std::exp(-0.5 * v * v), 1.0};
    law.defect = 0.0;
    law.label = "lognormal(sigma=" + std::to_string(sigma) + ")";
    return law;
}

double martingale_defect(const TerminalLaw& law) {
    if (law.is_dirac()) return std::clamp(1.0 - *law.dirac_at, 0.0, 1.0);
    return std::clamp(1.0 - expectation(law, tight_quad()), 0.0, 1.0);
}

double normalization(const TerminalLaw& law) {
    if (law.is_dirac()) return 1.0;
    auto f = [&law](double s) { return law.density(s); };
    double total = quadrature::integrate_split(f, law.quad_lower, law.quad_anchor,
                                               law.quad_splits, tight_quad())
                       .value;
    if (law.tail_power)
        total += quadrature::integrate_power_tail(f, law.quad_anchor, *law.tail_power,
                                                  tight_quad())
                     .value;
    return law.mass_at_zero + total;
}

double moment(const TerminalLaw& law, double p) {
    if (law.is_dirac()) return std::pow(*law.dirac_at, p);
    auto f = [&law, p](double s) { return std::pow(s, p) * law.density(s); };
    double total = quadrature::integrate_split(f, law.quad_lower, law.quad_anchor,
                                               law.quad_splits, tight_quad())
                       .value;
    if (law.tail_power) {
        try {
            total += quadrature::integrate_power_tail(f, law.quad_anchor,
                                                      *law.tail_power, tight_quad())
                         .value;
        } catch (const quadrature_error&) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return total;
}

const char* to_string(MartingaleClass c) {
    switch (c) {
        case MartingaleClass::TrueMartingale: return "TrueMartingale";
        case MartingaleClass::StoppedTrueMartingale: return "StoppedTrueMartingale";
        case MartingaleClass::StrictSupermartingale: return "StrictSupermartingale";
        case MartingaleClass::StrictSubmartingale: return "StrictSubmartingale";
        case MartingaleClass::UnboundedStrictLocal: return "UnboundedStrictLocal";
    }
    return "?";
}

MartingaleClass classify_quadratic(const QuadraticVolSpec& spec) {
    const double a = spec.a, b = spec.b, c = spec.c, s0 = spec.s0;
    if (a == 0.0 && b == 0.0 && c == 0.0)
        throw domain_error("classify_quadratic: P must not be identically zero");

    if (a == 0.0) {
        // P linear or constant: arithmetic or displaced geometric Brownian
        // motion, a true martingale (one root sits at infinity).
        return MartingaleClass::TrueMartingale;
    }

    // Stable quadratic solve for a != 0.
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return MartingaleClass::UnboundedStrictLocal;

    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(sq, b));
    double r1, r2;
    if (q == 0.0) {
        r1 = r2 = -b / (2.0 * a);
    } else {
        r1 = q / a;
        r2 = c / q;
    }
    const double lo = std::min(r1, r2);
    const double hi = std::max(r1, r2);

    if (s0 >= lo && s0 <= hi) return MartingaleClass::TrueMartingale;
    if (disc == 0.0 && s0 < hi) {
        // Single root above the start: the process itself is a strict
        // submartingale, but stopped at zero it is a true martingale.
        return MartingaleClass::StoppedTrueMartingale;
    }
    if (s0 > hi) return MartingaleClass::StrictSupermartingale;
    return MartingaleClass::StrictSubmartingale;
}

namespace {

enum class Side { LowerTail, UpperTail };

// Decide finiteness of the integral of x/sigma^2(x) over (0,1] or [1,inf)
// by doubling the cutoff: eps -> eps/2 resp. Z -> 2Z. Divergence is
// declared on sustained non-decaying increments or a runaway total;
// convergence once increments drop below 1e-13 of the running value.
bool integral_is_finite(const std::function<double(double)>& sigma_fn, Side side) {
    quadrature::Options opt{1e-11, 1e-9, 600};
    auto integrand = [&sigma_fn](double x) {
        const double s = sigma_fn(x);
        return x / (s * s);
    };
    double total = 0.0;
    double prev_piece = -1.0;
    int flat_streak = 0;
    for (int k = 0; k < 60; ++k) {
        double lo, hi;
        if (side == Side::LowerTail) {
            lo = std::ldexp(1.0, -k - 1);
            hi = std::ldexp(1.0, -k);
        } else {
            lo = std::ldexp(1.0, k);
            hi = std::ldexp(1.0, k + 1);
        }
        const double piece = quadrature::integrate(integrand, lo, hi, opt).value;
        total += piece;
        if (total > 1e8) return false;
        if (prev_piece >= 0.0) {
            flat_streak = (piece >= 0.95 * prev_piece && piece > 1e-14) ? flat_streak + 1 : 0;
            if (flat_streak >= 3) return false;  // increments refuse to decay
        }
        if (piece <= 1e-13 * std::max(1.0, total)) return true;
        prev_piece = piece;
    }
    throw indeterminate_error("diffusion_integral_tests: inconclusive at cutoff limits");
}

}  // namespace

DiffusionIntegralResult diffusion_integral_tests(
    const std::function<double(double)>& sigma_fn) {
    DiffusionIntegralResult r{};
    // X stays positive iff the lower integral diverges.
    r.hits_zero = integral_is_finite(sigma_fn, Side::LowerTail);
    r.strict_local = integral_is_finite(sigma_fn, Side::UpperTail);
    return r;
}

}  // namespace slm::models
