#pragma once

#include <functional>
#include <vector>

namespace slm::quadrature {

struct Options {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_panels = 4000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int panels = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) on [a, b]. Panels are split until the
// summed error estimate satisfies err <= max(abs_tol, rel_tol * |value|).
// Throws slm::quadrature_error if the panel budget is exhausted first.
// Nodes are interior, so integrable endpoint behaviour is tolerated.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

// Same, with the initial interval pre-split at the given interior points
// (payoff kinks, density modes). Points outside (a, b) are ignored.
Result integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& split_points, const Options& opt = {});

// Integral of f over [a, +inf) for an integrand with a power-law tail.
// Substitutes u = s^{-p} (p > 0), mapping the tail onto a finite interval
// on which the transformed integrand is regular. Exact up to quadrature
// error: no truncation of the tail is involved.
Result integrate_power_tail(const std::function<double(double)>& f, double a, double p,
                            const Options& opt = {});

// Integral of f over the finite range [a, b] through the same u = s^{-p}
// substitution; useful when b is many orders of magnitude above a.
Result integrate_power_window(const std::function<double(double)>& f, double a, double b,
                              double p, const Options& opt = {});

}  // namespace slm::quadrature
