#pragma once

#include <functional>

namespace slm::roots {

struct Options {
    double x_tol = 1e-12;
    int max_iterations = 200;
};

// Root of f on [lo, hi] with f(lo) and f(hi) of opposite sign (either may
// be zero). Brent's method; throws slm::numerical_error when the bracket
// is invalid or the iteration budget runs out.
double brent(const std::function<double(double)>& f, double lo, double hi,
             const Options& opt = {});

// Plain bisection on a sign-changing bracket, to absolute x tolerance.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              const Options& opt = {});

}  // namespace slm::roots
