#pragma once

#include <cstdint>
#include <vector>

// Exact-path Monte Carlo: the CEV beta=1 model through its 3D-Bessel
// representation, the deterministic-endpoint bridge, and the supremum-based
// estimator of the Madan-Yor correction pi_T. Draws come from a
// counter-based generator, so path i is the same bit pattern regardless of
// batching or thread count.

namespace slm::mcsim {

struct McConfig {
    std::int64_t n_paths = 10000;
    int n_steps = 200;
    std::uint64_t seed = 0;
    std::vector<double> z_levels = {8.0, 16.0, 32.0, 64.0};  // strictly increasing, > 1
};

struct PathSample {
    std::vector<double> terminal;  // S_T per path
    std::vector<double> supremum;  // max over the time grid per path
    std::vector<double> mid;       // value at the grid point nearest T/2
    double maturity = 0.0;
    bool deterministic_terminal = false;  // Dirac endpoint (bridge)

    // Exact per-path probabilities P(sup over the continuous path >= z),
    // one vector per threshold, from closed-form bridge-hitting odds
    // between grid points. Filled by the cev1 and lognormal simulators for
    // the thresholds in the config; the plain grid maximum (biased low for
    // fast excursions) stays available in `supremum`.
    std::vector<double> hit_levels;
    std::vector<std::vector<double>> hit_prob;
};

// dS = sigma S^2 dW, S_0 = 1, via S_t = 1/|B_{sigma^2 t} + e1| with B a
// 3D Brownian motion: exact in law at every grid point.
PathSample simulate_cev1_paths(double sigma, double T, const McConfig& cfg);

// Bridge M_t = (1 - mu) exp(W_{phi_t} - phi_t/2) + mu, phi_t = -log(1 - t/T).
// Exact at interior grid points; the terminal value is set to mu identically.
PathSample simulate_bridge(double mu, double T, const McConfig& cfg);

// Driftless lognormal control (true martingale), exact at grid points.
PathSample simulate_lognormal_paths(double sigma, double T, const McConfig& cfg);

struct McDefectEstimate {
    struct Level {
        double z;
        double estimate;  // z * P(sup >= z)
        double std_err;
        std::int64_t exceedances;
    };
    std::vector<Level> per_level;
    double pi_hat;    // linear extrapolation in 1/z from the top two levels
    double std_err;   // binomial error propagated through the extrapolation
};

// Estimates pi_T = lim_z z Q(sup_{u<=T} S_u >= z) from path suprema.
// Throws slm::levels_too_low_error when the top level has fewer than 50
// exceedances and slm::domain_error for deterministic-terminal inputs.
McDefectEstimate estimate_pi(const PathSample& paths, const McConfig& cfg);

}  // namespace slm::mcsim
