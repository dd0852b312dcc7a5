#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace slm::models {

// Terminal distribution of the underlying at the horizon: a density on
// (0, inf), a possible point mass at zero, or a Dirac law (bridge). Values
// are immutable after construction and safe to share across threads.
struct TerminalLaw {
    std::function<double(double)> density;  // on (0, inf); zero for Dirac laws
    double mass_at_zero = 0.0;
    double maturity = 1.0;
    std::optional<double> dirac_at;  // degenerate law: unit mass at this point

    // Quadrature guidance filled in by the constructors.
    double quad_lower = 0.0;   // contributions below here are < 1e-15
    double quad_anchor = 1.0;  // plain quadrature up to here, tail beyond
    std::optional<double> tail_power;  // u = s^{-p} regularises the upper tail;
                                       // absent means the tail beyond quad_anchor
                                       // is negligible (< 1e-15)
    std::vector<double> quad_splits;   // density features worth pre-splitting at

    double defect = 0.0;  // m_T = 1 - E[S_T], set by the constructors
    std::string label;

    bool is_dirac() const { return dirac_at.has_value(); }
};

struct CevParams {
    double s0 = 1.0;
    double beta = 1.0;
    double sigma = 1.0;
    double T = 1.0;
};

struct BridgeParams {
    double mu = 0.0;  // deterministic endpoint, in [0, 1)
    double T = 1.0;
};

// dS = sigma S^{1+beta} dW with beta > 0: the transition density comes from
// the Bessel representation and has no mass at zero. Throws for beta <= 0.
TerminalLaw cev_terminal_law(const CevParams& p);

// Deterministic-endpoint law: S_T = mu almost surely, m_T = 1 - mu.
// Rejects mu >= 1 (mu = 1 is not strict, mu > 1 breaks the supermartingale
// property).
TerminalLaw bridge_terminal_law(const BridgeParams& p);

// Lognormal control law (true martingale, m_T = 0) for comparison runs.
TerminalLaw lognormal_terminal_law(double sigma, double T);

// m_T = 1 - E[S_T] by fresh quadrature of s * density (exact for Dirac
// laws), clipped to [0,1]. Throws slm::quadrature_error on non-convergence.
double martingale_defect(const TerminalLaw& law);

// mass_at_zero + integral of the density; equals 1 for a proper law.
double normalization(const TerminalLaw& law);

// E[S_T^p] by quadrature; +inf when the integral diverges at the tail.
double moment(const TerminalLaw& law, double p);

struct QuadraticVolSpec {
    double a = 0.0, b = 0.0, c = 0.0;  // P(s) = a s^2 + b s + c
    double s0 = 0.0;
};

enum class MartingaleClass {
    TrueMartingale,
    StoppedTrueMartingale,  // strict itself, true once stopped at zero
    StrictSupermartingale,
    StrictSubmartingale,
    UnboundedStrictLocal,
};

const char* to_string(MartingaleClass c);

// Martingale classification of dS = P(S) dW by the root layout of P and the
// position of s0. Tags are mutually exclusive; boundary cases s0 equal to a
// root count as TrueMartingale (inclusive root interval). Scale-invariant
// in (a,b,c). Throws when a = b = c = 0.
MartingaleClass classify_quadratic(const QuadraticVolSpec& spec);

struct DiffusionIntegralResult {
    bool hits_zero;     // integral of x/sigma^2 over (0,1] is finite
    bool strict_local;  // integral of x/sigma^2 over [1,inf) is finite
};

// Numerical version of the two integral criteria for a driftless diffusion
// dX = sigma(X) dW: decides finiteness by doubling cutoffs with growth
// detection. Throws slm::indeterminate_error when neither convergence nor
// divergence is established at the configured cutoffs.
DiffusionIntegralResult diffusion_integral_tests(
    const std::function<double(double)>& sigma_fn);

}  // namespace slm::models
