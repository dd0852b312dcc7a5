#pragma once

#include "slm/models.hpp"

// Closed-form wing machinery: the large-strike expansion of the Put /
// fully-collateralised-Call smile, its second-order refinement, the moment
// formula slope psi with the critical-moment estimator, and the large-time
// total-variance formula.

namespace slm::asymptotics {

// Coefficients of the right-wing expansion
//   I(x) = sqrt(2x/T) + n/sqrt(T) + o(1),   n = N^{-1}(m).
// For the alpha-collateralised variant construct with m = alpha * m_T.
struct WingExpansion {
    double maturity;
    double defect;       // m in (0, 1]
    double intercept_n;  // N^{-1}(m); -inf iff m = 0
};

WingExpansion make_wing(double defect, double maturity);

// sqrt(2x/T) + n/sqrt(T); requires x > 0 and a finite intercept (m > 0).
double wing_value(const WingExpansion& w, double x);

// How fast E[S_T 1{S_T >= e^x}] decays, which decides the sharpness of the
// second-order residual bound.
enum class GDecay {
    PolyHalf,     // G(x) = o(x^{-1/2})
    Exponential,  // G(x) = O(e^{-eps x})
};

struct HigherOrderExpansion {
    WingExpansion base;
    GDecay g_decay = GDecay::Exponential;
    double epsilon = 0.0;  // decay rate, only meaningful for Exponential
};

// Adds the n^2 / (2 sqrt(2 T x)) term to wing_value.
double wing_value_order2(const HigherOrderExpansion& h, double x);
double wing_value_order2(const WingExpansion& w, double x);

// psi(p) = 2 - 4 (sqrt(p (p+1)) - p), the moment-formula slope map.
double lee_slope(double p);

// Critical moment p* = sup{p : E[S_T^p] < inf}, estimated from a log-log
// regression of the density tail over a dyadic window. Throws
// slm::tail_undetermined_error when the tail is not power-like (R^2 < 0.999).
double critical_moment(const models::TerminalLaw& law);

// The moment-formula prediction for a law: its critical moment and the
// total-variance wing slope psi(p*) that a true martingale with that tail
// would have to show. Strict local martingales violate it (their slope
// is 2 regardless of p*), which is exactly what makes the wing test work.
struct LeeSlope {
    double p_star;
    double psi;  // in [0, 2]
};

LeeSlope moment_slope(const models::TerminalLaw& law);

// G(x) = E[S_T 1{S_T >= e^x}].
double g_function(const models::TerminalLaw& law, double x);

// Large-time total-variance approximation
//   -8 log E[S_T ^ e^x] - 4 log(-log E[S_T ^ e^x]) + 4x - 4 log(pi)
// with E[S_T ^ e^x] = (1 - m_T) - C_S(x). Throws slm::domain_error when
// E[S_T ^ e^x] >= 1. Callers compare against put_smile(x)^2 * T.
double tehranchi_total_variance(const models::TerminalLaw& law, double x);

}  // namespace slm::asymptotics
