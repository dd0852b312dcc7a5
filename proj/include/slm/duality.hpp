#pragma once

#include <functional>

#include "slm/models.hpp"

// The duality pairing a strictly positive strict local martingale (S, Q)
// with a true martingale (M, P) having mass at zero, through S = 1/M and
// dQ/dP = M_T. Dual laws are supplied analytically (CEV beta=1 against
// Brownian motion absorbed at zero); no measure construction is attempted.

namespace slm::duality {

// Volatility transform of the dual diffusion: sigma~(y) = y^2 sigma(1/y).
// Involutive: applying it twice restores the original function.
std::function<double(double)> dual_sigma(std::function<double(double)> sigma_fn);

// Law of Brownian motion started at 1 with volatility sigma, absorbed at
// zero, at time T: reflection-principle density plus mass 2 N(-1/(sigma sqrt T)).
models::TerminalLaw absorbed_bm_law(double sigma, double T);

struct DualPair {
    models::TerminalLaw s_law;  // strict local martingale side, no mass at zero
    models::TerminalLaw m_law;  // true martingale side, mass at zero
};

// Validates the defining invariants: strictly positive S-side and the
// defect / mass-at-zero identity. Throws slm::domain_error on violation.
DualPair make_pair(models::TerminalLaw s_law, models::TerminalLaw m_law);

// The CEV beta=1 model against absorbed Brownian motion with the same sigma.
DualPair make_cev1_pair(double sigma, double T);

struct PriceResiduals {
    double call_res;  // C_S^alpha(x) - [e^x P_M(-x) + (alpha - 1) m_T]
    double put_res;   // P_S(x) - e^x C_M(-x)
};

// Both dual price relations evaluated from independent quadratures of each
// side; residuals should sit at quadrature noise.
PriceResiduals dual_price_check(const DualPair& pair, double x, double alpha);

// |I_S^p(x) - I_M(-x)|: Put smile of S against the reflected smile of M.
double smile_reflection_residual(const DualPair& pair, double x);

}  // namespace slm::duality
