#pragma once

#include <functional>

#include "slm/models.hpp"

// Risk-neutral pricing against a TerminalLaw: Puts, alpha-collateralised
// Calls, the modified parity residual, the implied-volatility existence
// boundary x*(alpha), and smile evaluation. All pure functions of the law.

namespace slm::pricer {

// Integral of weight(s) * density(s) over [lower, upper] (upper may be
// +inf), honouring the law's quadrature guidance and exact tail
// substitution. Dirac laws evaluate the weight at the atom.
double integrate_density(const models::TerminalLaw& law,
                         const std::function<double(double)>& weight,
                         double lower, double upper);

// E[(S_T - e^x)_+] (uncollateralised Call).
double call_price_uncollateralised(const models::TerminalLaw& law, double x);

// C_S^alpha(x) = E[(S_T - e^x)_+] + alpha * m_T, alpha in [0,1].
double call_price(const models::TerminalLaw& law, double x, double alpha);

// P_S(x) = E[(e^x - S_T)_+], including the e^x * mass_at_zero part.
double put_price(const models::TerminalLaw& law, double x);

// C_S(x) - P_S(x) - (1 - e^x - m_T); vanishes for an internally consistent
// pricing setup, exposed for diagnostics.
double parity_residual(const models::TerminalLaw& law, double x);

struct ExistenceBoundary {
    double alpha;
    double x_star;  // -inf when the smile exists on the whole line
};

// Left endpoint of the domain of the alpha-collateralised Call smile:
// the root of F(x) = E[max(S_T, e^x)] + alpha m_T - 1 on (-inf, 0].
// Returns -inf for alpha = 1 or defect 0; closed form for Dirac laws.
ExistenceBoundary existence_boundary(const models::TerminalLaw& law, double alpha);

// Implied volatility of the alpha-collateralised Call. Throws
// slm::non_existence_error (carrying x*) for x left of the boundary.
double smile(const models::TerminalLaw& law, double x, double alpha);

// Put-implied volatility; defined on the whole real line.
double put_smile(const models::TerminalLaw& law, double x);

}  // namespace slm::pricer
