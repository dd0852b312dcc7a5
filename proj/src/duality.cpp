#include "slm/duality.hpp"

#include <cmath>
#include <utility>

#include "slm/errors.hpp"
#include "slm/pricer.hpp"
#include "slm/specfun.hpp"

namespace slm::duality {

std::function<double(double)> dual_sigma(std::function<double(double)> sigma_fn) {
    return [fn = std::move(sigma_fn)](double y) { return y * y * fn(1.0 / y); };
}

models::TerminalLaw absorbed_bm_law(double sigma, double T) {
    if (!(sigma > 0.0) || !(T > 0.0))
        throw domain_error("absorbed_bm_law: need sigma, T > 0");
    const double v = sigma * std::sqrt(T);
    auto density = [v](double m) -> double {
        if (!(m > 0.0)) return 0.0;
        const double a = (m - 1.0) / v;
        const double b = (m + 1.0) / v;
        return (specfun::norm_pdf(a) - specfun::norm_pdf(b)) / v;
    };
    models::TerminalLaw law;
    law.density = density;
    law.mass_at_zero = 2.0 * specfun::norm_cdf(-1.0 / v);
    law.maturity = T;
    law.quad_lower = 0.0;  // density vanishes linearly at 0, no cutoff needed
    law.quad_anchor = 1.0 + 42.0 * v;
    law.quad_splits = {1.0};
    law.defect = 0.0;  // true martingale: E[M_T] = 1
    law.label = "absorbed-bm(sigma=" + std::to_string(sigma) + ")";
    return law;
}

DualPair make_pair(models::TerminalLaw s_law, models::TerminalLaw m_law) {
    if (s_law.is_dirac() || s_law.mass_at_zero != 0.0)
        throw domain_error("make_pair: S side must be strictly positive with no atom");
    const double gap = std::abs(s_law.defect - m_law.mass_at_zero);
    if (gap > 1e-7)
        throw domain_error("make_pair: defect of S must equal mass at zero of M");
    if (std::abs(m_law.defect) > 1e-7)
        throw domain_error("make_pair: M side must be a true martingale");
    return {std::move(s_law), std::move(m_law)};
}

DualPair make_cev1_pair(double sigma, double T) {
    models::CevParams p;
    p.s0 = 1.0;
    p.beta = 1.0;
    p.sigma = sigma;
    p.T = T;
    return make_pair(models::cev_terminal_law(p), absorbed_bm_law(sigma, T));
}

PriceResiduals dual_price_check(const DualPair& pair, double x, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw domain_error("dual_price_check: alpha must lie in [0,1]");
    const double m = pair.s_law.defect;
    const double ex = std::exp(x);
    const double call_lhs = pricer::call_price(pair.s_law, x, alpha);
    const double call_rhs = ex * pricer::put_price(pair.m_law, -x) + (alpha - 1.0) * m;
    const double put_lhs = pricer::put_price(pair.s_law, x);
    const double put_rhs = ex * pricer::call_price_uncollateralised(pair.m_law, -x);
    return {call_lhs - call_rhs, put_lhs - put_rhs};
}

double smile_reflection_residual(const DualPair& pair, double x) {
    const double s_side = pricer::put_smile(pair.s_law, x);
    // M is a true martingale, so its Put- and fully-collateralised-Call
    // smiles coincide; smile() picks the out-of-the-money side, which keeps
    // deep-in-the-money quotes free of intrinsic-value roundoff.
    const double m_side = pricer::smile(pair.m_law, -x, 1.0);
    return std::abs(s_side - m_side);
}

}  // namespace slm::duality
