#include "slm/pricer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slm/blackscholes.hpp"
#include "slm/errors.hpp"
#include "slm/quadrature.hpp"
#include "slm/roots.hpp"

namespace slm::pricer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative-only tolerance: far-wing prices live at 1e-50 scales where
// an absolute floor would stop refinement long before the implied vol
// is pinned down. Integrands are evaluated in log space, so relative
// accuracy survives all the way down.
quadrature::Options price_quad() { return {1e-300, 5e-12, 10000}; }

}  // namespace

double integrate_density(const models::TerminalLaw& law,
                         const std::function<double(double)>& weight,
                         double lower, double upper) {
    if (law.is_dirac()) {
        const double mu = *law.dirac_at;
        return (mu > 0.0 && mu >= lower && mu <= upper) ? weight(mu) : 0.0;
    }
    auto integrand = [&](double s) {
        const double f = law.density(s);
        return (f == 0.0) ? 0.0 : weight(s) * f;
    };
    const double lo = std::max(lower, law.quad_lower);
    double total = 0.0;
    const double finite_hi = std::min(upper, law.quad_anchor);
    if (finite_hi > lo)
        total += quadrature::integrate_split(integrand, lo, finite_hi, law.quad_splits,
                                             price_quad())
                     .value;
    if (upper > law.quad_anchor && law.tail_power) {
        const double from = std::max(lo, law.quad_anchor);
        if (std::isinf(upper))
            total += quadrature::integrate_power_tail(integrand, from, *law.tail_power,
                                                      price_quad())
                         .value;
        else if (upper > from)
            total += quadrature::integrate_power_window(integrand, from, upper,
                                                        *law.tail_power, price_quad())
                         .value;
    }
    // the weights used here are nonnegative; clip quadrature roundoff
    return std::max(total, 0.0);
}

double call_price_uncollateralised(const models::TerminalLaw& law, double x) {
    const double strike = std::exp(x);
    if (law.is_dirac()) return std::max(*law.dirac_at - strike, 0.0);
    return integrate_density(
        law, [strike](double s) { return s - strike; }, strike, kInf);
}

double call_price(const models::TerminalLaw& law, double x, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw domain_error("call_price: alpha must lie in [0,1]");
    return call_price_uncollateralised(law, x) + alpha * law.defect;
}

double put_price(const models::TerminalLaw& law, double x) {
    const double strike = std::exp(x);
    if (law.is_dirac()) return std::max(strike - *law.dirac_at, 0.0);
    const double body = integrate_density(
        law, [strike](double s) { return strike - s; }, 0.0, strike);
    return body + strike * law.mass_at_zero;
}

double parity_residual(const models::TerminalLaw& law, double x) {
    const double c = call_price_uncollateralised(law, x);
    const double p = put_price(law, x);
    return c - p - (1.0 - std::exp(x) - law.defect);
}

ExistenceBoundary existence_boundary(const models::TerminalLaw& law, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw domain_error("existence_boundary: alpha must lie in [0,1]");
    const double m = law.defect;
    if (alpha == 1.0 || m <= 1e-14) return {alpha, -kInf};
    if (law.is_dirac()) {
        // F(x) = max(mu, e^x) + alpha m - 1 is flat below log(mu); the first
        // nonnegative point is the upper sandwich bound itself.
        return {alpha, std::log1p(-alpha * m)};
    }
    auto F = [&](double x) {
        return call_price_uncollateralised(law, x) + std::exp(x) + alpha * m - 1.0;
    };
    double lo = std::log((1.0 - alpha) * m);  // F < 0 here (strict sandwich bound)
    int guard = 0;
    while (F(lo) >= 0.0 && guard++ < 60) lo -= 1.0;
    const double f_hi = F(0.0);
    if (f_hi <= 0.0) return {alpha, 0.0};
    const double x_star = roots::bisect(F, lo, 0.0, {1e-11, 200});
    return {alpha, x_star};
}

double smile(const models::TerminalLaw& law, double x, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw domain_error("smile: alpha must lie in [0,1]");
    // Time value over the no-static-arbitrage intrinsic, built on the
    // out-of-the-money side of modified parity:
    //   x >= 0:  C^a - 0        = C + a m
    //   x <  0:  C^a - (1-e^x)  = P - (1-a) m
    // Both sides are small direct quadratures, so deep-in-the-money smiles
    // are not drowned by the intrinsic part.
    const double m = law.defect;
    const double time_value = (x >= 0.0)
                                  ? call_price_uncollateralised(law, x) + alpha * m
                                  : put_price(law, x) - (1.0 - alpha) * m;
    if (time_value < 0.0) {
        const ExistenceBoundary b = existence_boundary(law, alpha);
        throw non_existence_error(
            "smile: call-implied volatility undefined left of x*(alpha)", x, b.x_star);
    }
    return blackscholes::implied_vol_from_otm(time_value, x, law.maturity);
}

double put_smile(const models::TerminalLaw& law, double x) {
    if (x <= 0.0)
        return blackscholes::implied_vol_put(put_price(law, x), x, law.maturity);
    // In-the-money puts: the time value P - (e^x - 1) equals C + m by
    // modified parity, which sidesteps the cancellation against e^x.
    const double time_value = call_price_uncollateralised(law, x) + law.defect;
    return blackscholes::implied_vol_from_otm(time_value, x, law.maturity);
}

}  // namespace slm::pricer
