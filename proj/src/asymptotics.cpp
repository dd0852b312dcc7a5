#include "slm/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "slm/errors.hpp"
#include "slm/pricer.hpp"
#include "slm/specfun.hpp"

namespace slm::asymptotics {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogPi = 1.1447298858494001741434273513531;
}  // namespace

WingExpansion make_wing(double defect, double maturity) {
    if (!(maturity > 0.0)) throw domain_error("make_wing: maturity must be positive");
    if (!(defect >= 0.0 && defect <= 1.0))
        throw domain_error("make_wing: defect must lie in [0,1]");
    return {maturity, defect, specfun::norm_quantile(defect)};
}

double wing_value(const WingExpansion& w, double x) {
    if (!(x > 0.0)) throw domain_error("wing_value: x must be positive");
    if (!(w.defect > 0.0))
        throw domain_error("wing_value: zero defect has no finite intercept");
    const double rT = std::sqrt(w.maturity);
    return std::sqrt(2.0 * x / w.maturity) + w.intercept_n / rT;
}

double wing_value_order2(const WingExpansion& w, double x) {
    const double n = w.intercept_n;
    return wing_value(w, x) + n * n / (2.0 * std::sqrt(2.0 * w.maturity * x));
}

double wing_value_order2(const HigherOrderExpansion& h, double x) {
    return wing_value_order2(h.base, x);
}

double lee_slope(double p) {
    if (!(p >= 0.0)) throw domain_error("lee_slope: p must be nonnegative");
    // 2 - 4 (sqrt(p(p+1)) - p), rewritten to dodge the cancellation at
    // large p where sqrt(p(p+1)) - p -> 1/2.
    const double root = std::sqrt(p * (p + 1.0));
    const double diff = (p > 1.0) ? p / (root + p) : root - p;  // sqrt(p(p+1)) - p
    return 2.0 - 4.0 * diff;
}

double critical_moment(const models::TerminalLaw& law) {
    if (law.is_dirac())
        return kInf;  // bounded support: all moments finite
    // Log-log fit of the density over [s_a, 2^10 s_a]; a power tail
    // f ~ c s^{-q} gives slope -q and p* = q - 1.
    const double s_a = std::max(law.quad_anchor, 1.0);
    const int n = 44;
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        const double s = s_a * std::exp2(10.0 * i / (n - 1.0));
        const double f = law.density(s);
        if (!(f > 0.0))
            throw tail_undetermined_error("critical_moment: density vanished in the window");
        lx[i] = std::log(s);
        ly[i] = std::log(f);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
        syy += ly[i] * ly[i];
    }
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double cxy = sxy - sx * sy / n;
    const double slope = cxy / vx;
    const double r2 = (vy > 0.0) ? (cxy * cxy) / (vx * vy) : 1.0;
    if (r2 < 0.999)
        throw tail_undetermined_error("critical_moment: tail not power-like (R^2 < 0.999)");
    return -slope - 1.0;
}

LeeSlope moment_slope(const models::TerminalLaw& law) {
    const double p_star = critical_moment(law);
    return {p_star, std::isinf(p_star) ? 0.0 : lee_slope(p_star)};
}

double g_function(const models::TerminalLaw& law, double x) {
    const double strike = std::exp(x);
    return pricer::integrate_density(
        law, [](double s) { return s; }, strike, kInf);
}

double tehranchi_total_variance(const models::TerminalLaw& law, double x) {
    // E[S_T ^ e^x] = E[S_T] - E[(S_T - e^x)_+]
    const double capped = (1.0 - law.defect) - pricer::call_price_uncollateralised(law, x);
    if (!(capped > 0.0) || capped >= 1.0)
        throw domain_error("tehranchi_total_variance: E[S_T ^ e^x] must lie in (0,1)");
    const double l = -std::log(capped);
    return 8.0 * l - 4.0 * std::log(l) + 4.0 * x - 4.0 * kLogPi;
}

}  // namespace slm::asymptotics
