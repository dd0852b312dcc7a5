#include "slm/detector.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

#include "slm/errors.hpp"
#include "slm/specfun.hpp"

namespace slm::detector {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::StrictLocal: return "StrictLocal";
        case Verdict::TrueMartingaleLike: return "TrueMartingaleLike";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

DetectionReport detect(const QuoteSet& quotes, const Config& cfg) {
    if (!(quotes.maturity > 0.0)) throw domain_error("detect: maturity must be positive");
    for (std::size_t i = 0; i < quotes.quotes.size(); ++i) {
        if (!(quotes.quotes[i].implied_vol > 0.0))
            throw domain_error("detect: implied vols must be positive");
        if (i > 0 && !(quotes.quotes[i].log_strike > quotes.quotes[i - 1].log_strike))
            throw domain_error("detect: quotes must be sorted with distinct strikes");
    }

    const double rT = std::sqrt(quotes.maturity);
    std::vector<double> xs, rs;
    for (const Quote& q : quotes.quotes) {
        if (q.log_strike > cfg.x_min_wing) {
            xs.push_back(q.log_strike);
            rs.push_back(q.implied_vol * rT - std::sqrt(2.0 * q.log_strike));
        }
    }
    if (xs.empty())
        throw non_wing_data_error("detect: no quotes beyond the wing threshold");
    if (xs.size() < 4)
        throw too_few_quotes_error("detect: need at least 4 wing quotes for a fit");

    const int n = static_cast<int>(xs.size());
    DetectionReport rep;
    rep.residuals = rs;
    rep.wing_points = n;

    // Least-squares trend of the residuals against log-strike.
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += xs[i];
        sy += rs[i];
    }
    const double mx = sx / n, my = sy / n;
    double vxx = 0, vxy = 0;
    for (int i = 0; i < n; ++i) {
        vxx += (xs[i] - mx) * (xs[i] - mx);
        vxy += (xs[i] - mx) * (rs[i] - my);
    }
    rep.slope = vxy / vxx;
    double rss = 0;
    for (int i = 0; i < n; ++i) {
        const double fit = my + rep.slope * (xs[i] - mx);
        rss += (rs[i] - fit) * (rs[i] - fit);
    }
    const double se = (n > 2) ? std::sqrt(rss / (n - 2) / vxx) : 0.0;
    rep.trend_stat = (se > 0.0) ? rep.slope / se
                                : std::copysign(std::numeric_limits<double>::infinity(),
                                                rep.slope);

    // Intercept estimate from the top half of the window, where the
    // O(x^{-1/2}) correction term has decayed the most.
    const int half = (n + 1) / 2;
    double top_sum = 0.0;
    for (int i = n - half; i < n; ++i) top_sum += rs[i];
    rep.n_hat = top_sum / half;

    if (n < cfg.min_wing_points) {
        rep.verdict = Verdict::Inconclusive;
        rep.m_hat = specfun::norm_cdf(rep.n_hat);
    } else if (std::abs(rep.slope) <= cfg.flat_tol) {
        rep.verdict = Verdict::StrictLocal;
        rep.m_hat = specfun::norm_cdf(rep.n_hat);
    } else if (rep.slope < -cfg.flat_tol &&
               (se == 0.0 || rep.trend_stat <= -cfg.trend_tstat)) {
        rep.verdict = Verdict::TrueMartingaleLike;
        rep.m_hat = 0.0;
    } else {
        rep.verdict = Verdict::Inconclusive;
        rep.m_hat = specfun::norm_cdf(rep.n_hat);
    }

    std::ostringstream note;
    note << "finite-strike surrogate of an asymptotic criterion; window x > "
         << cfg.x_min_wing << ", flat_tol " << cfg.flat_tol << ", trend_tstat "
         << cfg.trend_tstat << ", min_wing_points " << cfg.min_wing_points;
    rep.note = note.str();
    return rep;
}

QuoteSet quotes_from_csv(std::istream& in, double maturity) {
    std::string line;
    if (!std::getline(in, line)) throw domain_error("quotes csv: empty input");
    // Tolerate surrounding whitespace and a trailing carriage return.
    auto strip = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
    };
    if (strip(line) != "log_strike,implied_vol")
        throw domain_error("quotes csv: expected header 'log_strike,implied_vol'");

    QuoteSet qs;
    qs.maturity = maturity;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string row = strip(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string::npos)
            throw domain_error("quotes csv: malformed row at line " + std::to_string(lineno));
        double x, iv;
        try {
            x = std::stod(row.substr(0, comma));
            iv = std::stod(row.substr(comma + 1));
        } catch (const std::exception&) {
            throw domain_error("quotes csv: non-numeric row at line " + std::to_string(lineno));
        }
        qs.quotes.push_back({x, iv});
    }
    std::sort(qs.quotes.begin(), qs.quotes.end(),
              [](const Quote& a, const Quote& b) { return a.log_strike < b.log_strike; });
    for (std::size_t i = 1; i < qs.quotes.size(); ++i)
        if (qs.quotes[i].log_strike == qs.quotes[i - 1].log_strike)
            throw domain_error("quotes csv: duplicate log-strike");
    return qs;
}

}  // namespace slm::detector
