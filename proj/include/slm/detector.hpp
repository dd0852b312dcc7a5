#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// The implied-volatility bubble test: given quotes at one maturity, decide
// strict-local vs true-martingale behaviour from the right wing and extract
// the martingale defect m_T = N(n_T). Any finite-strike version of the
// asymptotic criterion is a heuristic; every threshold is explicit
// configuration and echoed in the report.

namespace slm::detector {

struct Quote {
    double log_strike;
    double implied_vol;
};

struct QuoteSet {
    double maturity = 1.0;
    std::vector<Quote> quotes;  // sorted by log-strike, distinct strikes
};

struct Config {
    double x_min_wing = 2.0;   // quotes with x > this form the wing window
    double flat_tol = 0.01;    // |slope| below this counts as flat, per unit x
    double trend_tstat = 3.0;  // significance threshold for "decreasing"
    int min_wing_points = 4;   // fewer wing quotes than this -> Inconclusive
};

enum class Verdict { StrictLocal, TrueMartingaleLike, Inconclusive };

const char* to_string(Verdict v);

struct DetectionReport {
    double n_hat = 0.0;  // mean of the top-half wing residuals
    double m_hat = 0.0;  // N(n_hat) for StrictLocal, 0 for TrueMartingaleLike
    Verdict verdict = Verdict::Inconclusive;
    std::vector<double> residuals;  // iv sqrt(T) - sqrt(2x) over the wing window
    double slope = 0.0;             // least-squares trend of the residuals in x
    double trend_stat = 0.0;        // slope / SE(slope)
    int wing_points = 0;
    std::string note;  // records the thresholds used
};

// Residual-trend test on the wing window. Throws slm::non_wing_data_error
// when no quote lies beyond x_min_wing and slm::too_few_quotes_error when
// fewer than four do.
DetectionReport detect(const QuoteSet& quotes, const Config& cfg = {});

// CSV schema: header "log_strike,implied_vol", one quote per row.
// The maturity is supplied separately. Throws slm::domain_error on schema
// violations, duplicate strikes, or non-positive vols.
QuoteSet quotes_from_csv(std::istream& in, double maturity);

}  // namespace slm::detector
