#pragma once

// Black-Scholes prices in log-strike form for a unit forward (S0 = 1, zero
// rates) and robust implied-volatility inversion. Prices stay relatively
// accurate far into the wings (|d| >> 8) via scaled-erfc evaluation, which
// the wing asymptotics and detection machinery depend on.

namespace slm::blackscholes {

struct BsInputs {
    double x;      // log-strike, K = e^x
    double T;      // maturity in years, > 0
    double sigma;  // volatility per sqrt(year), >= 0
};

double d_plus(double x, double T, double sigma);
double d_minus(double x, double T, double sigma);

// Call price N(d+) - e^x N(d-). Monotone in sigma, in [(1-e^x)_+, 1).
double bs_call(const BsInputs& in);
double bs_call(double x, double T, double sigma);

// Put price, computed on the out-of-the-money side and shifted by parity,
// so bs_call(x,..) - bs_put(x,..) == 1 - e^x holds to machine precision.
double bs_put(const BsInputs& in);
double bs_put(double x, double T, double sigma);

// Unique sigma >= 0 with bs_call(x,T,sigma) = price. Returns exactly 0 at
// the intrinsic boundary. Throws slm::out_of_bounds_error for prices
// outside [(1-e^x)_+, 1).
double implied_vol_call(double price, double x, double T);

// Unique sigma >= 0 with bs_put(x,T,sigma) = price, for prices inside
// [(e^x-1)_+, e^x). Consistent with implied_vol_call under parity.
double implied_vol_put(double price, double x, double T);

// Inversion from the time value of the out-of-the-money option (the call
// for x >= 0, the put for x < 0), i.e. price minus intrinsic. Callers that
// know the time value directly avoid the cancellation of that subtraction,
// which is what keeps deep-in-the-money smiles meaningful. Domain
// [0, min(1, e^x)); exactly 0 maps to sigma = 0.
double implied_vol_from_otm(double time_value, double x, double T);

}  // namespace slm::blackscholes
