#pragma once

#include <stdexcept>
#include <string>

namespace slm {

// Base class for all library failures so callers can catch slm::error wholesale.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument or a request outside the mathematical domain of an operation.
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// A price outside the attainable range of the Black-Scholes map.
class out_of_bounds_error : public domain_error {
public:
    out_of_bounds_error(const std::string& msg, double price, double lower, double upper)
        : domain_error(msg), price(price), lower(lower), upper(upper) {}
    double price;
    double lower;
    double upper;
};

// Implied volatility requested left of the existence boundary x*(alpha).
class non_existence_error : public domain_error {
public:
    non_existence_error(const std::string& msg, double x_requested, double x_star)
        : domain_error(msg), x_requested(x_requested), x_star(x_star) {}
    double x_requested;
    double x_star;
};

// Numerical failure: an iteration or quadrature did not reach its tolerance.
class numerical_error : public error {
public:
    explicit numerical_error(const std::string& msg) : error(msg) {}
};

class quadrature_error : public numerical_error {
public:
    explicit quadrature_error(const std::string& msg) : numerical_error(msg) {}
};

// Divergence test could not decide between finite and infinite at the cutoffs.
class indeterminate_error : public numerical_error {
public:
    explicit indeterminate_error(const std::string& msg) : numerical_error(msg) {}
};

// Tail-exponent regression did not produce a trustworthy power law.
class tail_undetermined_error : public numerical_error {
public:
    explicit tail_undetermined_error(const std::string& msg) : numerical_error(msg) {}
};

// Too few supremum exceedances at the top threshold for a usable estimate.
class levels_too_low_error : public numerical_error {
public:
    explicit levels_too_low_error(const std::string& msg) : numerical_error(msg) {}
};

// Quote-set problems for the detection test.
class too_few_quotes_error : public domain_error {
public:
    explicit too_few_quotes_error(const std::string& msg) : domain_error(msg) {}
};

class non_wing_data_error : public domain_error {
public:
    explicit non_wing_data_error(const std::string& msg) : domain_error(msg) {}
};

}  // namespace slm
