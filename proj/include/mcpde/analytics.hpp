#pragma once

#include "mcpde/types.hpp"

namespace mcpde {

// Standard normal CDF, erfc-based (absolute error well below 1e-12).
double norm_cdf(double z);
double norm_pdf(double z);

// Two-argument Black-Scholes put: x is the effective spot, y the total
// variance over the life of the option (= int sigma^2 dt).
struct BsPutInputs {
    double x = 0.0;              // effective spot
    double y = 0.0;              // total variance
    double k_strike = 0.0;
    double discount = 1.0;       // e^{-int r}
    double rate_integral = 0.0;  // int_0^T r dt

    static BsPutInputs make(double x, double y, double k_strike, double rate_integral);
};

// K e^{-int r} N(-d-) - x N(-d+), with d+- = (ln(x/K) + int r)/sqrt(y) +- sqrt(y)/2.
// Limits: y = 0 -> max(K e^{-int r} - x, 0); x = 0 -> K e^{-int r}.
double put_bs(const BsPutInputs& inp);

// Flat-rate wrapper: put_bs with x = s, y = vol^2 t, int r = r t.
double bs_put_const_vol(double s, double k, double r, double t, double vol);

// dPrice/dVol of the constant-vol put: s * phi(d+) * sqrt(t).
double bs_put_vega(double s, double k, double r, double t, double vol);

// Unique vol in [1e-9, 5] matching the put price (safeguarded Brent).
// Throws std::domain_error when price sits outside the arbitrage band
// (max(k e^{-rt} - s, 0), k e^{-rt}).
double implied_vol_put(double price, double s, double k, double r, double t);

// |iv - benchmark_iv| in basis points of volatility.
double abs_error_bp(double iv, double benchmark_iv);

}  // namespace mcpde
