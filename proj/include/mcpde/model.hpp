#pragma once

#include "mcpde/types.hpp"

#include <functional>

namespace mcpde {

// Coefficient functions of the diffusion pair
//   dX = mu(t,X,V) dt + sigma(t,X,V) dW
//   dV = alpha(t,V) dt + beta(t,V) dB,   d<W,B> = rho(t) dt
// in log-moneyness coordinates. All drifts are per year, diffusions per
// sqrt(year). sigma_y must be the analytic derivative of sigma in v.
struct ModelSpec {
    std::function<double(double t, double x, double v)> mu;
    std::function<double(double t, double x, double v)> sigma;
    std::function<double(double t, double x, double v)> sigma_y;
    std::function<double(double t, double v)> alpha;
    std::function<double(double t, double v)> beta;
    std::function<double(double t)> rho;
    std::function<double(double t)> rate;
};

// Constant-parameter Inverse-Gamma model:
//   dS = r S dt + S V dW,   dV = kappa (theta - V) dt + lambda V dB.
// Volatilities are decimals (0.20), never percent.
struct InverseGammaParams {
    double s0 = 100.0;         // spot
    double k_strike = 100.0;   // strike
    double v0 = 0.20;          // initial volatility
    double t_maturity = 0.5;   // years
    double rate = 0.01;        // flat short rate, per year
    double kappa = 5.0;        // mean-reversion speed, per year
    double theta = 0.18;       // long-run volatility
    double lambda = 0.90;      // vol-of-vol, per sqrt(year)
    double rho = -0.35;        // spot/vol correlation

    // Throws validation_error naming the offending field. lambda = 0 is
    // permitted (deterministic-volatility oracle configurations).
    void validate() const;

    double log_moneyness() const { return std::log(s0 / k_strike); }
    double rate_integral() const { return rate * t_maturity; }
    double discount() const { return std::exp(-rate_integral()); }
};

// Log-coordinate ModelSpec for the Inverse-Gamma model: mu = r - v^2/2,
// sigma = v, sigma_y = 1, alpha = kappa (theta - v), beta = lambda v.
ModelSpec inverse_gamma_model(const InverseGammaParams& p);

// Closed-form V_t = theta + (v0 - theta) exp(-kappa t) for lambda = 0.
double deterministic_vol_path(const InverseGammaParams& p, double t);

// Integral of V_t^2 over [0, T] along the closed-form path above.
double integrated_variance_deterministic(const InverseGammaParams& p);

}  // namespace mcpde
