#pragma once

#include "mcpde/brownian.hpp"
#include "mcpde/model.hpp"
#include "mcpde/spde.hpp"
#include "mcpde/types.hpp"

#include <cstdint>
#include <optional>

namespace mcpde {

struct PricingResult {
    double price = 0.0;
    double std_error_price = 0.0;
    double implied_vol = 0.0;            // NaN when the price sits outside the IV band
    double std_error_iv_bp = 0.0;        // delta method: se_price / vega, in bp
    std::optional<double> abs_err_bp;    // vs a supplied benchmark IV
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    double runtime_s = 0.0;
    Method method = Method::mixing;
    std::uint64_t seed = 0;
};

// Mixed Monte-Carlo / PDE: per path, simulate (dB, V), solve the backward
// SPDE along it, read the initial layer at x0 = ln(S0/K); discount the
// path average.
PricingResult price_mixed(const ModelSpec& model, const InverseGammaParams& params,
                          const SpaceGrid& grid, const TimeGrid& time_grid, std::size_t n_paths,
                          std::uint64_t seed, Scheme scheme, unsigned workers = 0);

// Full two-dimensional Monte-Carlo on (X, V) with correlated drivers.
PricingResult price_full_mc(const ModelSpec& model, const InverseGammaParams& params,
                            const TimeGrid& time_grid, std::size_t n_paths, std::uint64_t seed,
                            unsigned workers = 0);

// Monte-Carlo mixing solution: per V path, accumulate
//   I1 = sum rho V dB,  I2 = sum rho^2 V^2 dt,  I3 = sum V^2 (1 - rho^2) dt
// (left end points), xi = exp(I1 - I2/2), value = Put_BS(S0 xi, I3).
PricingResult price_mixing(const ModelSpec& model, const InverseGammaParams& params,
                           const TimeGrid& time_grid, std::size_t n_paths, std::uint64_t seed,
                           unsigned workers = 0);

}  // namespace mcpde
