#pragma once

#include "mcpde/model.hpp"
#include "mcpde/types.hpp"

#include <cstdint>
#include <vector>

namespace mcpde {

// Uniform time lattice over [0, T]. Step count follows the trading-day
// convention: n_steps = round(steps_per_day * 253 * T), at least 1.
struct TimeGrid {
    std::size_t n_steps = 1;
    double dt = 0.0;
    double steps_per_day = 0.0;
    double maturity = 0.0;

    static constexpr int kTradingDaysPerYear = 253;

    static TimeGrid make(double steps_per_day, double maturity_years);
    // Explicit step count (scheme-order studies, oracles).
    static TimeGrid with_steps(std::size_t n_steps, double maturity_years);

    double time_at(std::size_t i) const { return dt * static_cast<double>(i); }
};

// One Monte-Carlo draw: Brownian increments (units sqrt(year)) and the
// volatility path they induce. db_hat is empty unless two driver streams
// were requested (full Monte-Carlo).
struct PathBundle {
    Vector db;
    Vector db_hat;
    Vector v;  // n_steps + 1 values, v[0] = V0
};

// n_steps i.i.d. Normal(0, dt) draws for stream `stream_id` of path
// (seed, path_index). Pure function of its key: same key, same bits.
void fill_increments(std::uint64_t seed, std::uint64_t path_index, const TimeGrid& grid,
                     unsigned stream_id, Vector& out);

// `streams` (1 or 2) independent increment arrays for one path.
std::vector<Vector> make_increments(std::uint64_t seed, std::uint64_t path_index,
                                    const TimeGrid& grid, unsigned streams);

// Euler-Maruyama V path: V_{i+1} = V_i + alpha dt + beta dB_i.
// Throws path_error on a non-finite value.
void euler_vol_path_into(const ModelSpec& model, double v0, const Vector& db,
                         const TimeGrid& grid, Vector& v_out);
Vector euler_vol_path(const ModelSpec& model, double v0, const Vector& db,
                      const TimeGrid& grid);

// Joint Euler step to the terminal log-moneyness:
// X_{i+1} = X_i + mu dt + sigma (rho dB_i + sqrt(1-rho^2) dBhat_i),
// with V advanced off the same dB. Returns X_n.
double euler_joint_path(const ModelSpec& model, double x0, double v0, const Vector& db,
                        const Vector& db_hat, const TimeGrid& grid);

// Increments plus the induced V path in one call.
PathBundle make_path_bundle(const ModelSpec& model, double v0, const TimeGrid& grid,
                            std::uint64_t seed, std::uint64_t path_index, unsigned streams);

}  // namespace mcpde
