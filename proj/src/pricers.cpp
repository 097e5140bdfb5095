#include "mcpde/pricers.hpp"

#include "mcpde/analytics.hpp"
#include "mcpde/parallel.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcpde {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Per-path sample average -> price, standard error, implied vol. The
// per-path values arrive undiscounted unless discount == 1.
PricingResult finalize(Method method, const InverseGammaParams& p, const TimeGrid& tg,
                       const Vector& values, double discount, std::uint64_t seed,
                       Clock::time_point start) {
    const SampleStats stats = summarize(values);
    PricingResult res;
    res.method = method;
    res.seed = seed;
    res.n_paths = static_cast<std::size_t>(values.size());
    res.n_steps = tg.n_steps;
    res.price = discount * stats.mean;
    res.std_error_price = discount * stats.std_error;
    if (!std::isfinite(res.price))
        throw std::runtime_error("pricing aggregate is non-finite");
    try {
        res.implied_vol = implied_vol_put(res.price, p.s0, p.k_strike, p.rate, p.t_maturity);
        const double vega = bs_put_vega(p.s0, p.k_strike, p.rate, p.t_maturity, res.implied_vol);
        res.std_error_iv_bp = (vega > 0.0) ? res.std_error_price / vega * 1e4
                                           : std::numeric_limits<double>::quiet_NaN();
    } catch (const std::domain_error&) {
        res.implied_vol = std::numeric_limits<double>::quiet_NaN();
        res.std_error_iv_bp = std::numeric_limits<double>::quiet_NaN();
    }
    res.runtime_s = seconds_since(start);
    return res;
}

}  // namespace

PricingResult price_mixed(const ModelSpec& model, const InverseGammaParams& params,
                          const SpaceGrid& grid, const TimeGrid& time_grid, std::size_t n_paths,
                          std::uint64_t seed, Scheme scheme, unsigned workers) {
    if (n_paths < 1) throw validation_error("n_paths", "must be >= 1");
    const auto start = Clock::now();
    const double x0 = params.log_moneyness();
    const Vector payoff = payoff_put(grid, params.k_strike);
    const BoundaryValues bc{params.k_strike, 0.0};

    Vector values(static_cast<Index>(n_paths));
    parallel_chunks(n_paths, workers, [&](std::size_t begin, std::size_t end) {
        BackwardSolver solver(model, grid, time_grid);
        PathBundle path;
        for (std::size_t k = begin; k < end; ++k) {
            try {
                fill_increments(seed, k, time_grid, 0, path.db);
                euler_vol_path_into(model, params.v0, path.db, time_grid, path.v);
                const Vector& initial = solver.solve(path, payoff, scheme, bc);
                values[static_cast<Index>(k)] = interpolate_at(grid, initial, x0);
            } catch (const std::exception& e) {
                throw std::runtime_error("path " + std::to_string(k) + ": " + e.what());
            }
        }
    });

    return finalize(Method::mixed, params, time_grid, values, params.discount(), seed, start);
}

PricingResult price_full_mc(const ModelSpec& model, const InverseGammaParams& params,
                            const TimeGrid& time_grid, std::size_t n_paths, std::uint64_t seed,
                            unsigned workers) {
    if (n_paths < 1) throw validation_error("n_paths", "must be >= 1");
    const auto start = Clock::now();
    const double x0 = params.log_moneyness();

    Vector values(static_cast<Index>(n_paths));
    parallel_chunks(n_paths, workers, [&](std::size_t begin, std::size_t end) {
        Vector db, db_hat;
        for (std::size_t k = begin; k < end; ++k) {
            try {
                fill_increments(seed, k, time_grid, 0, db);
                fill_increments(seed, k, time_grid, 1, db_hat);
                const double x_t = euler_joint_path(model, x0, params.v0, db, db_hat, time_grid);
                values[static_cast<Index>(k)] =
                    params.k_strike * std::max(1.0 - std::exp(x_t), 0.0);
            } catch (const std::exception& e) {
                throw std::runtime_error("path " + std::to_string(k) + ": " + e.what());
            }
        }
    });

    return finalize(Method::full_mc, params, time_grid, values, params.discount(), seed, start);
}

PricingResult price_mixing(const ModelSpec& model, const InverseGammaParams& params,
                           const TimeGrid& time_grid, std::size_t n_paths, std::uint64_t seed,
                           unsigned workers) {
    if (n_paths < 1) throw validation_error("n_paths", "must be >= 1");
    const auto start = Clock::now();
    const double rate_integral = params.rate_integral();

    Vector values(static_cast<Index>(n_paths));
    parallel_chunks(n_paths, workers, [&](std::size_t begin, std::size_t end) {
        Vector db, v;
        for (std::size_t k = begin; k < end; ++k) {
            try {
                fill_increments(seed, k, time_grid, 0, db);
                euler_vol_path_into(model, params.v0, db, time_grid, v);
                double i1 = 0.0, i2 = 0.0, i3 = 0.0;
                for (std::size_t i = 0; i < time_grid.n_steps; ++i) {
                    const double t = time_grid.time_at(i);
                    const double rho = model.rho(t);
                    const double vi = v[static_cast<Index>(i)];
                    const double v2 = vi * vi;
                    i1 += rho * vi * db[static_cast<Index>(i)];
                    i2 += rho * rho * v2 * time_grid.dt;
                    i3 += v2 * (1.0 - rho * rho) * time_grid.dt;
                }
                const double xi = std::exp(i1 - 0.5 * i2);
                values[static_cast<Index>(k)] =
                    put_bs(BsPutInputs::make(params.s0 * xi, i3, params.k_strike, rate_integral));
            } catch (const std::exception& e) {
                throw std::runtime_error("path " + std::to_string(k) + ": " + e.what());
            }
        }
    });

    // Put_BS already carries the discount
    return finalize(Method::mixing, params, time_grid, values, 1.0, seed, start);
}

}  // namespace mcpde
