#include "mcpde/brownian.hpp"

#include "mcpde/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mcpde {

TimeGrid TimeGrid::make(double steps_per_day, double maturity_years) {
    if (!(steps_per_day > 0.0)) throw validation_error("steps_per_day", "must be > 0");
    if (!(maturity_years > 0.0)) throw validation_error("maturity", "must be > 0");
    const double raw = steps_per_day * kTradingDaysPerYear * maturity_years;
    // round half up; the convention gives fractional step counts (0.5/day)
    auto n = static_cast<std::size_t>(std::floor(raw + 0.5));
    if (n < 1) n = 1;
    TimeGrid g;
    g.n_steps = n;
    g.dt = maturity_years / static_cast<double>(n);
    g.steps_per_day = steps_per_day;
    g.maturity = maturity_years;
    return g;
}

TimeGrid TimeGrid::with_steps(std::size_t n_steps, double maturity_years) {
    if (n_steps < 1) throw validation_error("n_steps", "must be >= 1");
    if (!(maturity_years > 0.0)) throw validation_error("maturity", "must be > 0");
    TimeGrid g;
    g.n_steps = n_steps;
    g.dt = maturity_years / static_cast<double>(n_steps);
    g.steps_per_day = static_cast<double>(n_steps) / (kTradingDaysPerYear * maturity_years);
    g.maturity = maturity_years;
    return g;
}

void fill_increments(std::uint64_t seed, std::uint64_t path_index, const TimeGrid& grid,
                     unsigned stream_id, Vector& out) {
    const auto n = static_cast<Index>(grid.n_steps);
    out.resize(n);
    const double scale = std::sqrt(grid.dt);
    // counter lane c1 identifies (path, stream); c0 walks the blocks
    const std::uint64_t c1 = (path_index << 2) | stream_id;
    for (Index i = 0; i < n; i += 2) {
        const auto [z0, z1] = normal_pair(seed, static_cast<std::uint64_t>(i / 2), c1);
        out[i] = scale * z0;
        if (i + 1 < n) out[i + 1] = scale * z1;
    }
}

std::vector<Vector> make_increments(std::uint64_t seed, std::uint64_t path_index,
                                    const TimeGrid& grid, unsigned streams) {
    if (streams < 1 || streams > 2)
        throw validation_error("streams", "must be 1 or 2");
    std::vector<Vector> result(streams);
    for (unsigned s = 0; s < streams; ++s) fill_increments(seed, path_index, grid, s, result[s]);
    return result;
}

void euler_vol_path_into(const ModelSpec& model, double v0, const Vector& db,
                         const TimeGrid& grid, Vector& v_out) {
    const auto n = static_cast<Index>(grid.n_steps);
    if (db.size() != n)
        throw std::invalid_argument("euler_vol_path: increment count does not match the grid");
    v_out.resize(n + 1);
    v_out[0] = v0;
    double v = v0;
    for (Index i = 0; i < n; ++i) {
        const double t = grid.time_at(static_cast<std::size_t>(i));
        v += model.alpha(t, v) * grid.dt + model.beta(t, v) * db[i];
        if (!std::isfinite(v))
            throw path_error(static_cast<std::size_t>(i), "volatility path became non-finite");
        v_out[i + 1] = v;
    }
}

Vector euler_vol_path(const ModelSpec& model, double v0, const Vector& db,
                      const TimeGrid& grid) {
    Vector v;
    euler_vol_path_into(model, v0, db, grid, v);
    return v;
}

double euler_joint_path(const ModelSpec& model, double x0, double v0, const Vector& db,
                        const Vector& db_hat, const TimeGrid& grid) {
    const auto n = static_cast<Index>(grid.n_steps);
    if (db.size() != n || db_hat.size() != n)
        throw std::invalid_argument("euler_joint_path: increment count does not match the grid");
    double x = x0;
    double v = v0;
    for (Index i = 0; i < n; ++i) {
        const double t = grid.time_at(static_cast<std::size_t>(i));
        const double rho = model.rho(t);
        const double rho_hat = std::sqrt(1.0 - rho * rho);
        const double dw = rho * db[i] + rho_hat * db_hat[i];
        x += model.mu(t, x, v) * grid.dt + model.sigma(t, x, v) * dw;
        v += model.alpha(t, v) * grid.dt + model.beta(t, v) * db[i];
        if (!std::isfinite(x) || !std::isfinite(v))
            throw path_error(static_cast<std::size_t>(i), "joint path became non-finite");
    }
    return x;
}

PathBundle make_path_bundle(const ModelSpec& model, double v0, const TimeGrid& grid,
                            std::uint64_t seed, std::uint64_t path_index, unsigned streams) {
    PathBundle bundle;
    fill_increments(seed, path_index, grid, 0, bundle.db);
    if (streams > 1) fill_increments(seed, path_index, grid, 1, bundle.db_hat);
    euler_vol_path_into(model, v0, bundle.db, grid, bundle.v);
    return bundle;
}

}  // namespace mcpde
