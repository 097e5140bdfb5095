#include "mcpde/harness.hpp"

#include "mcpde/analytics.hpp"
#include "mcpde/brownian.hpp"
#include "mcpde/rng.hpp"
#include "mcpde/spde.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mcpde {

void ExperimentConfig::validate() const {
    params.validate();
    if (n_paths < 1) throw validation_error("n_paths", "must be >= 1");
    if (!(steps_per_day > 0.0)) throw validation_error("steps_per_day", "must be > 0");
    if (m_points < 3) throw validation_error("m_points", "must be >= 3");
}

std::uint64_t derive_row_seed(std::uint64_t base_seed, Method method, double steps_per_day,
                              std::size_t n_paths) {
    char buf[96];
    const int len = std::snprintf(buf, sizeof(buf), "%s|%.17g|%zu", to_string(method).c_str(),
                                  steps_per_day, n_paths);
    return splitmix64(base_seed ^ fnv1a64(buf, static_cast<std::size_t>(len)));
}

PricingResult run_experiment(const ExperimentConfig& cfg, unsigned workers,
                             std::optional<double> benchmark_iv) {
    cfg.validate();
    try {
        const ModelSpec model = inverse_gamma_model(cfg.params);
        const TimeGrid tg = TimeGrid::make(cfg.steps_per_day, cfg.params.t_maturity);
        PricingResult res;
        switch (cfg.method) {
            case Method::mixed: {
                const SpaceGrid grid = SpaceGrid::standard(
                    cfg.params.s0, cfg.params.k_strike, cfg.params.v0, cfg.params.t_maturity,
                    cfg.m_points);
                res = price_mixed(model, cfg.params, grid, tg, cfg.n_paths, cfg.seed, cfg.scheme,
                                  workers);
                break;
            }
            case Method::full_mc:
                res = price_full_mc(model, cfg.params, tg, cfg.n_paths, cfg.seed, workers);
                break;
            case Method::mixing:
                res = price_mixing(model, cfg.params, tg, cfg.n_paths, cfg.seed, workers);
                break;
        }
        if (benchmark_iv) res.abs_err_bp = abs_error_bp(res.implied_vol, *benchmark_iv);
        return res;
    } catch (const std::exception& e) {
        std::ostringstream oss;
        oss << "experiment(method=" << to_string(cfg.method) << ", steps_per_day="
            << cfg.steps_per_day << ", n_paths=" << cfg.n_paths << ", seed=" << cfg.seed
            << "): " << e.what();
        throw std::runtime_error(oss.str());
    }
}

std::vector<TableRow> run_table(const std::vector<ExperimentConfig>& configs, unsigned workers) {
    if (configs.empty()) throw validation_error("table", "must contain at least one row");

    const std::size_t n = configs.size();
    // reference checks: in range, acyclic
    for (std::size_t i = 0; i < n; ++i) {
        if (!configs[i].benchmark) continue;
        std::size_t hops = 0;
        std::optional<std::size_t> at = configs[i].benchmark;
        while (at) {
            if (*at >= n)
                throw validation_error("benchmark",
                                       "row " + std::to_string(i) + " references missing row " +
                                           std::to_string(*at));
            if (*at == i || ++hops > n)
                throw validation_error("benchmark", "cyclic benchmark reference at row " +
                                                        std::to_string(i));
            at = configs[*at].benchmark;
        }
    }

    std::vector<TableRow> rows(n);
    std::vector<char> done(n, 0);
    std::vector<std::string> failures;

    // benchmark rows (no reference) first, then dependents; repeat until
    // settled so chains of references resolve in order
    auto ready = [&](std::size_t i) {
        return !configs[i].benchmark || done[*configs[i].benchmark];
    };
    std::size_t completed = 0;
    while (completed < n) {
        bool progressed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i] || !ready(i)) continue;
            std::optional<double> bench_iv;
            if (configs[i].benchmark) {
                const auto& bench_row = rows[*configs[i].benchmark];
                if (bench_row.result.n_paths == 0) {
                    // benchmark itself failed; mark dependent failed
                    rows[i].config = configs[i];
                    failures.push_back("row " + std::to_string(i) + ": benchmark row " +
                                       std::to_string(*configs[i].benchmark) + " failed");
                    done[i] = 1;
                    ++completed;
                    progressed = true;
                    continue;
                }
                bench_iv = bench_row.result.implied_vol;
            }
            rows[i].config = configs[i];
            try {
                rows[i].result = run_experiment(configs[i], workers, bench_iv);
            } catch (const std::exception& e) {
                failures.push_back("row " + std::to_string(i) + ": " + e.what());
            }
            done[i] = 1;
            ++completed;
            progressed = true;
        }
        if (!progressed)
            throw validation_error("benchmark", "unresolvable benchmark references");
    }

    if (!failures.empty()) {
        std::string msg = std::to_string(failures.size()) + " of " + std::to_string(n) +
                          " rows failed:";
        for (const auto& f : failures) msg += "\n  " + f;
        throw table_error(msg);
    }
    return rows;
}

}  // namespace mcpde
