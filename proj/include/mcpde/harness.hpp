#pragma once

#include "mcpde/model.hpp"
#include "mcpde/pricers.hpp"
#include "mcpde/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mcpde {

// One table row: which engine, at what resolution, with which seed.
struct ExperimentConfig {
    InverseGammaParams params;
    Method method = Method::mixing;
    Scheme scheme = Scheme::crank_nicolson;  // mixed engine only
    double steps_per_day = 24.0;
    std::size_t n_paths = 100000;
    Index m_points = 250;
    std::uint64_t seed = 42;
    std::optional<std::size_t> benchmark;  // index of the reference row

    void validate() const;
};

struct TableRow {
    ExperimentConfig config;
    PricingResult result;
};

// Stable per-row seed: base seed mixed with a hash of (method,
// steps_per_day, n_paths), so re-running a subset of a table reproduces
// the same rows.
std::uint64_t derive_row_seed(std::uint64_t base_seed, Method method, double steps_per_day,
                              std::size_t n_paths);

// Dispatches to the matching pricer; abs error filled when a benchmark IV
// is supplied. Engine errors are rethrown annotated with the config.
PricingResult run_experiment(const ExperimentConfig& cfg, unsigned workers = 0,
                             std::optional<double> benchmark_iv = std::nullopt);

// Runs benchmark rows first, then dependents; rows come back in input
// order. Throws validation_error for dangling or cyclic benchmark
// references, table_error when any row fails.
class table_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
std::vector<TableRow> run_table(const std::vector<ExperimentConfig>& configs,
                                unsigned workers = 0);

}  // namespace mcpde
