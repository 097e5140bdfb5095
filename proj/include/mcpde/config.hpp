#pragma once

#include "mcpde/harness.hpp"
#include "mcpde/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mcpde {

// Command-line overrides; they beat file values for the single-run config.
struct CliOverrides {
    std::optional<std::string> method;
    std::optional<std::string> scheme;
    std::optional<double> steps_per_day;
    std::optional<std::size_t> n_paths;
    std::optional<std::uint64_t> seed;
};

// Parsed experiment file. `run` drives the `price` command; `table` (the
// optional benchmark row followed by the data rows, in file order) drives
// `table`. Row seeds are already derived from the base seed.
struct ParsedExperiment {
    InverseGammaParams params;
    ExperimentConfig run;
    std::vector<ExperimentConfig> table;
};

// Reads an INI-style file ([model] / [run] / [benchmark] / [row] sections,
// key = value lines) or, when the path ends in .json, the schema-identical
// JSON document. Unknown sections or keys are errors, as are malformed
// values; messages carry the line number (INI) and the key name.
ParsedExperiment parse_config(const std::string& path, const CliOverrides& overrides = {});

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mcpde
