#pragma once

#include "mcpde/harness.hpp"

#include <string>
#include <vector>

namespace mcpde {

enum class OutputFormat { csv, text };

OutputFormat format_from_string(const std::string& name);

// CSV columns: method,scheme,steps_per_day,n_paths,m_points,seed,price,
// iv_pct,se_bp,abs_err_bp,runtime_s. IV is percent to 3 decimals, errors
// are bp to 2 decimals; abs_err_bp is empty for benchmark rows.
std::string render_csv(const std::vector<TableRow>& rows);

// Aligned columns in the layout of the result tables.
std::string render_text(const std::vector<TableRow>& rows);

// Writes atomically: temp file in the target directory, then rename.
void emit_results(const std::vector<TableRow>& rows, OutputFormat format,
                  const std::string& path);

}  // namespace mcpde
