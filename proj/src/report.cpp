#include "mcpde/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mcpde {

namespace {

std::string fmt(const char* spec, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, value);
    return buf;
}

std::string scheme_column(const ExperimentConfig& cfg) {
    return cfg.method == Method::mixed ? to_string(cfg.scheme) : "-";
}

std::string iv_pct(const PricingResult& r) {
    if (!std::isfinite(r.implied_vol)) return "";
    return fmt("%.3f", r.implied_vol * 100.0);
}

std::string se_bp(const PricingResult& r) {
    if (!std::isfinite(r.std_error_iv_bp)) return "";
    return fmt("%.2f", r.std_error_iv_bp);
}

std::string abs_err_bp(const PricingResult& r) {
    if (!r.abs_err_bp || !std::isfinite(*r.abs_err_bp)) return "";
    return fmt("%.2f", *r.abs_err_bp);
}

}  // namespace

OutputFormat format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "text") return OutputFormat::text;
    throw validation_error("format", "unknown output format '" + name + "' (expected csv|text)");
}

std::string render_csv(const std::vector<TableRow>& rows) {
    std::string out =
        "method,scheme,steps_per_day,n_paths,m_points,seed,price,iv_pct,se_bp,abs_err_bp,runtime_s\n";
    for (const auto& row : rows) {
        const auto& c = row.config;
        const auto& r = row.result;
        out += to_string(c.method);
        out += ',' + scheme_column(c);
        out += ',' + fmt("%g", c.steps_per_day);
        out += ',' + std::to_string(c.n_paths);
        out += ',' + std::to_string(c.m_points);
        out += ',' + std::to_string(c.seed);
        out += ',' + fmt("%.10g", r.price);
        out += ',' + iv_pct(r);
        out += ',' + se_bp(r);
        out += ',' + abs_err_bp(r);
        out += ',' + fmt("%.3f", r.runtime_s);
        out += '\n';
    }
    return out;
}

std::string render_text(const std::vector<TableRow>& rows) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-8s %-15s %11s %9s %8s %9s %12s %9s\n", "Method", "Scheme",
                  "Steps/day", "#Path", "IV(%)", "S.E.(bp)", "Abs Err(bp)", "Run(s)");
    out += line;
    for (const auto& row : rows) {
        const auto& c = row.config;
        const auto& r = row.result;
        const std::string iv = iv_pct(r).empty() ? "N/A" : iv_pct(r);
        const std::string se = se_bp(r).empty() ? "N/A" : se_bp(r);
        const std::string abs_err = abs_err_bp(r).empty() ? "N/A" : abs_err_bp(r);
        std::snprintf(line, sizeof(line), "%-8s %-15s %11g %9zu %8s %9s %12s %9.2f\n",
                      to_string(c.method).c_str(), scheme_column(c).c_str(), c.steps_per_day,
                      c.n_paths, iv.c_str(), se.c_str(), abs_err.c_str(), r.runtime_s);
        out += line;
    }
    return out;
}

void emit_results(const std::vector<TableRow>& rows, OutputFormat format,
                  const std::string& path) {
    if (rows.empty()) throw validation_error("table", "refusing to write an empty table");
    const std::string body = format == OutputFormat::csv ? render_csv(rows) : render_text(rows);

    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write to '" + tmp.string() + "'");
        out << body;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move results into place at '" + path + "': " + ec.message());
    }
}

}  // namespace mcpde
