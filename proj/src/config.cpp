#include "mcpde/config.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace mcpde {

namespace {

// defaults applied before file values
constexpr double kDefaultStepsPerDay = 24.0;
constexpr std::size_t kDefaultPaths = 100000;
constexpr Index kDefaultSpacePoints = 250;
constexpr std::uint64_t kDefaultSeed = 42;

struct RawSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;  // key -> raw value
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<RawSection> read_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::vector<RawSection> sections;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error(path + ":" + std::to_string(lineno) +
                                   ": malformed section header '" + line + "'");
            sections.push_back({trim(line.substr(1, line.size() - 2)), {}, lineno});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected 'key = value', got '" +
                               line + "'");
        if (sections.empty())
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": key outside of any [section]");
        sections.back().entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return sections;
}

double parse_double(const std::string& raw, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw config_error("key '" + key + "': cannot parse '" + raw + "' as a number");
    }
}

std::uint64_t parse_uint(const std::string& raw, const std::string& key) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc() || ptr != raw.data() + raw.size())
        throw config_error("key '" + key + "': cannot parse '" + raw + "' as a non-negative integer");
    return v;
}

void apply_model_key(InverseGammaParams& p, const std::string& key, const std::string& raw) {
    if (key == "s0") p.s0 = parse_double(raw, key);
    else if (key == "strike") p.k_strike = parse_double(raw, key);
    else if (key == "v0") p.v0 = parse_double(raw, key);
    else if (key == "maturity") p.t_maturity = parse_double(raw, key);
    else if (key == "rate") p.rate = parse_double(raw, key);
    else if (key == "kappa") p.kappa = parse_double(raw, key);
    else if (key == "theta") p.theta = parse_double(raw, key);
    else if (key == "lambda") p.lambda = parse_double(raw, key);
    else if (key == "rho") p.rho = parse_double(raw, key);
    else throw config_error("unknown key '" + key + "' in [model]");
}

void apply_run_key(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                   const std::string& raw) {
    if (key == "method") cfg.method = method_from_string(raw);
    else if (key == "scheme") cfg.scheme = scheme_from_string(raw);
    else if (key == "steps_per_day") cfg.steps_per_day = parse_double(raw, key);
    else if (key == "n_paths") cfg.n_paths = parse_uint(raw, key);
    else if (key == "m_points") cfg.m_points = static_cast<Index>(parse_uint(raw, key));
    else if (key == "seed") cfg.seed = parse_uint(raw, key);
    else throw config_error("unknown key '" + key + "' in [" + section + "]");
}

ParsedExperiment assemble(const std::vector<RawSection>& sections, const CliOverrides& overrides,
                          const std::string& path) {
    InverseGammaParams params;
    bool saw_model = false;
    ExperimentConfig defaults;
    defaults.steps_per_day = kDefaultStepsPerDay;
    defaults.n_paths = kDefaultPaths;
    defaults.m_points = kDefaultSpacePoints;
    defaults.seed = kDefaultSeed;

    std::optional<ExperimentConfig> benchmark;
    std::vector<ExperimentConfig> rows;

    // first pass: model and run-level defaults
    for (const auto& sec : sections) {
        if (sec.name == "model") {
            saw_model = true;
            for (const auto& [k, v] : sec.entries) apply_model_key(params, k, v);
        } else if (sec.name == "run") {
            for (const auto& [k, v] : sec.entries) apply_run_key(defaults, "run", k, v);
        } else if (sec.name != "benchmark" && sec.name != "row") {
            throw config_error(path + ":" + std::to_string(sec.line) + ": unknown section [" +
                               sec.name + "]");
        }
    }
    if (!saw_model) throw config_error(path + ": missing required [model] section");

    for (const auto& sec : sections) {
        if (sec.name != "benchmark" && sec.name != "row") continue;
        ExperimentConfig cfg = defaults;
        for (const auto& [k, v] : sec.entries) apply_run_key(cfg, sec.name, k, v);
        if (sec.name == "benchmark") {
            if (benchmark)
                throw config_error(path + ":" + std::to_string(sec.line) +
                                   ": duplicate [benchmark] section");
            benchmark = cfg;
        } else {
            rows.push_back(cfg);
        }
    }

    ParsedExperiment out;
    out.params = params;

    // single-run config: run-level values plus CLI overrides
    ExperimentConfig run = defaults;
    if (overrides.method) run.method = method_from_string(*overrides.method);
    if (overrides.scheme) run.scheme = scheme_from_string(*overrides.scheme);
    if (overrides.steps_per_day) run.steps_per_day = *overrides.steps_per_day;
    if (overrides.n_paths) run.n_paths = *overrides.n_paths;
    if (overrides.seed) run.seed = *overrides.seed;
    run.params = params;
    run.validate();
    out.run = run;

    // table: benchmark first (if present), then rows in file order, each
    // seeded from the base seed and its own shape
    const std::uint64_t base_seed = defaults.seed;
    std::optional<std::size_t> bench_index;
    if (benchmark) {
        benchmark->params = params;
        benchmark->seed = derive_row_seed(base_seed, benchmark->method, benchmark->steps_per_day,
                                          benchmark->n_paths);
        benchmark->validate();
        out.table.push_back(*benchmark);
        bench_index = 0;
    }
    for (auto& row : rows) {
        row.params = params;
        row.seed = derive_row_seed(base_seed, row.method, row.steps_per_day, row.n_paths);
        row.benchmark = bench_index;
        row.validate();
        out.table.push_back(row);
    }
    return out;
}

std::vector<RawSection> read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(path + ": " + e.what());
    }
    if (!doc.is_object()) throw config_error(path + ": top-level JSON value must be an object");

    auto to_raw = [](const std::string& section, const nlohmann::json& obj) {
        if (!obj.is_object())
            throw config_error("section '" + section + "' must be a JSON object");
        RawSection sec{section, {}, 0};
        for (const auto& [k, v] : obj.items()) {
            std::string raw;
            if (v.is_string()) raw = v.get<std::string>();
            else if (v.is_number_integer()) raw = std::to_string(v.get<long long>());
            else if (v.is_number_unsigned()) raw = std::to_string(v.get<unsigned long long>());
            else if (v.is_number_float()) {
                std::ostringstream oss;
                oss.precision(17);
                oss << v.get<double>();
                raw = oss.str();
            } else {
                throw config_error("key '" + k + "': unsupported JSON value type");
            }
            sec.entries.emplace_back(k, raw);
        }
        return sec;
    };

    std::vector<RawSection> sections;
    for (const auto& [name, value] : doc.items()) {
        if (name == "rows") {
            if (!value.is_array()) throw config_error("'rows' must be a JSON array");
            for (const auto& row : value) sections.push_back(to_raw("row", row));
        } else if (name == "model" || name == "run" || name == "benchmark") {
            sections.push_back(to_raw(name, value));
        } else {
            throw config_error("unknown section '" + name + "'");
        }
    }
    return sections;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

ParsedExperiment parse_config(const std::string& path, const CliOverrides& overrides) {
    const auto sections = ends_with(path, ".json") ? read_json(path) : read_ini(path);
    return assemble(sections, overrides, path);
}

}  // namespace mcpde
