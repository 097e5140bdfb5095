#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcpde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Pricing engines.
enum class Method { mixed, full_mc, mixing };

// Time stepping for the backward solver.
enum class Scheme { semi_implicit, crank_nicolson };

// Parameter/config rejection; carries the offending field name.
class validation_error : public std::invalid_argument {
public:
    validation_error(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Non-finite value produced while advancing a path or a backward sweep.
class path_error : public std::runtime_error {
public:
    path_error(std::size_t step, const std::string& message)
        : std::runtime_error("step " + std::to_string(step) + ": " + message), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

// Linear-system breakdown (zero pivot etc.); signals grid/dt misconfiguration.
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string to_string(Method m) {
    switch (m) {
        case Method::mixed: return "mixed";
        case Method::full_mc: return "full_mc";
        case Method::mixing: return "mixing";
    }
    return "unknown";
}

inline std::string to_string(Scheme s) {
    return s == Scheme::semi_implicit ? "semi_implicit" : "crank_nicolson";
}

inline Method method_from_string(const std::string& name) {
    if (name == "mixed") return Method::mixed;
    if (name == "full_mc") return Method::full_mc;
    if (name == "mixing") return Method::mixing;
    throw validation_error("method", "unknown method '" + name + "' (expected mixed|full_mc|mixing)");
}

inline Scheme scheme_from_string(const std::string& name) {
    if (name == "semi_implicit") return Scheme::semi_implicit;
    if (name == "crank_nicolson") return Scheme::crank_nicolson;
    throw validation_error("scheme", "unknown scheme '" + name + "' (expected semi_implicit|crank_nicolson)");
}

}  // namespace mcpde
