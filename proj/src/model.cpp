#include "mcpde/model.hpp"

#include <cmath>

namespace mcpde {

void InverseGammaParams::validate() const {
    auto positive = [](double value, const char* field) {
        if (!(value > 0.0) || !std::isfinite(value))
            throw validation_error(field, "must be > 0, got " + std::to_string(value));
    };
    positive(s0, "s0");
    positive(k_strike, "k_strike");
    positive(v0, "v0");
    positive(t_maturity, "t_maturity");
    positive(kappa, "kappa");
    positive(theta, "theta");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw validation_error("lambda", "must be >= 0, got " + std::to_string(lambda));
    if (!(rho > -1.0 && rho < 1.0))
        throw validation_error("rho", "must lie in (-1, 1), got " + std::to_string(rho));
    if (!std::isfinite(rate))
        throw validation_error("rate", "must be finite");
}

ModelSpec inverse_gamma_model(const InverseGammaParams& p) {
    p.validate();
    const double r = p.rate;
    const double kappa = p.kappa;
    const double theta = p.theta;
    const double lambda = p.lambda;
    const double rho = p.rho;
    ModelSpec m;
    m.mu = [r](double, double, double v) { return r - 0.5 * v * v; };
    m.sigma = [](double, double, double v) { return v; };
    m.sigma_y = [](double, double, double) { return 1.0; };
    m.alpha = [kappa, theta](double, double v) { return kappa * (theta - v); };
    m.beta = [lambda](double, double v) { return lambda * v; };
    m.rho = [rho](double) { return rho; };
    m.rate = [r](double) { return r; };
    return m;
}

double deterministic_vol_path(const InverseGammaParams& p, double t) {
    return p.theta + (p.v0 - p.theta) * std::exp(-p.kappa * t);
}

double integrated_variance_deterministic(const InverseGammaParams& p) {
    const double T = p.t_maturity;
    const double d = p.v0 - p.theta;
    if (p.kappa == 0.0) return p.v0 * p.v0 * T;
    // int (theta + d e^{-kt})^2 = theta^2 T + 2 theta d (1-e^{-kT})/k + d^2 (1-e^{-2kT})/(2k)
    const double k = p.kappa;
    const double e1 = -std::expm1(-k * T);
    const double e2 = -std::expm1(-2.0 * k * T);
    return p.theta * p.theta * T + 2.0 * p.theta * d * e1 / k + d * d * e2 / (2.0 * k);
}

}  // namespace mcpde
