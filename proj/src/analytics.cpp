#include "mcpde/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mcpde {

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z * std::numbers::sqrt2 * 0.5);
}

double norm_pdf(double z) {
    static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

BsPutInputs BsPutInputs::make(double x, double y, double k_strike, double rate_integral) {
    if (!(x >= 0.0)) throw validation_error("x", "effective spot must be >= 0");
    if (!(y >= 0.0)) throw validation_error("y", "total variance must be >= 0");
    if (!(k_strike > 0.0)) throw validation_error("k_strike", "must be > 0");
    return BsPutInputs{x, y, k_strike, std::exp(-rate_integral), rate_integral};
}

double put_bs(const BsPutInputs& inp) {
    const double kd = inp.k_strike * inp.discount;
    if (inp.x == 0.0) return kd;
    if (inp.y == 0.0) return std::max(kd - inp.x, 0.0);
    const double sqrt_y = std::sqrt(inp.y);
    const double m = (std::log(inp.x / inp.k_strike) + inp.rate_integral) / sqrt_y;
    const double d_plus = m + 0.5 * sqrt_y;
    const double d_minus = m - 0.5 * sqrt_y;
    return kd * norm_cdf(-d_minus) - inp.x * norm_cdf(-d_plus);
}

double bs_put_const_vol(double s, double k, double r, double t, double vol) {
    return put_bs(BsPutInputs::make(s, vol * vol * t, k, r * t));
}

double bs_put_vega(double s, double k, double r, double t, double vol) {
    const double y = vol * vol * t;
    if (y <= 0.0 || s <= 0.0) return 0.0;
    const double sqrt_y = std::sqrt(y);
    const double d_plus = (std::log(s / k) + r * t) / sqrt_y + 0.5 * sqrt_y;
    return s * norm_pdf(d_plus) * std::sqrt(t);
}

double implied_vol_put(double price, double s, double k, double r, double t) {
    const double kd = k * std::exp(-r * t);
    const double lower = std::max(kd - s, 0.0);
    if (!(price > lower))
        throw std::domain_error("implied_vol_put: price " + std::to_string(price) +
                                " at or below the lower arbitrage bound " + std::to_string(lower));
    if (!(price < kd))
        throw std::domain_error("implied_vol_put: price " + std::to_string(price) +
                                " at or above the upper arbitrage bound " + std::to_string(kd));

    constexpr double vol_lo = 1e-9;
    constexpr double vol_hi = 5.0;
    constexpr double price_tol = 1e-12;

    auto f = [&](double vol) { return bs_put_const_vol(s, k, r, t, vol) - price; };

    // Brent's method; the put price is strictly increasing in vol
    double a = vol_lo, b = vol_hi;
    double fa = f(a), fb = f(b);
    if (fa > 0.0)
        throw std::domain_error("implied_vol_put: price below the zero-volatility limit");
    if (fb < 0.0)
        throw std::domain_error("implied_vol_put: price implies volatility above 5");

    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5e-14;
        const double xm = 0.5 * (c - b);
        if (std::abs(fb) <= price_tol || std::abs(xm) <= tol1) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic / secant step
            const double s_ratio = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s_ratio;
                q = 1.0 - s_ratio;
            } else {
                const double qa = fa / fc;
                const double rb = fb / fc;
                p = s_ratio * (2.0 * xm * qa * (qa - rb) - (b - a) * (rb - 1.0));
                q = (qa - 1.0) * (rb - 1.0) * (s_ratio - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw solver_error("implied_vol_put: Brent iteration did not converge");
}

double abs_error_bp(double iv, double benchmark_iv) {
    return std::abs(iv - benchmark_iv) * 1e4;
}

}  // namespace mcpde
