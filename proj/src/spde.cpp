#include "mcpde/spde.hpp"

#include <cmath>
#include <stdexcept>

namespace mcpde {

SpaceGrid SpaceGrid::make(double x_min, double x_max, Index m_points) {
    if (m_points < 3) throw validation_error("m_points", "must be >= 3");
    if (!(x_max > x_min)) throw validation_error("x_max", "must exceed x_min");
    SpaceGrid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.m_points = m_points;
    g.dx = (x_max - x_min) / static_cast<double>(m_points - 1);
    return g;
}

SpaceGrid SpaceGrid::standard(double s0, double k_strike, double v0, double t_maturity,
                              Index m_points) {
    const double x0 = std::log(s0 / k_strike);
    const double half_span = 4.0 * v0 * std::sqrt(t_maturity);
    return make(x0 - half_span, x0 + half_span, m_points);
}

Vector payoff_put(const SpaceGrid& grid, double k_strike) {
    if (!(k_strike > 0.0)) throw validation_error("k_strike", "must be > 0");
    Vector phi(grid.m_points);
    for (Index j = 0; j < grid.m_points; ++j)
        phi[j] = k_strike * std::max(1.0 - std::exp(grid.node(j)), 0.0);
    return phi;
}

Vector thomas_solve(const TridiagonalSystem& sys) {
    const Index n = sys.diag.size();
    if (n == 0) return Vector();
    if (sys.rhs.size() != n || sys.lower.size() != n - 1 || sys.upper.size() != n - 1)
        throw std::invalid_argument("thomas_solve: inconsistent band sizes");

    Vector c_prime(n), d_prime(n);
    double pivot = sys.diag[0];
    if (std::abs(pivot) < 1e-300) throw solver_error("thomas_solve: zero pivot at row 0");
    c_prime[0] = (n > 1) ? sys.upper[0] / pivot : 0.0;
    d_prime[0] = sys.rhs[0] / pivot;
    for (Index i = 1; i < n; ++i) {
        pivot = sys.diag[i] - sys.lower[i - 1] * c_prime[i - 1];
        if (std::abs(pivot) < 1e-300)
            throw solver_error("thomas_solve: zero pivot at row " + std::to_string(i));
        if (i < n - 1) c_prime[i] = sys.upper[i] / pivot;
        d_prime[i] = (sys.rhs[i] - sys.lower[i - 1] * d_prime[i - 1]) / pivot;
    }
    Vector x(n);
    x[n - 1] = d_prime[n - 1];
    for (Index i = n - 2; i >= 0; --i) x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    return x;
}

namespace detail {

void eval_operator_coeffs(const ModelSpec& model, const SpaceGrid& grid, double t, double v,
                          OperatorCoeffs& out) {
    const Index m = grid.m_points;
    out.sigma2.resize(m);
    out.mu.resize(m);
    out.bcoef.resize(m);
    out.ccoef.resize(m);
    const double rho = model.rho(t);
    const double beta = model.beta(t, v);
    for (Index j = 0; j < m; ++j) {
        const double x = grid.node(j);
        const double sig = model.sigma(t, x, v);
        out.sigma2[j] = sig * sig;
        out.mu[j] = model.mu(t, x, v);
        out.bcoef[j] = rho * sig;
        out.ccoef[j] = rho * beta * model.sigma_y(t, x, v);
    }
}

void theta_step(const SpaceGrid& grid, const OperatorCoeffs& at_i, const OperatorCoeffs& at_next,
                const Vector& layer_next, double db, double dt, double theta,
                const BoundaryValues& bc, TridiagonalSystem& work, Vector& out) {
    const Index m = grid.m_points;
    const Index n_int = m - 2;
    const double inv_dx = 1.0 / grid.dx;
    const double inv_dx2 = inv_dx * inv_dx;
    const double expl = (1.0 - theta) * dt;

    work.lower.resize(n_int - 1);
    work.diag.resize(n_int);
    work.upper.resize(n_int - 1);
    work.rhs.resize(n_int);

    for (Index j = 1; j <= n_int; ++j) {
        // (L - C) row at the implicit level
        const double s = at_i.sigma2[j] * inv_dx2;
        const double mu = at_i.mu[j] * inv_dx;
        const double q = at_i.ccoef[j] * inv_dx;
        const double a = 0.5 * s;
        const double b = -s - mu + q;
        const double c = 0.5 * s + mu - q;

        const Index k = j - 1;  // interior row index
        work.diag[k] = 1.0 - theta * dt * b;
        if (k > 0) work.lower[k - 1] = -theta * dt * a;
        if (k < n_int - 1) work.upper[k] = -theta * dt * c;

        // right-end-point stochastic term B_{i+1}[u^{i+1}] dB
        const double du_next = (layer_next[j + 1] - layer_next[j]) * inv_dx;
        double rhs = layer_next[j] + at_next.bcoef[j] * du_next * db;

        if (expl != 0.0) {
            // explicit (L - C)_{i+1} applied to u^{i+1}
            const double sn = at_next.sigma2[j] * inv_dx2;
            const double mn = at_next.mu[j] * inv_dx;
            const double qn = at_next.ccoef[j] * inv_dx;
            rhs += expl * (0.5 * sn * (layer_next[j + 1] - 2.0 * layer_next[j] + layer_next[j - 1]) +
                           (mn - qn) * (layer_next[j + 1] - layer_next[j]));
        }

        if (j == 1) rhs += theta * dt * a * bc.left;
        if (j == n_int) rhs += theta * dt * c * bc.right;
        work.rhs[k] = rhs;
    }

    const Vector interior = thomas_solve(work);
    out.resize(m);
    out[0] = bc.left;
    out.segment(1, n_int) = interior;
    out[m - 1] = bc.right;
}

}  // namespace detail

OperatorApplications apply_operators(const ModelSpec& model, const SpaceGrid& grid, double t,
                                     double v, const Vector& layer) {
    if (layer.size() != grid.m_points)
        throw std::invalid_argument("apply_operators: layer size does not match the grid");
    const Index m = grid.m_points;
    OperatorApplications ops;
    ops.l = Vector::Zero(m);
    ops.b = Vector::Zero(m);
    ops.c = Vector::Zero(m);
    const double inv_dx = 1.0 / grid.dx;
    const double inv_dx2 = inv_dx * inv_dx;
    const double rho = model.rho(t);
    const double beta = model.beta(t, v);
    for (Index j = 1; j < m - 1; ++j) {
        const double x = grid.node(j);
        const double sig = model.sigma(t, x, v);
        const double fwd = (layer[j + 1] - layer[j]) * inv_dx;
        ops.l[j] = 0.5 * sig * sig * (layer[j + 1] - 2.0 * layer[j] + layer[j - 1]) * inv_dx2 +
                   model.mu(t, x, v) * fwd;
        ops.b[j] = rho * sig * fwd;
        ops.c[j] = rho * beta * model.sigma_y(t, x, v) * fwd;
    }
    return ops;
}

namespace {

Vector one_step(const ModelSpec& model, const SpaceGrid& grid, const Vector& layer_next,
                double t_i, double t_next, double v_i, double v_next, double db, double dt,
                double theta, const BoundaryValues& bc) {
    if (layer_next.size() != grid.m_points)
        throw std::invalid_argument("spde step: layer size does not match the grid");
    detail::OperatorCoeffs at_i, at_next;
    detail::eval_operator_coeffs(model, grid, t_i, v_i, at_i);
    detail::eval_operator_coeffs(model, grid, t_next, v_next, at_next);
    TridiagonalSystem work;
    Vector out;
    detail::theta_step(grid, at_i, at_next, layer_next, db, dt, theta, bc, work, out);
    return out;
}

}  // namespace

Vector step_semi_implicit(const ModelSpec& model, const SpaceGrid& grid, const Vector& layer_next,
                          double t_i, double t_next, double v_i, double v_next, double db,
                          double dt, const BoundaryValues& bc) {
    return one_step(model, grid, layer_next, t_i, t_next, v_i, v_next, db, dt, 1.0, bc);
}

Vector step_crank_nicolson(const ModelSpec& model, const SpaceGrid& grid, const Vector& layer_next,
                           double t_i, double t_next, double v_i, double v_next, double db,
                           double dt, const BoundaryValues& bc) {
    return one_step(model, grid, layer_next, t_i, t_next, v_i, v_next, db, dt, 0.5, bc);
}

BackwardSolver::BackwardSolver(const ModelSpec& model, const SpaceGrid& grid,
                               const TimeGrid& time_grid)
    : model_(&model), grid_(grid), time_grid_(time_grid) {}

const Vector& BackwardSolver::solve(const PathBundle& path, const Vector& payoff, Scheme scheme,
                                    const BoundaryValues& bc) {
    const auto n = time_grid_.n_steps;
    if (path.v.size() != static_cast<Index>(n + 1) || path.db.size() != static_cast<Index>(n))
        throw std::invalid_argument("solve_backward: path does not match the time grid");
    if (payoff.size() != grid_.m_points)
        throw std::invalid_argument("solve_backward: payoff size does not match the grid");

    const double theta = (scheme == Scheme::semi_implicit) ? 1.0 : 0.5;
    layer_ = payoff;
    // coefficients at the terminal level
    detail::eval_operator_coeffs(*model_, grid_, time_grid_.time_at(n), path.v[static_cast<Index>(n)],
                                 next_);
    Vector stepped;
    for (std::size_t i = n; i-- > 0;) {
        const double t_i = time_grid_.time_at(i);
        detail::eval_operator_coeffs(*model_, grid_, t_i, path.v[static_cast<Index>(i)], cur_);
        try {
            detail::theta_step(grid_, cur_, next_, layer_, path.db[static_cast<Index>(i)],
                               time_grid_.dt, theta, bc, work_, stepped);
        } catch (const solver_error& e) {
            throw solver_error("backward sweep step " + std::to_string(i) + ": " + e.what());
        }
        if (!stepped.allFinite()) throw path_error(i, "backward sweep produced non-finite values");
        layer_.swap(stepped);
        std::swap(cur_, next_);  // level i becomes the next step's right end point
    }
    return layer_;
}

Vector solve_backward(const ModelSpec& model, const SpaceGrid& grid, const TimeGrid& time_grid,
                      const PathBundle& path, const Vector& payoff, Scheme scheme,
                      const BoundaryValues& bc) {
    BackwardSolver solver(model, grid, time_grid);
    return solver.solve(path, payoff, scheme, bc);
}

double interpolate_at(const SpaceGrid& grid, const Vector& layer, double x) {
    if (layer.size() != grid.m_points)
        throw std::invalid_argument("interpolate_at: layer size does not match the grid");
    if (x < grid.x_min || x > grid.x_max)
        throw std::out_of_range("interpolate_at: x outside [x_min, x_max]");
    const double pos = (x - grid.x_min) / grid.dx;
    // exact node hits bypass the weight arithmetic
    const auto nearest = static_cast<Index>(std::floor(pos + 0.5));
    if (nearest >= 0 && nearest < grid.m_points && grid.node(nearest) == x) return layer[nearest];
    auto j = static_cast<Index>(std::floor(pos));
    if (j > grid.m_points - 2) j = grid.m_points - 2;
    if (j < 0) j = 0;
    const double w = (x - grid.node(j)) / grid.dx;
    return (1.0 - w) * layer[j] + w * layer[j + 1];
}

}  // namespace mcpde
