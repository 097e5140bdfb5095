#pragma once

#include "mcpde/brownian.hpp"
#include "mcpde/model.hpp"
#include "mcpde/types.hpp"

namespace mcpde {

// Uniform log-moneyness lattice x_j = x_min + j dx.
struct SpaceGrid {
    double x_min = 0.0;
    double x_max = 0.0;
    Index m_points = 0;
    double dx = 0.0;

    static SpaceGrid make(double x_min, double x_max, Index m_points);
    // The fixed experiment grid: x0 +- 4 V0 sqrt(T), 250 points.
    static SpaceGrid standard(double s0, double k_strike, double v0, double t_maturity,
                              Index m_points = 250);

    double node(Index j) const { return x_min + dx * static_cast<double>(j); }
};

// Dirichlet values pinned at x_min / x_max on every layer.
struct BoundaryValues {
    double left = 0.0;
    double right = 0.0;
};

// Undiscounted put payoff K (1 - e^x)_+ at every node.
Vector payoff_put(const SpaceGrid& grid, double k_strike);

// Tridiagonal system: lower/upper have one entry fewer than diag/rhs.
struct TridiagonalSystem {
    Vector lower;
    Vector diag;
    Vector upper;
    Vector rhs;
};

// Thomas algorithm. Throws solver_error on a vanishing pivot.
Vector thomas_solve(const TridiagonalSystem& sys);

namespace detail {

// Coefficient profiles of one time level, evaluated at (t, x_j, v) per node.
struct OperatorCoeffs {
    Vector sigma2;  // sigma^2
    Vector mu;
    Vector bcoef;   // rho sigma
    Vector ccoef;   // rho beta sigma_y
};

void eval_operator_coeffs(const ModelSpec& model, const SpaceGrid& grid, double t, double v,
                          OperatorCoeffs& out);

// Shared theta-weighted backward step (theta = 1: semi-implicit,
// theta = 1/2: Crank-Nicolson). The stochastic term always uses the
// right end point: coefficients `at_next` against the given dB.
void theta_step(const SpaceGrid& grid, const OperatorCoeffs& at_i, const OperatorCoeffs& at_next,
                const Vector& layer_next, double db, double dt, double theta,
                const BoundaryValues& bc, TridiagonalSystem& work, Vector& out);

}  // namespace detail

// The three discrete operator applications at one time level, forward
// first-order differences, coefficients at (t, x_j, v):
//   L[u]_j = 1/2 sigma^2 (u_{j+1} - 2u_j + u_{j-1})/dx^2 + mu (u_{j+1} - u_j)/dx
//   B[u]_j = rho sigma (u_{j+1} - u_j)/dx
//   C[u]_j = rho beta sigma_y (u_{j+1} - u_j)/dx
// Entries are filled on interior nodes 1..m-2; the end slots stay zero.
struct OperatorApplications {
    Vector l;
    Vector b;
    Vector c;
};
OperatorApplications apply_operators(const ModelSpec& model, const SpaceGrid& grid, double t,
                                     double v, const Vector& layer);

// One backward step of the semi-implicit scheme:
//   (I - dt (L_i - C_i)) u^i = u^{i+1} + B_{i+1}[u^{i+1}] dB_i
// with the stochastic term at the right end point (t_{i+1}, v_next).
Vector step_semi_implicit(const ModelSpec& model, const SpaceGrid& grid, const Vector& layer_next,
                          double t_i, double t_next, double v_i, double v_next, double db,
                          double dt, const BoundaryValues& bc);

// Crank-Nicolson step:
//   (I - dt/2 (L_i - C_i)) u^i =
//       u^{i+1} + dt/2 (L_{i+1} - C_{i+1})[u^{i+1}] + B_{i+1}[u^{i+1}] dB_i
Vector step_crank_nicolson(const ModelSpec& model, const SpaceGrid& grid, const Vector& layer_next,
                           double t_i, double t_next, double v_i, double v_next, double db,
                           double dt, const BoundaryValues& bc);

// Owns one path's backward sweep; reuses workspace across paths. Instances
// are single-threaded; use one per worker.
class BackwardSolver {
public:
    BackwardSolver(const ModelSpec& model, const SpaceGrid& grid, const TimeGrid& time_grid);

    // Runs the sweep from the terminal payoff down to i = 0 and returns the
    // initial layer. The same dB_i that drove the V path enters step i.
    const Vector& solve(const PathBundle& path, const Vector& payoff, Scheme scheme,
                        const BoundaryValues& bc);

private:
    const ModelSpec* model_;
    SpaceGrid grid_;
    TimeGrid time_grid_;

    detail::OperatorCoeffs cur_, next_;
    Vector layer_;
    TridiagonalSystem work_;
};

// Full sweep with a fresh solver; `path.v` must have time_grid.n_steps + 1
// entries and `path.db` n_steps entries.
Vector solve_backward(const ModelSpec& model, const SpaceGrid& grid, const TimeGrid& time_grid,
                      const PathBundle& path, const Vector& payoff, Scheme scheme,
                      const BoundaryValues& bc);

// Linear interpolation of a layer; exact at nodes. Throws std::out_of_range
// for x outside [x_min, x_max].
double interpolate_at(const SpaceGrid& grid, const Vector& layer, double x);

}  // namespace mcpde
