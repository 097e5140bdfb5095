#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mcpde/analytics.hpp"
#include "mcpde/model.hpp"
#include "mcpde/spde.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace mcpde;

namespace {

InverseGammaParams paper_params() {
    return InverseGammaParams{100.0, 100.0, 0.20, 0.5, 0.01, 5.0, 0.18, 0.90, -0.35};
}

ModelSpec constant_model(double mu_val, double sigma_val, double rho_val, double beta_val = 0.0,
                         double sigma_y_val = 0.0) {
    ModelSpec m;
    m.mu = [mu_val](double, double, double) { return mu_val; };
    m.sigma = [sigma_val](double, double, double) { return sigma_val; };
    m.sigma_y = [sigma_y_val](double, double, double) { return sigma_y_val; };
    m.alpha = [](double, double) { return 0.0; };
    m.beta = [beta_val](double, double) { return beta_val; };
    m.rho = [rho_val](double) { return rho_val; };
    m.rate = [](double) { return 0.0; };
    return m;
}

// Straightforward loop oracle for the three stencils, written directly off
// their definitions.
OperatorApplications slow_stencils(const ModelSpec& model, const SpaceGrid& grid, double t,
                                   double v, const Vector& u) {
    const Index m = grid.m_points;
    OperatorApplications ops{Vector::Zero(m), Vector::Zero(m), Vector::Zero(m)};
    for (Index j = 1; j + 1 < m; ++j) {
        const double x = grid.node(j);
        const double sig = model.sigma(t, x, v);
        const double mu = model.mu(t, x, v);
        const double rho = model.rho(t);
        const double beta = model.beta(t, v);
        const double sig_y = model.sigma_y(t, x, v);
        ops.l[j] = 0.5 * sig * sig * (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (grid.dx * grid.dx) +
                   mu * (u[j + 1] - u[j]) / grid.dx;
        ops.b[j] = rho * sig * (u[j + 1] - u[j]) / grid.dx;
        ops.c[j] = rho * beta * sig_y * (u[j + 1] - u[j]) / grid.dx;
    }
    return ops;
}

// Dense-matrix statement of one theta step, solved with Eigen's LU.
Vector dense_theta_step(const ModelSpec& model, const SpaceGrid& grid, const Vector& layer_next,
                        double t_i, double t_next, double v_i, double v_next, double db, double dt,
                        double theta, const BoundaryValues& bc) {
    const Index m = grid.m_points;
    const Index n = m - 2;
    auto assemble = [&](double t, double v) {
        Matrix op = Matrix::Zero(n, n);
        Vector into_left = Vector::Zero(n), into_right = Vector::Zero(n);
        for (Index j = 1; j <= n; ++j) {
            const double x = grid.node(j);
            const double sig = model.sigma(t, x, v);
            const double s = sig * sig / (grid.dx * grid.dx);
            const double mu = model.mu(t, x, v) / grid.dx;
            const double q = model.rho(t) * model.beta(t, v) * model.sigma_y(t, x, v) / grid.dx;
            const double a = 0.5 * s;
            const double b = -s - mu + q;
            const double c = 0.5 * s + mu - q;
            const Index k = j - 1;
            op(k, k) = b;
            if (k > 0) op(k, k - 1) = a; else into_left[k] = a;
            if (k < n - 1) op(k, k + 1) = c; else into_right[k] = c;
        }
        return std::make_tuple(op, into_left, into_right);
    };

    const auto [op_i, left_i, right_i] = assemble(t_i, v_i);
    const auto [op_next, left_next, right_next] = assemble(t_next, v_next);

    const Vector interior_next = layer_next.segment(1, n);
    Vector rhs = interior_next;
    // stochastic term, right end point
    for (Index j = 1; j <= n; ++j) {
        const double x = grid.node(j);
        const double bcoef = model.rho(t_next) * model.sigma(t_next, x, v_next);
        rhs[j - 1] += bcoef * (layer_next[j + 1] - layer_next[j]) / grid.dx * db;
    }
    // explicit part
    rhs += (1.0 - theta) * dt *
           (op_next * interior_next + left_next * layer_next[0] + right_next * layer_next[m - 1]);
    // implicit boundary contributions
    rhs += theta * dt * (left_i * bc.left + right_i * bc.right);

    const Matrix lhs = Matrix::Identity(n, n) - theta * dt * op_i;
    const Vector interior = lhs.fullPivLu().solve(rhs);
    Vector out(m);
    out[0] = bc.left;
    out.segment(1, n) = interior;
    out[m - 1] = bc.right;
    return out;
}

}  // namespace

TEST_CASE("space grid construction") {
    const SpaceGrid g = SpaceGrid::standard(100.0, 100.0, 0.2, 0.5);
    CHECK(g.m_points == 250);
    CHECK(g.x_min == doctest::Approx(-4.0 * 0.2 * std::sqrt(0.5)).epsilon(1e-15));
    CHECK(g.x_max == doctest::Approx(4.0 * 0.2 * std::sqrt(0.5)).epsilon(1e-15));
    for (Index j = 1; j < g.m_points; ++j) CHECK(g.node(j) > g.node(j - 1));
    CHECK_THROWS_AS(SpaceGrid::make(0.0, 1.0, 2), validation_error);
    CHECK_THROWS_AS(SpaceGrid::make(1.0, 0.0, 10), validation_error);
}

TEST_CASE("put payoff nodes") {
    const SpaceGrid g = SpaceGrid::make(-40.0, std::log(2.0), 101);
    const double k = 100.0;
    const Vector phi = payoff_put(g, k);
    CHECK(phi[0] == doctest::Approx(k).epsilon(1e-12));  // deep ITM limit
    CHECK(phi[g.m_points - 1] == 0.0);                   // x = ln 2 -> e^x = 2

    const SpaceGrid g2 = SpaceGrid::make(std::log(0.5), 1.0, 11);
    const Vector phi2 = payoff_put(g2, k);
    CHECK(phi2[0] == doctest::Approx(50.0).epsilon(1e-13));

    const SpaceGrid g3 = SpaceGrid::make(-1.0, 1.0, 21);  // x=0 is node 10
    CHECK(payoff_put(g3, k)[10] == 0.0);
}

TEST_CASE("operator applications match a slow reference evaluator") {
    const ModelSpec model = inverse_gamma_model(paper_params());
    const SpaceGrid grid = SpaceGrid::standard(100.0, 100.0, 0.2, 0.5, 40);

    SUBCASE("constant layer annihilates all three") {
        const Vector u = Vector::Constant(grid.m_points, 3.7);
        const auto ops = apply_operators(model, grid, 0.1, 0.22, u);
        CHECK(ops.l.cwiseAbs().maxCoeff() == 0.0);
        CHECK(ops.b.cwiseAbs().maxCoeff() == 0.0);
        CHECK(ops.c.cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("linear layer, sigma=0, mu=1 gives L=1") {
        const ModelSpec pure_drift = constant_model(1.0, 0.0, 0.0);
        Vector u(grid.m_points);
        for (Index j = 0; j < grid.m_points; ++j) u[j] = grid.node(j);
        const auto ops = apply_operators(pure_drift, grid, 0.0, 0.2, u);
        for (Index j = 1; j + 1 < grid.m_points; ++j)
            CHECK(ops.l[j] == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("random layer node-for-node") {
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> u01(-1.0, 1.0);
        Vector u(grid.m_points);
        for (Index j = 0; j < grid.m_points; ++j) u[j] = 40.0 * u01(gen);
        const auto fast = apply_operators(model, grid, 0.2, 0.23, u);
        const auto slow = slow_stencils(model, grid, 0.2, 0.23, u);
        const double scale = u.cwiseAbs().maxCoeff() / grid.dx / grid.dx;
        CHECK((fast.l - slow.l).cwiseAbs().maxCoeff() < 1e-14 * scale);
        CHECK((fast.b - slow.b).cwiseAbs().maxCoeff() < 1e-14 * scale);
        CHECK((fast.c - slow.c).cwiseAbs().maxCoeff() < 1e-14 * scale);
    }
}

TEST_CASE("degenerate steps are identities") {
    const ModelSpec nothing = constant_model(0.0, 0.0, 0.0);
    const SpaceGrid grid = SpaceGrid::make(-1.0, 1.0, 31);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Vector layer(grid.m_points);
    for (Index j = 0; j < grid.m_points; ++j) layer[j] = u01(gen);
    const BoundaryValues bc{layer[0], layer[grid.m_points - 1]};

    const Vector si =
        step_semi_implicit(nothing, grid, layer, 0.0, 0.01, 0.2, 0.2, 0.0, 0.01, bc);
    CHECK((si - layer).cwiseAbs().maxCoeff() == 0.0);
    const Vector cn =
        step_crank_nicolson(nothing, grid, layer, 0.0, 0.01, 0.2, 0.2, 0.0, 0.01, bc);
    CHECK((cn - layer).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constant plateau is stationary for any coefficients") {
    const ModelSpec model = inverse_gamma_model(paper_params());
    const SpaceGrid grid = SpaceGrid::standard(100.0, 100.0, 0.2, 0.5, 50);
    const double c = 11.25;
    const Vector layer = Vector::Constant(grid.m_points, c);
    const BoundaryValues bc{c, c};
    const Vector si = step_semi_implicit(model, grid, layer, 0.0, 0.002, 0.2, 0.21, 0.013, 0.002, bc);
    CHECK((si - layer).cwiseAbs().maxCoeff() < 1e-12 * c);
    const Vector cn =
        step_crank_nicolson(model, grid, layer, 0.0, 0.002, 0.2, 0.21, 0.013, 0.002, bc);
    CHECK((cn - layer).cwiseAbs().maxCoeff() < 1e-12 * c);
}

TEST_CASE("single step matches a dense linear-algebra oracle") {
    const SpaceGrid grid = SpaceGrid::make(-0.5, 0.5, 21);
    Vector layer(grid.m_points);
    for (Index j = 0; j < grid.m_points; ++j) layer[j] = grid.node(j) * grid.node(j);
    const BoundaryValues bc{layer[0], layer[grid.m_points - 1]};
    const double dt = 0.01;

    SUBCASE("quadratic layer, sigma=0.2, mu=0, rho=0") {
        const ModelSpec model = constant_model(0.0, 0.2, 0.0);
        const Vector mine = step_semi_implicit(model, grid, layer, 0.0, dt, 0.2, 0.2, 0.0, dt, bc);
        const Vector dense =
            dense_theta_step(model, grid, layer, 0.0, dt, 0.2, 0.2, 0.0, dt, 1.0, bc);
        CHECK((mine - dense).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("full coefficients, both schemes, nonzero dB") {
        const ModelSpec model = inverse_gamma_model(paper_params());
        const double db = 0.017;
        const Vector si = step_semi_implicit(model, grid, layer, 0.1, 0.1 + dt, 0.2, 0.23, db, dt, bc);
        const Vector si_dense =
            dense_theta_step(model, grid, layer, 0.1, 0.1 + dt, 0.2, 0.23, db, dt, 1.0, bc);
        CHECK((si - si_dense).cwiseAbs().maxCoeff() < 1e-12);

        const Vector cn =
            step_crank_nicolson(model, grid, layer, 0.1, 0.1 + dt, 0.2, 0.23, db, dt, bc);
        const Vector cn_dense =
            dense_theta_step(model, grid, layer, 0.1, 0.1 + dt, 0.2, 0.23, db, dt, 0.5, bc);
        CHECK((cn - cn_dense).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Crank-Nicolson local order via fine-step reference") {
    const ModelSpec model = constant_model(0.05, 0.25, 0.0);
    const SpaceGrid grid = SpaceGrid::make(-1.0, 1.0, 41);
    Vector layer(grid.m_points);
    for (Index j = 0; j < grid.m_points; ++j) layer[j] = std::exp(-8.0 * grid.node(j) * grid.node(j));
    const BoundaryValues bc{layer[0], layer[grid.m_points - 1]};

    auto compose = [&](double total_dt, int pieces, auto stepper) {
        Vector u = layer;
        const double h = total_dt / pieces;
        for (int i = 0; i < pieces; ++i) u = stepper(model, grid, u, 0.0, h, 0.2, 0.2, 0.0, h, bc);
        return u;
    };

    const double dt = 0.02;
    const Vector ref = compose(dt, 256, step_crank_nicolson);

    SUBCASE("single CN step decays at third order") {
        const double e1 = (compose(dt, 1, step_crank_nicolson) - ref).cwiseAbs().maxCoeff();
        const Vector ref_half = compose(dt / 2, 256, step_crank_nicolson);
        const double e2 =
            (compose(dt / 2, 1, step_crank_nicolson) - ref_half).cwiseAbs().maxCoeff();
        CHECK(e1 / e2 == doctest::Approx(8.0).epsilon(0.35));
    }

    SUBCASE("semi-implicit and CN agree to O(dt^2)") {
        const double d1 = (compose(dt, 1, step_semi_implicit) - compose(dt, 1, step_crank_nicolson))
                              .cwiseAbs()
                              .maxCoeff();
        const double d2 =
            (compose(dt / 2, 1, step_semi_implicit) - compose(dt / 2, 1, step_crank_nicolson))
                .cwiseAbs()
                .maxCoeff();
        CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.25));
    }
}

TEST_CASE("backward solve of a constant payoff returns the constant") {
    const ModelSpec model = inverse_gamma_model(paper_params());
    const auto p = paper_params();
    const SpaceGrid grid = SpaceGrid::standard(p.s0, p.k_strike, p.v0, p.t_maturity, 60);
    const TimeGrid tg = TimeGrid::make(0.5, p.t_maturity);

    PathBundle path;
    path.db = Vector::Constant(static_cast<Index>(tg.n_steps), 0.004);
    path.v = Vector::Constant(static_cast<Index>(tg.n_steps) + 1, p.v0);

    const double c = 4.5;
    const Vector payoff = Vector::Constant(grid.m_points, c);
    const Vector u0 = solve_backward(model, grid, tg, path, payoff, Scheme::crank_nicolson,
                                     BoundaryValues{c, c});
    CHECK((u0.array() - c).abs().maxCoeff() < 1e-12 * c);
}

TEST_CASE("deterministic-volatility solve matches Black-Scholes") {
    // lambda=0, rho=0, kappa=0: V frozen at v0, no stochastic term
    auto p = paper_params();
    p.lambda = 0.0;
    p.rho = 0.0;
    const double v0 = p.v0;
    ModelSpec model = constant_model(0.0, 0.0, 0.0);
    model.mu = [&p](double, double, double v) { return p.rate - 0.5 * v * v; };
    model.sigma = [](double, double, double v) { return v; };
    model.sigma_y = [](double, double, double) { return 1.0; };
    model.rate = [&p](double) { return p.rate; };

    const SpaceGrid grid = SpaceGrid::standard(p.s0, p.k_strike, v0, p.t_maturity, 250);
    const TimeGrid tg = TimeGrid::make(4.0, p.t_maturity);
    PathBundle path;
    path.db = Vector::Zero(static_cast<Index>(tg.n_steps));
    path.v = Vector::Constant(static_cast<Index>(tg.n_steps) + 1, v0);

    const Vector payoff = payoff_put(grid, p.k_strike);
    const Vector u0 = solve_backward(model, grid, tg, path, payoff, Scheme::crank_nicolson,
                                     BoundaryValues{p.k_strike, 0.0});

    const double price = p.discount() * interpolate_at(grid, u0, p.log_moneyness());
    const double iv = implied_vol_put(price, p.s0, p.k_strike, p.rate, p.t_maturity);
    CHECK(std::abs(iv - v0) < 5e-4);  // within 5 bp of the flat-vol answer

    // put value decreases with spot in this configuration
    for (Index j = 1; j < grid.m_points; ++j) CHECK(u0[j] <= u0[j - 1] + 1e-12);
}

TEST_CASE("solve_backward equals the manual composition of steps") {
    const auto p = paper_params();
    const ModelSpec model = inverse_gamma_model(p);
    const SpaceGrid grid = SpaceGrid::standard(p.s0, p.k_strike, p.v0, p.t_maturity, 60);
    const TimeGrid tg = TimeGrid::make(0.5, p.t_maturity);
    const auto inc = make_increments(21, 4, tg, 1);
    PathBundle path;
    path.db = inc[0];
    path.v = euler_vol_path(model, p.v0, path.db, tg);

    const Vector payoff = payoff_put(grid, p.k_strike);
    const BoundaryValues bc{p.k_strike, 0.0};

    for (Scheme scheme : {Scheme::semi_implicit, Scheme::crank_nicolson}) {
        Vector manual = payoff;
        for (std::size_t i = tg.n_steps; i-- > 0;) {
            const auto step = scheme == Scheme::semi_implicit ? step_semi_implicit
                                                              : step_crank_nicolson;
            manual = step(model, grid, manual, tg.time_at(i), tg.time_at(i + 1),
                          path.v[static_cast<Index>(i)], path.v[static_cast<Index>(i) + 1],
                          path.db[static_cast<Index>(i)], tg.dt, bc);
        }
        const Vector direct = solve_backward(model, grid, tg, path, payoff, scheme, bc);
        CHECK((direct - manual).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("boundary pinning holds at every time index") {
    const auto p = paper_params();
    const ModelSpec model = inverse_gamma_model(p);
    const SpaceGrid grid = SpaceGrid::standard(p.s0, p.k_strike, p.v0, p.t_maturity, 40);
    const TimeGrid tg = TimeGrid::make(0.5, p.t_maturity);
    const auto inc = make_increments(90, 2, tg, 1);
    PathBundle path;
    path.db = inc[0];
    path.v = euler_vol_path(model, p.v0, path.db, tg);
    const BoundaryValues bc{p.k_strike, 0.0};

    Vector layer = payoff_put(grid, p.k_strike);
    for (std::size_t i = tg.n_steps; i-- > 0;) {
        layer = step_crank_nicolson(model, grid, layer, tg.time_at(i), tg.time_at(i + 1),
                                    path.v[static_cast<Index>(i)],
                                    path.v[static_cast<Index>(i) + 1],
                                    path.db[static_cast<Index>(i)], tg.dt, bc);
        CHECK(layer[0] == p.k_strike);
        CHECK(layer[grid.m_points - 1] == 0.0);
    }
}

TEST_CASE("thomas solver") {
    SUBCASE("identity diagonal") {
        TridiagonalSystem sys;
        sys.diag = Vector::Ones(5);
        sys.lower = Vector::Zero(4);
        sys.upper = Vector::Zero(4);
        sys.rhs = Vector::LinSpaced(5, 1.0, 5.0);
        CHECK((thomas_solve(sys) - sys.rhs).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("3x3 against a hand-built solution") {
        // A = [2 1 0; 1 3 1; 0 1 2], x = (1, -2, 3) => b = (0, -2, 4)
        TridiagonalSystem sys;
        sys.diag.resize(3);
        sys.diag << 2, 3, 2;
        sys.lower.resize(2);
        sys.lower << 1, 1;
        sys.upper.resize(2);
        sys.upper << 1, 1;
        sys.rhs.resize(3);
        sys.rhs << 0, -2, 4;
        Vector expected(3);
        expected << 1, -2, 3;
        CHECK((thomas_solve(sys) - expected).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("250x250 random diagonally dominant vs dense solve") {
        std::mt19937_64 gen(17);
        std::uniform_real_distribution<double> u01(-1.0, 1.0);
        const Index n = 250;
        TridiagonalSystem sys;
        sys.diag.resize(n);
        sys.lower.resize(n - 1);
        sys.upper.resize(n - 1);
        sys.rhs.resize(n);
        Matrix dense = Matrix::Zero(n, n);
        for (Index i = 0; i < n; ++i) {
            const double off1 = u01(gen), off2 = u01(gen);
            sys.diag[i] = 3.0 + std::abs(u01(gen));
            dense(i, i) = sys.diag[i];
            if (i < n - 1) {
                sys.upper[i] = off1;
                dense(i, i + 1) = off1;
                sys.lower[i] = off2;
                dense(i + 1, i) = off2;
            }
            sys.rhs[i] = 10.0 * u01(gen);
        }
        const Vector mine = thomas_solve(sys);
        const Vector ref = dense.fullPivLu().solve(sys.rhs);
        CHECK((mine - ref).cwiseAbs().maxCoeff() < 1e-10);
        // residual bound
        const double resid = (dense * mine - sys.rhs).cwiseAbs().maxCoeff();
        CHECK(resid < 1e-10 * (1.0 + sys.rhs.cwiseAbs().maxCoeff()));
    }

    SUBCASE("zero pivot raises solver_error") {
        TridiagonalSystem sys;
        sys.diag = Vector::Zero(3);
        sys.lower = Vector::Zero(2);
        sys.upper = Vector::Zero(2);
        sys.rhs = Vector::Ones(3);
        CHECK_THROWS_AS(thomas_solve(sys), solver_error);
    }
}

TEST_CASE("layer interpolation") {
    const SpaceGrid grid = SpaceGrid::make(-1.0, 1.0, 21);
    Vector layer(grid.m_points);
    for (Index j = 0; j < grid.m_points; ++j) layer[j] = 2.5 * grid.node(j) - 0.75;

    for (Index j = 0; j < grid.m_points; ++j)
        CHECK(interpolate_at(grid, layer, grid.node(j)) == layer[j]);

    const double mid = 0.5 * (grid.node(3) + grid.node(4));
    CHECK(interpolate_at(grid, layer, mid) ==
          doctest::Approx(0.5 * (layer[3] + layer[4])).epsilon(1e-15));

    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double x = ux(gen);
        CHECK(std::abs(interpolate_at(grid, layer, x) - (2.5 * x - 0.75)) < 1e-12);
    }

    CHECK_THROWS_AS(interpolate_at(grid, layer, 1.0001), std::out_of_range);
    CHECK_THROWS_AS(interpolate_at(grid, layer, -1.0001), std::out_of_range);
}

TEST_CASE("non-finite sweep raises path_error with the step index") {
    ModelSpec model = constant_model(0.0, 1e200, 0.0);
    const SpaceGrid grid = SpaceGrid::make(-1.0, 1.0, 11);
    const TimeGrid tg = TimeGrid::with_steps(4, 0.5);
    PathBundle path;
    path.db = Vector::Zero(4);
    path.v = Vector::Constant(5, 0.2);
    const Vector payoff = Vector::Ones(grid.m_points);
    try {
        solve_backward(model, grid, tg, path, payoff, Scheme::crank_nicolson,
                       BoundaryValues{1.0, 1.0});
        FAIL("expected path_error");
    } catch (const path_error& e) {
        CHECK(e.step() == 3);  // first (topmost) backward step
    }
}
