#include "fracocp/covid_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracocp {

namespace {

void require(bool ok, const char* field, const char* rule)
{
    if (!ok) {
        throw std::invalid_argument(std::string(field) + ": " + rule);
    }
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

} // namespace

void ModelParams::validate() const
{
    require(finite_nonneg(Lambda), "Lambda", "must be a non-negative rate");
    require(finite_nonneg(beta1), "beta1", "must be a non-negative rate");
    require(finite_nonneg(beta2), "beta2", "must be a non-negative rate");
    require(std::isfinite(mu) && mu > 0.0, "mu", "must be positive");
    require(finite_nonneg(rho), "rho", "must be a non-negative rate");
    require(finite_nonneg(gamma), "gamma", "must be a non-negative rate");
    require(finite_nonneg(tau), "tau", "must be a non-negative rate");
    require(finite_nonneg(d), "d", "must be a non-negative rate");
    require(p >= 0.0 && p <= 1.0, "p", "must lie in [0,1]");
    require(alpha > 0.0 && alpha <= 1.0, "alpha", "must lie in (0,1]");
}

void ObjectiveWeights::validate() const
{
    require(finite_nonneg(A1), "A1", "must be non-negative");
    require(finite_nonneg(A2), "A2", "must be non-negative");
    require(finite_nonneg(A3), "A3", "must be non-negative");
    require(finite_nonneg(A4), "A4", "must be non-negative");
    require(std::isfinite(r1) && r1 > 0.0, "r1", "must be positive");
    require(std::isfinite(r2) && r2 > 0.0, "r2", "must be positive");
}

ModelParams reference_params()
{
    ModelParams params;
    params.Lambda = 0.271;
    params.beta1 = 0.00035;
    params.beta2 = 0.0004;
    params.mu = 0.001;
    params.rho = 0.0058;
    params.gamma = 0.007;
    params.tau = 0.002;
    params.d = 0.00025;
    params.p = 0.3;
    params.alpha = 1.0;
    return params;
}

StateVector rhs_uncontrolled(const ModelParams& params, const State& x)
{
    const auto& [L, b1, b2, mu, rho, gamma, tau, d, p, alpha] = params;
    const double incidence = b1 * x.S * x.E + b2 * x.S * x.I;
    return {
        L - incidence - mu * x.S + tau * x.R,
        incidence - (mu + rho) * x.E,
        rho * x.E - (gamma + d + mu) * x.I,
        gamma * x.I - (mu + tau) * x.R,
    };
}

StateVector rhs_controlled(const ModelParams& params, const State& x, const Control& u)
{
    StateVector dx = rhs_uncontrolled(params, x);
    const double isolated = u.u2 * x.E;
    dx[0] -= u.u1 * x.S;
    dx[1] -= isolated;
    dx[2] += (1.0 - params.p) * isolated;
    dx[3] += u.u1 * x.S + params.p * isolated;
    return dx;
}

double total_population(const State& x) { return x.S + x.E + x.I + x.R; }

VectorField uncontrolled_field(const ModelParams& params)
{
    return VectorField(4, [params](double, std::span<const double> x, std::span<double> out) {
        const StateVector dx = rhs_uncontrolled(params, State::from(x));
        std::ranges::copy(dx, out.begin());
    });
}

VectorField controlled_field(const ModelParams& params, const TimeGrid& grid,
                             const Trajectory& controls)
{
    if (controls.nodes() != grid.nodes() || controls.dimension() != 2) {
        throw std::invalid_argument("controlled_field: controls must be nodes x 2");
    }
    return VectorField(4, [params, grid, &controls](double t, std::span<const double> x,
                                                   std::span<double> out) {
        const Control u = Control::from(controls.row(grid.node_of(t)));
        const StateVector dx = rhs_controlled(params, State::from(x), u);
        std::ranges::copy(dx, out.begin());
    });
}

double objective(const ObjectiveWeights& weights, const TimeGrid& grid, const Trajectory& states,
                 const Trajectory& controls)
{
    if (states.nodes() != grid.nodes() || controls.nodes() != grid.nodes()) {
        throw std::invalid_argument("objective: trajectories must have " +
                                    std::to_string(grid.nodes()) + " nodes");
    }
    if (states.dimension() != 4 || controls.dimension() != 2) {
        throw std::invalid_argument("objective: expected 4 state and 2 control columns");
    }
    const auto running = [&](std::size_t k) {
        const double u1 = controls(k, 0);
        const double u2 = controls(k, 1);
        return weights.A1 * states(k, 2) - weights.A2 * states(k, 3) +
               0.5 * (weights.r1 * u1 * u1 + weights.r2 * u2 * u2);
    };
    const std::size_t n = grid.n_steps();
    double integral = 0.5 * (running(0) + running(n));
    for (std::size_t k = 1; k < n; ++k) {
        integral += running(k);
    }
    integral *= grid.step();
    return weights.A3 * states(n, 0) + weights.A4 * states(n, 1) + integral;
}

} // namespace fracocp
