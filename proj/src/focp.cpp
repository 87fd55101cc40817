#include "fracocp/focp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracocp {

void SweepConfig::validate() const
{
    if (max_iterations < 1) {
        throw std::invalid_argument("max_iterations: must be positive");
    }
    if (!(omega > 0.0 && omega <= 1.0)) {
        throw std::invalid_argument("omega: must lie in (0,1]");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw std::invalid_argument("delta: must be positive");
    }
    if (!std::isfinite(bounds.lower) || !std::isfinite(bounds.upper) ||
        bounds.lower > bounds.upper) {
        throw std::invalid_argument("u_min: must not exceed u_max");
    }
    if (corrector_iterations < 1) {
        throw std::invalid_argument("corrector_iterations: must be positive");
    }
}

StateVector rhs_adjoint(const ModelParams& params, const ObjectiveWeights& weights, const State& x,
                        const Control& u, const Adjoint& lam, AdjointMode mode)
{
    const auto& [L, b1, b2, mu, rho, gamma, tau, d, p, alpha] = params;
    const auto& [l1, l2, l3, l4] = lam;

    StateVector rate = {
        -l1 * b1 * x.E - l1 * b2 * x.I - l1 * mu + l2 * b1 * x.E + l2 * b2 * x.I,
        -l1 * b1 * x.S + l2 * b1 * x.S - l2 * mu - l2 * rho + l3 * rho,
        weights.A1 - b2 * l1 * x.S + b2 * l2 * x.S - (gamma + d + mu) * l3 + gamma * l4,
        tau * l1 - l4 * (tau + mu) - weights.A2,
    };
    if (mode == AdjointMode::full_hamiltonian) {
        rate[0] += -l1 * u.u1 + l4 * u.u1;
        rate[1] += -l2 * u.u2 + l3 * (1.0 - p) * u.u2 + l4 * p * u.u2;
    }
    return rate;
}

StateVector transversality(const ObjectiveWeights& weights)
{
    return {weights.A3, weights.A4, 0.0, 0.0};
}

Control stationary_controls(const ModelParams& params, const ObjectiveWeights& weights,
                            const State& x, const Adjoint& lam, const ControlBounds& bounds)
{
    const double p = params.p;
    const double raw1 = (lam.lambda1 - lam.lambda4) * x.S / weights.r1;
    const double raw2 =
        (lam.lambda2 - (1.0 - p) * lam.lambda3 - p * lam.lambda4) * x.E / weights.r2;
    return {std::clamp(raw1, bounds.lower, bounds.upper),
            std::clamp(raw2, bounds.lower, bounds.upper)};
}

std::array<double, 2> control_gradient(const ModelParams& params, const ObjectiveWeights& weights,
                                       const State& x, const Control& u, const Adjoint& lam)
{
    const double p = params.p;
    return {
        weights.r1 * u.u1 - (lam.lambda1 - lam.lambda4) * x.S,
        weights.r2 * u.u2 - (lam.lambda2 - (1.0 - p) * lam.lambda3 - p * lam.lambda4) * x.E,
    };
}

Trajectory solve_adjoint(const ModelParams& params, const ObjectiveWeights& weights,
                         const TimeGrid& grid, const Trajectory& states,
                         const Trajectory& controls, const SweepConfig& config)
{
    // integrate_adjoint_tvp takes the forward-time rate, which is -dH/dX.
    const VectorField field(4, [&](double t, std::span<const double> lam, std::span<double> out) {
        const std::size_t node = grid.node_of(t);
        const StateVector rate =
            rhs_adjoint(params, weights, State::from(states.row(node)),
                        Control::from(controls.row(node)), Adjoint::from(lam),
                        config.adjoint_mode);
        for (std::size_t i = 0; i < 4; ++i) {
            out[i] = -rate[i];
        }
    });
    const StateVector terminal = transversality(weights);
    return integrate_adjoint_tvp(field, terminal, grid, params.alpha,
                                 config.corrector_iterations, config.adjoint_rl_correction);
}

namespace {

Trajectory solve_states(const ModelParams& params, const State& x0, const TimeGrid& grid,
                        const Trajectory& controls, const SweepConfig& config)
{
    const StateVector initial = x0.as_array();
    return integrate_caputo_ivp(controlled_field(params, grid, controls), initial, grid,
                                params.alpha, config.corrector_iterations);
}

} // namespace

SweepSolution fbsm_solve(const ModelParams& params, const ObjectiveWeights& weights,
                         const State& x0, const TimeGrid& grid, const SweepConfig& config)
{
    params.validate();
    weights.validate();
    config.validate();
    for (double v : x0.as_array()) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("initial state must be finite and non-negative");
        }
    }

    const double omega = config.omega;
    SweepSolution solution;
    Trajectory controls(grid.nodes(), 2, 0.0);
    Trajectory updated(grid.nodes(), 2);
    Trajectory stationary(grid.nodes(), 2, 0.0);

    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        Trajectory states;
        Trajectory adjoints;
        try {
            states = solve_states(params, x0, grid, controls, config);
            adjoints = solve_adjoint(params, weights, grid, states, controls, config);
        } catch (const NumericalError& e) {
            throw NumericalError("fbsm_solve iteration " + std::to_string(iteration) + ": " +
                                 e.what());
        }
        solution.objective_history.push_back(objective(weights, grid, states, controls));

        double change = 0.0;
        double magnitude = 0.0;
        for (std::size_t k = 0; k < grid.nodes(); ++k) {
            const Control target = stationary_controls(params, weights, State::from(states.row(k)),
                                                       Adjoint::from(adjoints.row(k)),
                                                       config.bounds);
            stationary(k, 0) = target.u1;
            stationary(k, 1) = target.u2;
            const double next[2] = {(1.0 - omega) * controls(k, 0) + omega * target.u1,
                                    (1.0 - omega) * controls(k, 1) + omega * target.u2};
            for (std::size_t i = 0; i < 2; ++i) {
                const double clamped = std::clamp(next[i], config.bounds.lower, config.bounds.upper);
                change = std::max(change, std::abs(clamped - controls(k, i)));
                magnitude = std::max(magnitude, std::abs(clamped));
                updated(k, i) = clamped;
            }
        }
        std::swap(controls, updated);
        solution.iterations_used = iteration;
        if (change <= config.delta * (magnitude + 1e-12)) {
            solution.converged = true;
            break;
        }
    }

    // The relaxed iterate only approaches an active bound geometrically; the
    // returned controls are the projected stationary controls of the last sweep.
    try {
        solution.states = solve_states(params, x0, grid, stationary, config);
        solution.adjoints =
            solve_adjoint(params, weights, grid, solution.states, stationary, config);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("fbsm_solve final pass: ") + e.what());
    }
    solution.controls = std::move(stationary);
    solution.objective = objective(weights, grid, solution.states, solution.controls);
    solution.stationarity_residual =
        stationarity_residual(solution, params, weights, config.bounds);
    return solution;
}

double stationarity_residual(const SweepSolution& solution, const ModelParams& params,
                             const ObjectiveWeights& weights, const ControlBounds& bounds)
{
    const std::size_t nodes = solution.controls.nodes();
    if (solution.states.nodes() != nodes || solution.adjoints.nodes() != nodes) {
        throw std::invalid_argument("stationarity_residual: trajectories are not aligned");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
        const Control u = Control::from(solution.controls.row(k));
        const auto gradient =
            control_gradient(params, weights, State::from(solution.states.row(k)), u,
                             Adjoint::from(solution.adjoints.row(k)));
        const double values[2] = {u.u1, u.u2};
        for (std::size_t i = 0; i < 2; ++i) {
            double violation = std::abs(gradient[i]);
            if (values[i] <= bounds.lower && values[i] >= bounds.upper) {
                violation = 0.0; // degenerate box, nothing to move
            } else if (values[i] <= bounds.lower) {
                violation = std::max(0.0, -gradient[i]);
            } else if (values[i] >= bounds.upper) {
                violation = std::max(0.0, gradient[i]);
            }
            worst = std::max(worst, violation);
        }
    }
    return worst;
}

} // namespace fracocp
