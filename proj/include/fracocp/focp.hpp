#pragma once

#include "fracocp/covid_model.hpp"
#include "fracocp/fracode.hpp"
#include "fracocp/trajectory.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace fracocp {

struct Adjoint {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    double lambda4 = 0.0;

    static Adjoint from(std::span<const double> l) { return {l[0], l[1], l[2], l[3]}; }
};

enum class AdjointMode {
    full_hamiltonian, ///< dH/dX of the controlled system
    paper_printed,    ///< the published costate system, without control terms
};

struct ControlBounds {
    double lower = 0.0;
    double upper = 1.0;
};

struct SweepConfig {
    int max_iterations = 200;
    double omega = 0.5;  ///< relaxation of the control update
    double delta = 1e-3; ///< relative sup-norm tolerance on successive controls
    ControlBounds bounds;
    AdjointMode adjoint_mode = AdjointMode::full_hamiltonian;
    bool adjoint_rl_correction = false;
    int corrector_iterations = 1;

    void validate() const;
};

struct SweepSolution {
    Trajectory states;   ///< nodes x 4
    Trajectory adjoints; ///< nodes x 4
    Trajectory controls; ///< nodes x 2
    std::vector<double> objective_history;
    bool converged = false;
    int iterations_used = 0;
    double stationarity_residual = 0.0;
    double objective = 0.0; ///< J of the returned controls and states
};

/// Right-sided costate rate dH/dX = dphi/dX + lambda^T df/dX.
StateVector rhs_adjoint(const ModelParams& params, const ObjectiveWeights& weights, const State& x,
                        const Control& u, const Adjoint& lam, AdjointMode mode);

/// Terminal costate dtheta/dX = (A3, A4, 0, 0).
StateVector transversality(const ObjectiveWeights& weights);

/// Minimiser of the Hamiltonian over the control box.
Control stationary_controls(const ModelParams& params, const ObjectiveWeights& weights,
                            const State& x, const Adjoint& lam, const ControlBounds& bounds);

/// dH/du at one node.
std::array<double, 2> control_gradient(const ModelParams& params, const ObjectiveWeights& weights,
                                       const State& x, const Control& u, const Adjoint& lam);

/// Solves the costate equations backward along fixed states and controls.
Trajectory solve_adjoint(const ModelParams& params, const ObjectiveWeights& weights,
                         const TimeGrid& grid, const Trajectory& states,
                         const Trajectory& controls, const SweepConfig& config);

/// Forward-backward sweep with relaxed control updates, starting from u = 0.
/// Non-convergence is reported through `converged`; non-finite states throw
/// NumericalError with the iteration and node.
SweepSolution fbsm_solve(const ModelParams& params, const ObjectiveWeights& weights,
                         const State& x0, const TimeGrid& grid, const SweepConfig& config);

/// Largest |dH/du| over nodes where the control is strictly inside the box;
/// controls sitting on a bound only count the part of the gradient that
/// points back into the box.
double stationarity_residual(const SweepSolution& solution, const ModelParams& params,
                             const ObjectiveWeights& weights, const ControlBounds& bounds);

} // namespace fracocp
