#pragma once

#include "fracocp/fracode.hpp"
#include "fracocp/trajectory.hpp"

#include <array>

namespace fracocp {

/// Epidemiological constants of the SEIR model with relapse, plus the order alpha.
struct ModelParams {
    double Lambda = 0.0; // recruitment, persons/day
    double beta1 = 0.0;  // exposed-driven incidence
    double beta2 = 0.0;  // infectious-driven incidence
    double mu = 0.0;     // natural death rate
    double rho = 0.0;    // E -> I
    double gamma = 0.0;  // recovery
    double tau = 0.0;    // relapse R -> S
    double d = 0.0;      // disease-induced death
    double p = 0.0;      // share of quarantined exposed that recover directly
    double alpha = 1.0;

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const;
};

/// Parameter set of the bundled scenario (alpha = 1).
ModelParams reference_params();

using StateVector = std::array<double, 4>;

struct State {
    double S = 0.0;
    double E = 0.0;
    double I = 0.0;
    double R = 0.0;

    StateVector as_array() const { return {S, E, I, R}; }
    static State from(std::span<const double> x) { return {x[0], x[1], x[2], x[3]}; }
};

struct Control {
    double u1 = 0.0; // media campaigns, applied to S
    double u2 = 0.0; // quarantine, applied to E

    static Control from(std::span<const double> u) { return {u[0], u[1]}; }
};

struct ObjectiveWeights {
    double A1 = 1.0; // running cost on I
    double A2 = 1.0; // running reward on R
    double A3 = 1.0; // terminal cost on S
    double A4 = 1.0; // terminal cost on E
    double r1 = 10.0;
    double r2 = 10.0;

    void validate() const;
};

StateVector rhs_uncontrolled(const ModelParams& params, const State& x);
StateVector rhs_controlled(const ModelParams& params, const State& x, const Control& u);

double total_population(const State& x);

/// Controlled forward system as a VectorField. Controls are piecewise constant
/// on nodes (nearest node to t); the field keeps a reference to `controls`.
VectorField controlled_field(const ModelParams& params, const TimeGrid& grid,
                             const Trajectory& controls);
VectorField uncontrolled_field(const ModelParams& params);

/// A3 S(tf) + A4 E(tf) + trapezoid integral of A1 I - A2 R + (r1 u1^2 + r2 u2^2) / 2.
/// `states` is nodes x 4 and `controls` nodes x 2.
double objective(const ObjectiveWeights& weights, const TimeGrid& grid, const Trajectory& states,
                 const Trajectory& controls);

} // namespace fracocp
