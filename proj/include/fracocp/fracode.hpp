#pragma once

#include "fracocp/errors.hpp"
#include "fracocp/trajectory.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracocp {

/// Uniform grid on [0, tf] with n_steps intervals.
class TimeGrid {
public:
    /// Throws std::invalid_argument unless tf > 0 and n_steps >= 2.
    TimeGrid(double tf, std::size_t n_steps);

    double tf() const { return tf_; }
    std::size_t n_steps() const { return n_steps_; }
    std::size_t nodes() const { return n_steps_ + 1; }
    double step() const { return tf_ / static_cast<double>(n_steps_); }

    /// t_j = j * h; the last node is tf exactly.
    double time(std::size_t node) const;

    /// Nearest node index for a time on (or next to) the grid, clamped to [0, n_steps].
    std::size_t node_of(double t) const;

private:
    double tf_;
    std::size_t n_steps_;
};

/// One row of Adams-Bashforth-Moulton convolution weights for the step k -> k+1.
struct AbmWeights {
    double alpha = 1.0;
    std::vector<double> predictor; // b[j, k+1], j = 0..k
    std::vector<double> corrector; // a[j, k+1], j = 0..k+1
};

/// Predictor and corrector weight rows for fractional order alpha in (0, 1].
AbmWeights abm_weights(double alpha, long long k);

/// A right-hand side f(t, x) of fixed dimension. Evaluation writes into `dxdt`.
class VectorField {
public:
    using Function =
        std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;

    VectorField(std::size_t dimension, Function function);

    std::size_t dimension() const { return dimension_; }
    void operator()(double t, std::span<const double> x, std::span<double> dxdt) const
    {
        function_(t, x, dxdt);
    }

private:
    std::size_t dimension_;
    Function function_;
};

/// Solves the Caputo problem D^alpha x = f(t, x), x(0) = x0 with the
/// fractional Adams-Bashforth-Moulton predictor-corrector (Diethelm-Ford-Freed)
/// using the full memory convolution. The corrector is applied
/// `corrector_iterations` times per step.
///
/// Row 0 of the result is x0 exactly. Throws NumericalError naming the node if the
/// field produces a non-finite value, std::invalid_argument on bad arguments.
Trajectory integrate_caputo_ivp(const VectorField& field, std::span<const double> x0,
                                const TimeGrid& grid, double alpha,
                                int corrector_iterations = 1);

/// Terminal-value problem for a costate, solved by time reversal.
///
/// `field` is the forward-time rate: for alpha = 1 the result satisfies
/// dlambda/dt = field(t, lambda), lambda(tf) = lambda_tf. With s = tf - t the
/// reversed unknown mu(s) = lambda(tf - s) solves the left-sided Caputo problem
/// D^alpha mu = -field(tf - s, mu), mu(0) = lambda_tf, which is integrated with
/// integrate_caputo_ivp and flipped back. The last row equals lambda_tf exactly.
///
/// With `rl_correction` the reversed problem also carries the
/// Riemann-Liouville/Caputo discrepancy -lambda_tf * s^-alpha / Gamma(1 - alpha).
/// Its fractional integral is the constant -lambda_tf, which is added in closed
/// form at every node with s > 0.
Trajectory integrate_adjoint_tvp(const VectorField& field, std::span<const double> lambda_tf,
                                 const TimeGrid& grid, double alpha,
                                 int corrector_iterations = 1, bool rl_correction = false);

/// L1 approximation of the left-sided Caputo derivative of sampled data.
/// Row k-1 of the result is the derivative at node k (k = 1..n_steps).
/// Requires 0 < alpha < 1 and samples.nodes() == grid.nodes().
Trajectory l1_caputo_derivative(const Trajectory& samples, const TimeGrid& grid, double alpha);

/// Scalar convenience overload.
std::vector<double> l1_caputo_derivative(std::span<const double> samples, const TimeGrid& grid,
                                         double alpha);

/// Mittag-Leffler function E_alpha(z) by power-series summation.
/// Throws std::domain_error when |z| is past the cancellation guard and
/// OracleError if the series does not settle within 10000 terms.
double mittag_leffler(double alpha, double z);

} // namespace fracocp
