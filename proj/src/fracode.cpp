#include "fracocp/fracode.hpp"

#include "fracocp/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fracocp {

namespace {

void require_order(double alpha, const char* where)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument(std::string(where) + ": alpha must lie in (0,1], got " +
                                    std::to_string(alpha));
    }
}

void require_finite(std::span<const double> values, std::size_t node, double t,
                    const char* what)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw NumericalError(std::string(what) + " is not finite at node " +
                                 std::to_string(node) + " (t = " + std::to_string(t) +
                                 ", component " + std::to_string(i) + ")");
        }
    }
}

// Shared weight sequences, indexed by the lag m = k - j.
struct WeightTables {
    std::vector<double> predictor; // (m+1)^a - m^a
    std::vector<double> corrector; // (m+2)^(a+1) + m^(a+1) - 2 (m+1)^(a+1)

    WeightTables(double alpha, std::size_t count)
        : predictor(count)
        , corrector(count)
    {
        const double p = alpha + 1.0;
        for (std::size_t m = 0; m < count; ++m) {
            const double md = static_cast<double>(m);
            predictor[m] = std::pow(md + 1.0, alpha) - std::pow(md, alpha);
            corrector[m] = std::pow(md + 2.0, p) + std::pow(md, p) - 2.0 * std::pow(md + 1.0, p);
        }
    }
};

double corrector_first_weight(double alpha, double k)
{
    return std::pow(k, alpha + 1.0) - (k - alpha) * std::pow(k + 1.0, alpha);
}

// x(t_k) = base_k + (Volterra integral of f), base_k = x0 + offset(k).
using NodeOffset = std::function<void(std::size_t node, std::span<double> base)>;

Trajectory integrate_volterra(const VectorField& field, std::span<const double> x0,
                              const TimeGrid& grid, double alpha, int corrector_iterations,
                              const NodeOffset& offset)
{
    require_order(alpha, "integrate_caputo_ivp");
    const std::size_t dim = field.dimension();
    if (x0.size() != dim) {
        throw std::invalid_argument("integrate_caputo_ivp: initial value has dimension " +
                                    std::to_string(x0.size()) + ", field expects " +
                                    std::to_string(dim));
    }
    if (corrector_iterations < 1) {
        throw std::invalid_argument("integrate_caputo_ivp: corrector_iterations must be >= 1");
    }

    const std::size_t n = grid.n_steps();
    const double h_alpha = std::pow(grid.step(), alpha);
    const double predictor_scale = h_alpha / lanczos_gamma(alpha + 1.0);
    const double corrector_scale = h_alpha / lanczos_gamma(alpha + 2.0);
    const WeightTables weights(alpha, n);

    Trajectory x(n + 1, dim);
    Trajectory f(n + 1, dim);
    std::ranges::copy(x0, x.row(0).begin());
    field(grid.time(0), x.row(0), f.row(0));
    require_finite(f.row(0), 0, grid.time(0), "field value");

    std::vector<double> predictor_sum(dim);
    std::vector<double> corrector_sum(dim);
    std::vector<double> base(dim);
    std::vector<double> trial(dim);
    std::vector<double> f_trial(dim);

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t next = k + 1;
        const double t_next = grid.time(next);

        const double a0 = corrector_first_weight(alpha, static_cast<double>(k));
        for (std::size_t i = 0; i < dim; ++i) {
            predictor_sum[i] = 0.0;
            corrector_sum[i] = a0 * f(0, i);
        }
        for (std::size_t j = 0; j <= k; ++j) {
            const double b = weights.predictor[k - j];
            const auto fj = f.row(j);
            for (std::size_t i = 0; i < dim; ++i) {
                predictor_sum[i] += b * fj[i];
            }
        }
        for (std::size_t j = 1; j <= k; ++j) {
            const double a = weights.corrector[k - j];
            const auto fj = f.row(j);
            for (std::size_t i = 0; i < dim; ++i) {
                corrector_sum[i] += a * fj[i];
            }
        }

        std::ranges::copy(x0, base.begin());
        if (offset) {
            offset(next, base);
        }
        for (std::size_t i = 0; i < dim; ++i) {
            trial[i] = base[i] + predictor_scale * predictor_sum[i];
        }
        for (int it = 0; it < corrector_iterations; ++it) {
            field(t_next, trial, f_trial);
            require_finite(f_trial, next, t_next, "field value");
            for (std::size_t i = 0; i < dim; ++i) {
                trial[i] = base[i] + corrector_scale * (f_trial[i] + corrector_sum[i]);
            }
        }
        require_finite(trial, next, t_next, "solution");
        std::ranges::copy(trial, x.row(next).begin());
        field(t_next, x.row(next), f.row(next));
        require_finite(f.row(next), next, t_next, "field value");
    }
    return x;
}

} // namespace

TimeGrid::TimeGrid(double tf, std::size_t n_steps)
    : tf_(tf)
    , n_steps_(n_steps)
{
    if (!(tf > 0.0) || !std::isfinite(tf)) {
        throw std::invalid_argument("TimeGrid: tf must be positive and finite");
    }
    if (n_steps < 2) {
        throw std::invalid_argument("TimeGrid: n_steps must be at least 2");
    }
}

double TimeGrid::time(std::size_t node) const
{
    if (node >= n_steps_) {
        return tf_;
    }
    return static_cast<double>(node) * step();
}

std::size_t TimeGrid::node_of(double t) const
{
    const double position = std::round(t / step());
    if (!(position > 0.0)) {
        return 0;
    }
    return std::min(static_cast<std::size_t>(position), n_steps_);
}

AbmWeights abm_weights(double alpha, long long k)
{
    require_order(alpha, "abm_weights");
    if (k < 0) {
        throw std::invalid_argument("abm_weights: step index must be non-negative");
    }
    const auto steps = static_cast<std::size_t>(k);
    const WeightTables tables(alpha, steps + 1);

    AbmWeights row;
    row.alpha = alpha;
    row.predictor.resize(steps + 1);
    row.corrector.resize(steps + 2);
    for (std::size_t j = 0; j <= steps; ++j) {
        row.predictor[j] = tables.predictor[steps - j];
    }
    row.corrector[0] = corrector_first_weight(alpha, static_cast<double>(steps));
    for (std::size_t j = 1; j <= steps; ++j) {
        row.corrector[j] = tables.corrector[steps - j];
    }
    row.corrector[steps + 1] = 1.0;
    return row;
}

VectorField::VectorField(std::size_t dimension, Function function)
    : dimension_(dimension)
    , function_(std::move(function))
{
    if (dimension_ == 0) {
        throw std::invalid_argument("VectorField: dimension must be positive");
    }
    if (!function_) {
        throw std::invalid_argument("VectorField: empty function");
    }
}

Trajectory integrate_caputo_ivp(const VectorField& field, std::span<const double> x0,
                                const TimeGrid& grid, double alpha, int corrector_iterations)
{
    return integrate_volterra(field, x0, grid, alpha, corrector_iterations, {});
}

Trajectory integrate_adjoint_tvp(const VectorField& field, std::span<const double> lambda_tf,
                                 const TimeGrid& grid, double alpha, int corrector_iterations,
                                 bool rl_correction)
{
    const double tf = grid.tf();
    const VectorField reversed(field.dimension(),
                               [&field, tf](double s, std::span<const double> mu,
                                            std::span<double> out) {
                                   field(tf - s, mu, out);
                                   for (double& v : out) {
                                       v = -v;
                                   }
                               });

    NodeOffset offset;
    if (rl_correction && alpha < 1.0) {
        offset = [lambda_tf](std::size_t node, std::span<double> base) {
            if (node == 0) {
                return;
            }
            for (std::size_t i = 0; i < base.size(); ++i) {
                base[i] -= lambda_tf[i];
            }
        };
    }
    return integrate_volterra(reversed, lambda_tf, grid, alpha, corrector_iterations, offset)
        .reversed();
}

Trajectory l1_caputo_derivative(const Trajectory& samples, const TimeGrid& grid, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument(
            "l1_caputo_derivative: alpha must lie in (0,1); use a classical difference for alpha = 1");
    }
    if (samples.nodes() != grid.nodes()) {
        throw std::invalid_argument("l1_caputo_derivative: expected " +
                                    std::to_string(grid.nodes()) + " samples, got " +
                                    std::to_string(samples.nodes()));
    }
    const std::size_t n = grid.n_steps();
    const std::size_t dim = samples.dimension();
    const double beta = 1.0 - alpha;
    const double scale = std::pow(grid.step(), -alpha) / lanczos_gamma(2.0 - alpha);

    std::vector<double> c(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double md = static_cast<double>(m);
        c[m] = std::pow(md + 1.0, beta) - std::pow(md, beta);
    }

    Trajectory increments(n, dim);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < dim; ++i) {
            increments(j, i) = samples(j + 1, i) - samples(j, i);
        }
    }

    Trajectory out(n, dim);
    for (std::size_t k = 1; k <= n; ++k) {
        auto row = out.row(k - 1);
        for (std::size_t j = 0; j < k; ++j) {
            const double w = c[k - 1 - j];
            const auto dj = increments.row(j);
            for (std::size_t i = 0; i < dim; ++i) {
                row[i] += w * dj[i];
            }
        }
        for (double& v : row) {
            v *= scale;
        }
    }
    return out;
}

std::vector<double> l1_caputo_derivative(std::span<const double> samples, const TimeGrid& grid,
                                         double alpha)
{
    Trajectory column(samples.size(), 1);
    std::ranges::copy(samples, column.row(0).begin());
    return l1_caputo_derivative(column, grid, alpha).column(0);
}

double mittag_leffler(double alpha, double z)
{
    if (!(alpha > 0.0) || !std::isfinite(z)) {
        throw std::domain_error("mittag_leffler: need alpha > 0 and finite z");
    }
    if (z == 0.0) {
        return 1.0;
    }
    // The largest series term grows like exp(|z|^(1/alpha)); beyond these limits
    // the alternating sum loses all precision or the terms overflow.
    const double growth = std::pow(std::abs(z), 1.0 / alpha);
    if ((z < 0.0 && growth > 20.0) || growth > 700.0) {
        throw std::domain_error("mittag_leffler: |z| = " + std::to_string(std::abs(z)) +
                                " exceeds the series guard for alpha = " + std::to_string(alpha));
    }

    const long double log_abs_z = std::log(static_cast<long double>(std::abs(z)));
    long double sum = 1.0L;
    long double previous = 1.0L;
    for (int k = 1; k <= 10000; ++k) {
        const long double magnitude =
            std::exp(k * log_abs_z - std::lgamma(static_cast<long double>(alpha) * k + 1.0L));
        const long double term = (z < 0.0 && (k % 2 == 1)) ? -magnitude : magnitude;
        sum += term;
        if (magnitude <= previous && magnitude < 1e-16L * std::abs(sum)) {
            return static_cast<double>(sum);
        }
        previous = magnitude;
    }
    throw OracleError("mittag_leffler: series did not converge within 10000 terms");
}

} // namespace fracocp
