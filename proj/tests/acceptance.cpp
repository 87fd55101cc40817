// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "fracocp/covid_model.hpp"
#include "fracocp/csv.hpp"
#include "fracocp/focp.hpp"
#include "fracocp/fracode.hpp"
#include "fracocp/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace fracocp;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<double> kOrders = {0.75, 0.85, 0.95, 1.0};
const State kInitial{220, 100, 3, 0};

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail)
{
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << detail << '\n';
    failures += ok ? 0 : 1;
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

ModelParams params_for(double alpha)
{
    ModelParams params = reference_params();
    params.alpha = alpha;
    return params;
}

Trajectory free_run(double alpha, const TimeGrid& grid)
{
    const ModelParams params = params_for(alpha);
    return integrate_caputo_ivp(uncontrolled_field(params), kInitial.as_array(), grid, alpha);
}

// reference solution sampled at every grid node, `sub` RK4 steps per interval
Trajectory rk4_reference(const ModelParams& params, const TimeGrid& grid, int sub)
{
    Trajectory out(grid.nodes(), 4);
    StateVector x = kInitial.as_array();
    std::ranges::copy(x, out.row(0).begin());
    const double h = (grid.time(1) - grid.time(0)) / sub;
    const auto f = [&](const StateVector& v) { return rhs_uncontrolled(params, State::from(v)); };
    const auto axpy = [](const StateVector& a, double s, const StateVector& b) {
        StateVector r;
        for (std::size_t i = 0; i < 4; ++i) r[i] = a[i] + s * b[i];
        return r;
    };
    for (std::size_t k = 1; k < grid.nodes(); ++k) {
        for (int s = 0; s < sub; ++s) {
            const StateVector k1 = f(x);
            const StateVector k2 = f(axpy(x, 0.5 * h, k1));
            const StateVector k3 = f(axpy(x, 0.5 * h, k2));
            const StateVector k4 = f(axpy(x, h, k3));
            for (std::size_t i = 0; i < 4; ++i) {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        std::ranges::copy(x, out.row(k).begin());
    }
    return out;
}

void integrator_oracle()
{
    const VectorField decay(1, [](double, std::span<const double> x, std::span<double> out) {
        out[0] = -x[0];
    });
    const TimeGrid grid(1.0, 2000);
    const std::array<double, 1> x0 = {1.0};
    bool ok = true;
    std::ostringstream detail;
    for (double alpha : {0.5, 0.75, 1.0}) {
        const auto start = Clock::now();
        const Trajectory x = integrate_caputo_ivp(decay, x0, grid, alpha);
        const double elapsed = seconds_since(start);
        const double exact = alpha == 1.0 ? std::exp(-1.0) : mittag_leffler(alpha, -1.0);
        const double error = std::abs(x(2000, 0) - exact);
        const double tol = alpha == 1.0 ? 1e-5 : 1e-3;
        ok = ok && error <= tol && elapsed < 1.0;
        detail << "alpha=" << alpha << " err=" << error << " (" << elapsed << " s) ";
    }
    verdict(1, "integrator oracle", ok, detail.str());
}

void weight_identities()
{
    constexpr long long kMax = 10000;
    double worst = 0.0;
    bool ok = true;
    for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
        // row k holds the lag weights b_{k-j}; the kMax row contains every shorter row
        const AbmWeights w = abm_weights(alpha, kMax);
        long double prefix = 0.0L;
        for (long long m = 0; m <= kMax; ++m) {
            prefix += w.predictor[static_cast<std::size_t>(kMax - m)];
            const long double expected = std::pow(static_cast<long double>(m + 1), alpha);
            worst = std::max(worst, static_cast<double>(std::abs(prefix - expected) / expected));
        }
        for (long long k : {0LL, 1LL, 7LL, 123LL, 4567LL}) {
            const AbmWeights row = abm_weights(alpha, k);
            long double sum = 0.0L;
            for (double b : row.predictor) sum += b;
            const long double expected = std::pow(static_cast<long double>(k + 1), alpha);
            worst = std::max(worst, static_cast<double>(std::abs(sum - expected) / expected));
        }
    }
    ok = worst <= 1e-12;

    bool trapezoid = true;
    for (long long k : {0LL, 1LL, 5LL, 1000LL}) {
        const AbmWeights row = abm_weights(1.0, k);
        for (std::size_t j = 0; j < row.corrector.size(); ++j) {
            const double expected = (j == 0 || j + 1 == row.corrector.size()) ? 1.0 : 2.0;
            trapezoid = trapezoid && row.corrector[j] == expected;
        }
    }
    std::ostringstream detail;
    detail << "max relative telescoping error " << worst << ", alpha=1 corrector "
           << (trapezoid ? "is" : "is not") << " the trapezoid row (scale h/2)";
    verdict(2, "weight identities", ok && trapezoid, detail.str());
}

void classical_cross_check()
{
    const TimeGrid grid(100.0, 1000);
    const auto start = Clock::now();
    const Trajectory x = free_run(1.0, grid);
    const double elapsed = seconds_since(start);
    const Trajectory ref = rk4_reference(params_for(1.0), grid, 20);
    const double scale = *std::ranges::max_element(ref.data(), {}, [](double v) { return std::abs(v); });
    const double error = max_abs_difference(x, ref) / std::abs(scale);
    std::ostringstream detail;
    detail << "relative sup-norm " << error << ", " << elapsed << " s";
    verdict(3, "classical cross-check", error <= 1e-4 && elapsed < 5.0, detail.str());
}

void population_bound()
{
    const TimeGrid grid(100.0, 1000);
    const ModelParams params = reference_params();
    const double bound = std::max(323.0, params.Lambda / params.mu) + 1e-6;
    double lowest = 0.0;
    double largest = 0.0;
    for (double alpha : kOrders) {
        const Trajectory x = free_run(alpha, grid);
        for (std::size_t k = 0; k < x.nodes(); ++k) {
            lowest = std::min(lowest, *std::ranges::min_element(x.row(k)));
            largest = std::max(largest, total_population(State::from(x.row(k))));
        }
    }
    std::ostringstream detail;
    detail << "max N = " << largest << " (bound " << bound << "), min compartment " << lowest;
    verdict(4, "population bound", largest <= bound && lowest >= -1e-9, detail.str());
}

void residual_consistency()
{
    const double alpha = 0.75;
    const ModelParams params = params_for(alpha);
    std::vector<double> residuals;
    std::vector<double> away; // t >= 1, reported only
    for (std::size_t n : {250, 500, 1000, 2000}) {
        const TimeGrid grid(100.0, n);
        const Trajectory x = free_run(alpha, grid);
        const Trajectory d = l1_caputo_derivative(x, grid, alpha);
        double worst = 0.0;
        double worst_away = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            const StateVector rate = rhs_uncontrolled(params, State::from(x.row(k)));
            for (std::size_t i = 0; i < 4; ++i) {
                const double r = std::abs(d(k - 1, i) - rate[i]);
                worst = std::max(worst, r);
                if (grid.time(k) >= 1.0) worst_away = std::max(worst_away, r);
            }
        }
        residuals.push_back(worst);
        away.push_back(worst_away);
    }
    bool decreasing = true;
    std::ostringstream detail;
    detail << "sup residual over n = 250..2000:";
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        detail << ' ' << residuals[i];
        decreasing = decreasing && (i == 0 || residuals[i] < residuals[i - 1]);
    }
    detail << " (t >= 1 only:";
    for (double r : away) detail << ' ' << r;
    detail << ')';
    verdict(5, "residual consistency", decreasing, detail.str());
}

void optimality_suite(const ScenarioConfig& config)
{
    const TimeGrid grid = config.grid.grid();
    const auto start = Clock::now();
    bool ok = true;
    std::ostringstream detail;
    for (double alpha : config.alphas) {
        ModelParams params = config.model;
        params.alpha = alpha;
        const SweepSolution s = fbsm_solve(params, config.weights, config.initial_state, grid, config.sweep);

        const auto last = s.adjoints.row(s.adjoints.nodes() - 1);
        const StateVector terminal = transversality(config.weights);
        const bool transversal = std::ranges::equal(last, terminal);
        const bool boxed = std::ranges::all_of(s.controls.data(), [](double u) {
            return u >= 0.0 && u <= 1.0;
        });
        const double residual = stationarity_residual(s, params, config.weights, config.sweep.bounds);

        const Trajectory free = integrate_caputo_ivp(uncontrolled_field(params),
                                                     config.initial_state.as_array(), grid, alpha);
        const double j_zero = objective(config.weights, grid, free, Trajectory(grid.nodes(), 2, 0.0));

        const bool item = s.converged && s.iterations_used <= 200 && transversal && boxed &&
                          residual <= 1e-6 && s.objective <= j_zero;
        ok = ok && item;
        detail << "alpha=" << alpha << " it=" << s.iterations_used << " res=" << residual
               << " J=" << s.objective << " J0=" << j_zero
               << (transversal ? "" : " transversality-mismatch") << (boxed ? "" : " out-of-box")
               << "; ";
    }
    const double elapsed = seconds_since(start);
    ok = ok && elapsed < 120.0;
    detail << elapsed << " s";
    verdict(6, "optimality suite", ok, detail.str());
}

void figure_shape(ScenarioConfig config)
{
    config.output_dir = fs::path(FRACOCP_TEST_TMP) / "acceptance";
    fs::remove_all(config.output_dir);
    RunOptions options;
    options.svg = true;
    const ScenarioReport report = run_scenario(config, options);

    bool ok = true;
    std::ostringstream detail;
    const char* names = "SEIR";
    for (double alpha : config.alphas) {
        const Trajectory& with = report.find(alpha, Variant::controlled).states;
        const Trajectory& without = report.find(alpha, Variant::uncontrolled).states;
        const std::size_t k = with.nodes() - 1;
        std::string broken;
        for (std::size_t i = 0; i < 4; ++i) {
            const bool holds = i < 3 ? with(k, i) < without(k, i) : with(k, i) > without(k, i);
            if (!holds) {
                std::ostringstream what;
                what << ' ' << names[i] << "(tf) " << with(k, i) << " vs " << without(k, i);
                broken += what.str();
            }
        }
        ok = ok && broken.empty();
        detail << "alpha=" << alpha << (broken.empty() ? " ok" : broken) << "; ";
    }
    std::size_t figures = 0;
    for (char c : std::string(names)) {
        const fs::path fig = config.output_dir / (std::string("fig_") + c + ".svg");
        figures += fs::exists(fig) && fs::file_size(fig) > 0;
    }
    ok = ok && figures == 4;
    detail << figures << "/4 figures written";
    verdict(7, "figure shape", ok, detail.str());
}

void degeneracy(const ScenarioConfig& config)
{
    const TimeGrid grid = config.grid.grid();
    ObjectiveWeights weights = config.weights;
    weights.A1 = weights.A2 = weights.A3 = weights.A4 = 0.0;
    double worst_state = 0.0;
    double worst_control = 0.0;
    for (double alpha : config.alphas) {
        ModelParams params = config.model;
        params.alpha = alpha;
        const SweepSolution s = fbsm_solve(params, weights, config.initial_state, grid, config.sweep);
        const Trajectory free = integrate_caputo_ivp(uncontrolled_field(params),
                                                     config.initial_state.as_array(), grid, alpha);
        worst_state = std::max(worst_state, max_abs_difference(s.states, free));
        for (double u : s.controls.data()) worst_control = std::max(worst_control, std::abs(u));
    }
    std::ostringstream detail;
    detail << "max |u| = " << worst_control << ", state sup-norm gap " << worst_state;
    verdict(8, "degeneracy", worst_control == 0.0 && worst_state <= 1e-9, detail.str());
}

void adjoint_modes(const ScenarioConfig& config)
{
    const TimeGrid grid = config.grid.grid();
    const Trajectory zero(grid.nodes(), 2, 0.0);
    double worst = 0.0;
    for (double alpha : config.alphas) {
        ModelParams params = config.model;
        params.alpha = alpha;
        const Trajectory states = integrate_caputo_ivp(uncontrolled_field(params),
                                                       config.initial_state.as_array(), grid, alpha);
        SweepConfig sweep = config.sweep;
        sweep.adjoint_mode = AdjointMode::full_hamiltonian;
        const Trajectory full = solve_adjoint(params, config.weights, grid, states, zero, sweep);
        sweep.adjoint_mode = AdjointMode::paper_printed;
        const Trajectory printed = solve_adjoint(params, config.weights, grid, states, zero, sweep);
        worst = std::max(worst, max_abs_difference(full, printed));
    }
    std::ostringstream detail;
    detail << "sup-norm gap " << worst;
    verdict(9, "adjoint-mode agreement", worst <= 1e-12, detail.str());
}

} // namespace

int main()
{
    const ScenarioConfig config =
        load_config(fs::path(FRACOCP_SOURCE_DIR) / "configs" / "paper_scenario.json");

    const std::vector<void (*)()> plain = {integrator_oracle, weight_identities, classical_cross_check,
                                           population_bound, residual_consistency};
    for (auto run : plain) run();
    optimality_suite(config);
    figure_shape(config);
    degeneracy(config);
    adjoint_modes(config);

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << '\n';
    return failures == 0 ? 0 : 1;
}
