#include "fracocp/covid_model.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace fracocp;

namespace {

const State kInitial{220, 100, 3, 0};

double sum(const StateVector& v) { return v[0] + v[1] + v[2] + v[3]; }

State random_state(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> count(0.0, 500.0);
    return {count(rng), count(rng), count(rng), count(rng)};
}

} // namespace

TEST_CASE("uncontrolled rates at the initial state")
{
    const StateVector dx = rhs_uncontrolled(reference_params(), kInitial);
    CHECK(dx[0] == doctest::Approx(-7.913).epsilon(1e-12));
    CHECK(dx[1] == doctest::Approx(7.284).epsilon(1e-12));
    CHECK(dx[2] == doctest::Approx(0.55525).epsilon(1e-12));
    CHECK(dx[3] == doctest::Approx(0.021).epsilon(1e-12));
}

TEST_CASE("empty population only recruits")
{
    const ModelParams params = reference_params();
    const StateVector dx = rhs_uncontrolled(params, {});
    CHECK(dx == StateVector{params.Lambda, 0.0, 0.0, 0.0});
}

TEST_CASE("controlled rates")
{
    const ModelParams params = reference_params();
    CHECK(rhs_controlled(params, kInitial, {0.0, 0.0}) == rhs_uncontrolled(params, kInitial));

    const StateVector dx = rhs_controlled(params, kInitial, {1.0, 1.0});
    CHECK(dx[0] == doctest::Approx(-227.913).epsilon(1e-12));
    CHECK(dx[1] == doctest::Approx(-92.716).epsilon(1e-12));
    CHECK(dx[2] == doctest::Approx(70.55525).epsilon(1e-12));
    CHECK(dx[3] == doctest::Approx(250.021).epsilon(1e-12));
}

TEST_CASE("total population")
{
    CHECK(total_population(kInitial) == 323.0);
    CHECK(total_population({}) == 0.0);
    CHECK(total_population({3, 0, 220, 100}) == total_population(kInitial));
    CHECK(total_population({0, 220, 100, 3}) == total_population(kInitial));
}

TEST_CASE("property: population balance and control neutrality")
{
    std::mt19937_64 rng(20210106);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ModelParams params = reference_params();
    for (int trial = 0; trial < 2000; ++trial) {
        const State x = random_state(rng);
        const Control u{unit(rng), unit(rng)};
        const double balance = params.Lambda - params.mu * total_population(x) - params.d * x.I;
        const StateVector free = rhs_uncontrolled(params, x);
        const StateVector forced = rhs_controlled(params, x, u);
        // magnitude of the largest cancelling term, for a rounding-aware bound
        const double scale = 1.0 + params.beta1 * x.S * x.E + params.beta2 * x.S * x.I + x.S + x.E;
        CHECK(std::abs(sum(free) - balance) <= 1e-13 * scale);
        CHECK(std::abs(sum(forced) - sum(free)) <= 1e-13 * scale);
    }
}

TEST_CASE("parameter validation")
{
    ModelParams params = reference_params();
    CHECK_NOTHROW(params.validate());
    params.alpha = 0.0;
    CHECK_THROWS_WITH_AS(params.validate(), doctest::Contains("alpha"), std::invalid_argument);
    params = reference_params();
    params.mu = 0.0;
    CHECK_THROWS_WITH_AS(params.validate(), doctest::Contains("mu"), std::invalid_argument);
    params = reference_params();
    params.p = 1.5;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);

    ObjectiveWeights weights;
    weights.r2 = 0.0;
    CHECK_THROWS_WITH_AS(weights.validate(), doctest::Contains("r2"), std::invalid_argument);
}

TEST_SUITE("objective")
{
    TEST_CASE("hand quadratures")
    {
        const TimeGrid grid(1.0, 10);
        Trajectory states(grid.nodes(), 4, 0.0);
        Trajectory controls(grid.nodes(), 2, 0.0);
        CHECK(objective(ObjectiveWeights{}, grid, states, controls) == 0.0);

        ObjectiveWeights only_i{1, 0, 0, 0, 1, 1};
        for (std::size_t k = 0; k < grid.nodes(); ++k) states(k, 2) = 1.0;
        CHECK(objective(only_i, grid, states, controls) == doctest::Approx(1.0).epsilon(1e-15));

        states = Trajectory(grid.nodes(), 4, 0.0);
        for (std::size_t k = 0; k < grid.nodes(); ++k) controls(k, 0) = 1.0;
        ObjectiveWeights effort{0, 0, 0, 0, 2, 1};
        CHECK(objective(effort, grid, states, controls) == doctest::Approx(1.0).epsilon(1e-15));
    }

    TEST_CASE("terminal terms use the last node")
    {
        const TimeGrid grid(2.0, 4);
        Trajectory states(grid.nodes(), 4, 0.0);
        const Trajectory controls(grid.nodes(), 2, 0.0);
        states(4, 0) = 5.0;
        states(4, 1) = 7.0;
        states(3, 0) = 1000.0; // interior S never enters
        ObjectiveWeights w{0, 0, 2, 3, 1, 1};
        CHECK(objective(w, grid, states, controls) == 2 * 5.0 + 3 * 7.0);
    }

    TEST_CASE("property: monotone in A1 and A2")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const TimeGrid grid(10.0, 50);
        for (int trial = 0; trial < 200; ++trial) {
            Trajectory states(grid.nodes(), 4);
            Trajectory controls(grid.nodes(), 2);
            for (std::size_t k = 0; k < grid.nodes(); ++k) {
                const State x = random_state(rng);
                std::ranges::copy(x.as_array(), states.row(k).begin());
                controls(k, 0) = unit(rng);
                controls(k, 1) = unit(rng);
            }
            ObjectiveWeights w{unit(rng), unit(rng), unit(rng), unit(rng), 1 + unit(rng), 1 + unit(rng)};
            const double base = objective(w, grid, states, controls);
            ObjectiveWeights more_a1 = w;
            more_a1.A1 += unit(rng);
            ObjectiveWeights more_a2 = w;
            more_a2.A2 += unit(rng);
            CHECK(objective(more_a1, grid, states, controls) >= base);
            CHECK(objective(more_a2, grid, states, controls) <= base);
        }
    }

    TEST_CASE("mismatched lengths")
    {
        const TimeGrid grid(1.0, 10);
        const Trajectory states(grid.nodes(), 4, 0.0);
        const Trajectory controls(grid.nodes() - 1, 2, 0.0);
        CHECK_THROWS_AS(objective(ObjectiveWeights{}, grid, states, controls), std::invalid_argument);
    }
}

TEST_CASE("non-negativity and population bound along fractional trajectories")
{
    const TimeGrid grid(100.0, 1000);
    const StateVector x0 = kInitial.as_array();
    for (double alpha : {0.75, 0.85, 0.95, 1.0}) {
        ModelParams params = reference_params();
        params.alpha = alpha;
        const Trajectory x = integrate_caputo_ivp(uncontrolled_field(params), x0, grid, alpha);
        const double bound = std::max(323.0, params.Lambda / params.mu) + 1e-6;
        double lowest = 0.0;
        double largest = 0.0;
        for (std::size_t k = 0; k < x.nodes(); ++k) {
            lowest = std::min(lowest, *std::ranges::min_element(x.row(k)));
            largest = std::max(largest, total_population(State::from(x.row(k))));
        }
        INFO("alpha = " << alpha);
        CHECK(lowest >= -1e-9);
        CHECK(largest <= bound);
    }
}
