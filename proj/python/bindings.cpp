#include "fracocp/cli.hpp"
#include "fracocp/covid_model.hpp"
#include "fracocp/errors.hpp"
#include "fracocp/focp.hpp"
#include "fracocp/fracode.hpp"
#include "fracocp/gamma.hpp"
#include "fracocp/scenario.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <array>
#include <sstream>

namespace py = pybind11;
using namespace fracocp;

namespace {

py::array_t<double> to_numpy(const Trajectory& t)
{
    py::array_t<double> out({t.nodes(), t.dimension()});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t k = 0; k < t.nodes(); ++k) {
        for (std::size_t i = 0; i < t.dimension(); ++i) {
            view(k, i) = t(k, i);
        }
    }
    return out;
}

Trajectory from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                      const char* what)
{
    if (a.ndim() == 1) {
        Trajectory t(static_cast<std::size_t>(a.shape(0)), 1);
        auto view = a.unchecked<1>();
        for (py::ssize_t k = 0; k < a.shape(0); ++k) {
            t(k, 0) = view(k);
        }
        return t;
    }
    if (a.ndim() != 2) {
        throw py::value_error(std::string(what) + ": expected a 1-D or 2-D array");
    }
    Trajectory t(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    auto view = a.unchecked<2>();
    for (py::ssize_t k = 0; k < a.shape(0); ++k) {
        for (py::ssize_t i = 0; i < a.shape(1); ++i) {
            t(k, i) = view(k, i);
        }
    }
    return t;
}

VectorField python_field(py::function fn, std::size_t dimension)
{
    return VectorField(dimension, [fn = std::move(fn), dimension](double t,
                                                                  std::span<const double> x,
                                                                  std::span<double> out) {
        py::array_t<double> arg(static_cast<py::ssize_t>(x.size()), x.data());
        const auto result =
            py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(fn(t, arg));
        if (!result || result.size() != static_cast<py::ssize_t>(dimension)) {
            throw py::value_error("field must return " + std::to_string(dimension) + " values");
        }
        std::copy_n(result.data(), dimension, out.begin());
    });
}

State to_state(const std::array<double, 4>& x) { return {x[0], x[1], x[2], x[3]}; }

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "C++ core of fracocp";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<OracleError>(m, "OracleError", PyExc_RuntimeError);

    m.def("lanczos_gamma", &lanczos_gamma, py::arg("x"));

    m.def(
        "abm_weights",
        [](double alpha, long long k) {
            AbmWeights w = abm_weights(alpha, k);
            return py::make_tuple(w.predictor, w.corrector);
        },
        py::arg("alpha"), py::arg("k"),
        "Predictor and corrector weight rows (b, a) for the step k -> k+1.");

    m.def(
        "integrate_caputo_ivp",
        [](py::function field, std::vector<double> x0, double tf, std::size_t n_steps,
           double alpha, int corrector_iterations) {
            const auto f = python_field(std::move(field), x0.size());
            return to_numpy(
                integrate_caputo_ivp(f, x0, TimeGrid(tf, n_steps), alpha, corrector_iterations));
        },
        py::arg("field"), py::arg("x0"), py::arg("tf"), py::arg("n_steps"), py::arg("alpha"),
        py::arg("corrector_iterations") = 1,
        "Solve D^alpha x = field(t, x), x(0) = x0 on a uniform grid. Returns (n_steps+1, dim).");

    m.def(
        "integrate_adjoint_tvp",
        [](py::function field, std::vector<double> lambda_tf, double tf, std::size_t n_steps,
           double alpha, int corrector_iterations, bool rl_correction) {
            const auto f = python_field(std::move(field), lambda_tf.size());
            return to_numpy(integrate_adjoint_tvp(f, lambda_tf, TimeGrid(tf, n_steps), alpha,
                                                  corrector_iterations, rl_correction));
        },
        py::arg("field"), py::arg("lambda_tf"), py::arg("tf"), py::arg("n_steps"),
        py::arg("alpha"), py::arg("corrector_iterations") = 1, py::arg("rl_correction") = false);

    m.def(
        "l1_caputo_derivative",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> samples, double tf,
           std::size_t n_steps, double alpha) {
            const bool flat = samples.ndim() == 1;
            const Trajectory out =
                l1_caputo_derivative(from_numpy(samples, "samples"), TimeGrid(tf, n_steps), alpha);
            if (flat) {
                const auto column = out.column(0);
                return py::array_t<double>(static_cast<py::ssize_t>(column.size()), column.data());
            }
            return to_numpy(out);
        },
        py::arg("samples"), py::arg("tf"), py::arg("n_steps"), py::arg("alpha"));

    m.def("mittag_leffler", &mittag_leffler, py::arg("alpha"), py::arg("z"));

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("Lambda", &ModelParams::Lambda)
        .def_readwrite("beta1", &ModelParams::beta1)
        .def_readwrite("beta2", &ModelParams::beta2)
        .def_readwrite("mu", &ModelParams::mu)
        .def_readwrite("rho", &ModelParams::rho)
        .def_readwrite("gamma", &ModelParams::gamma)
        .def_readwrite("tau", &ModelParams::tau)
        .def_readwrite("d", &ModelParams::d)
        .def_readwrite("p", &ModelParams::p)
        .def_readwrite("alpha", &ModelParams::alpha)
        .def("validate", &ModelParams::validate);
    m.def("reference_params", &reference_params);

    py::class_<ObjectiveWeights>(m, "ObjectiveWeights")
        .def(py::init<>())
        .def_readwrite("A1", &ObjectiveWeights::A1)
        .def_readwrite("A2", &ObjectiveWeights::A2)
        .def_readwrite("A3", &ObjectiveWeights::A3)
        .def_readwrite("A4", &ObjectiveWeights::A4)
        .def_readwrite("r1", &ObjectiveWeights::r1)
        .def_readwrite("r2", &ObjectiveWeights::r2);

    m.def(
        "rhs_uncontrolled",
        [](const ModelParams& p, std::array<double, 4> x) { return rhs_uncontrolled(p, to_state(x)); },
        py::arg("params"), py::arg("x"));
    m.def(
        "rhs_controlled",
        [](const ModelParams& p, std::array<double, 4> x, std::array<double, 2> u) {
            return rhs_controlled(p, to_state(x), {u[0], u[1]});
        },
        py::arg("params"), py::arg("x"), py::arg("u"));
    m.def(
        "total_population", [](std::array<double, 4> x) { return total_population(to_state(x)); },
        py::arg("x"));
    m.def(
        "objective",
        [](const ObjectiveWeights& w, double tf, std::size_t n_steps,
           py::array_t<double, py::array::c_style | py::array::forcecast> states,
           py::array_t<double, py::array::c_style | py::array::forcecast> controls) {
            return objective(w, TimeGrid(tf, n_steps), from_numpy(states, "states"),
                             from_numpy(controls, "controls"));
        },
        py::arg("weights"), py::arg("tf"), py::arg("n_steps"), py::arg("states"),
        py::arg("controls"));

    py::enum_<AdjointMode>(m, "AdjointMode")
        .value("full_hamiltonian", AdjointMode::full_hamiltonian)
        .value("paper_printed", AdjointMode::paper_printed);

    m.def(
        "rhs_adjoint",
        [](const ModelParams& p, const ObjectiveWeights& w, std::array<double, 4> x,
           std::array<double, 2> u, std::array<double, 4> lam, AdjointMode mode) {
            return rhs_adjoint(p, w, to_state(x), {u[0], u[1]},
                               {lam[0], lam[1], lam[2], lam[3]}, mode);
        },
        py::arg("params"), py::arg("weights"), py::arg("x"), py::arg("u"), py::arg("lam"),
        py::arg("mode") = AdjointMode::full_hamiltonian);
    m.def(
        "stationary_controls",
        [](const ModelParams& p, const ObjectiveWeights& w, std::array<double, 4> x,
           std::array<double, 4> lam, std::pair<double, double> bounds) {
            const Control u = stationary_controls(p, w, to_state(x),
                                                  {lam[0], lam[1], lam[2], lam[3]},
                                                  {bounds.first, bounds.second});
            return std::make_pair(u.u1, u.u2);
        },
        py::arg("params"), py::arg("weights"), py::arg("x"), py::arg("lam"),
        py::arg("bounds") = std::make_pair(0.0, 1.0));

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("max_iterations", &SweepConfig::max_iterations)
        .def_readwrite("omega", &SweepConfig::omega)
        .def_readwrite("delta", &SweepConfig::delta)
        .def_property(
            "bounds", [](const SweepConfig& c) { return std::make_pair(c.bounds.lower, c.bounds.upper); },
            [](SweepConfig& c, std::pair<double, double> b) { c.bounds = {b.first, b.second}; })
        .def_readwrite("adjoint_mode", &SweepConfig::adjoint_mode)
        .def_readwrite("adjoint_rl_correction", &SweepConfig::adjoint_rl_correction)
        .def_readwrite("corrector_iterations", &SweepConfig::corrector_iterations);

    py::class_<SweepSolution>(m, "SweepSolution")
        .def_property_readonly("states", [](const SweepSolution& s) { return to_numpy(s.states); })
        .def_property_readonly("adjoints", [](const SweepSolution& s) { return to_numpy(s.adjoints); })
        .def_property_readonly("controls", [](const SweepSolution& s) { return to_numpy(s.controls); })
        .def_readonly("objective_history", &SweepSolution::objective_history)
        .def_readonly("converged", &SweepSolution::converged)
        .def_readonly("iterations_used", &SweepSolution::iterations_used)
        .def_readonly("stationarity_residual", &SweepSolution::stationarity_residual)
        .def_readonly("objective", &SweepSolution::objective);

    m.def(
        "fbsm_solve",
        [](const ModelParams& p, const ObjectiveWeights& w, std::array<double, 4> x0, double tf,
           std::size_t n_steps, const SweepConfig& config) {
            py::gil_scoped_release release;
            return fbsm_solve(p, w, to_state(x0), TimeGrid(tf, n_steps), config);
        },
        py::arg("params"), py::arg("weights"), py::arg("x0"), py::arg("tf") = 100.0,
        py::arg("n_steps") = 1000, py::arg("config") = SweepConfig{});

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readwrite("model", &ScenarioConfig::model)
        .def_readwrite("weights", &ScenarioConfig::weights)
        .def_property(
            "initial_state",
            [](const ScenarioConfig& c) { return c.initial_state.as_array(); },
            [](ScenarioConfig& c, std::array<double, 4> x) { c.initial_state = to_state(x); })
        .def_property(
            "tf", [](const ScenarioConfig& c) { return c.grid.tf; },
            [](ScenarioConfig& c, double tf) { c.grid.tf = tf; })
        .def_property(
            "n_steps", [](const ScenarioConfig& c) { return c.grid.n_steps; },
            [](ScenarioConfig& c, std::size_t n) { c.grid.n_steps = n; })
        .def_readwrite("sweep", &ScenarioConfig::sweep)
        .def_readwrite("alphas", &ScenarioConfig::alphas)
        .def_readwrite("output_dir", &ScenarioConfig::output_dir);

    m.def("parse_config", &parse_config, py::arg("text"));

    m.def(
        "run_scenario",
        [](const ScenarioConfig& config, bool svg, unsigned jobs, bool uncontrolled,
           bool controlled) {
            ScenarioReport report;
            {
                py::gil_scoped_release release;
                report = run_scenario(config, {uncontrolled, controlled, svg, jobs});
            }
            py::list rows;
            for (const auto& item : report.items) {
                py::dict row;
                row["alpha"] = item.alpha;
                row["variant"] = std::string(variant_name(item.variant));
                row["objective"] = item.objective;
                row["iterations"] = item.iterations;
                row["converged"] = item.converged;
                row["stationarity_residual"] = item.stationarity_residual;
                rows.append(row);
            }
            return py::make_tuple(rows, report.files);
        },
        py::arg("config"), py::arg("svg") = false, py::arg("jobs") = 0,
        py::arg("uncontrolled") = true, py::arg("controlled") = true,
        "Run the scenario, returning (summary rows, written files).");

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            std::ostringstream out;
            std::ostringstream err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line tool in-process: (exit_code, stdout, stderr).");
}
