#pragma once

#include "fracocp/covid_model.hpp"
#include "fracocp/focp.hpp"
#include "fracocp/fracode.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracocp {

struct GridSpec {
    double tf = 100.0;
    std::size_t n_steps = 1000;

    TimeGrid grid() const { return {tf, n_steps}; }
};

/// Everything needed to run the uncontrolled/optimal comparison for a list of orders.
struct ScenarioConfig {
    ModelParams model;
    ObjectiveWeights weights;
    State initial_state;
    GridSpec grid;
    SweepConfig sweep;
    std::vector<double> alphas;
    std::filesystem::path output_dir = "out";
};

/// Parses and validates a JSON scenario document.
///
/// Blocks: `model` (required: Lambda, beta1, beta2, mu, rho, gamma, tau, d, p;
/// optional alpha, default 1), `initial_state` (required: S, E, I, R),
/// `weights` (A1..A4 default 1, r1, r2 default 10), `grid` (tf default 100,
/// n_steps default 1000), `sweep` (max_iterations 200, omega 0.5, delta 1e-3,
/// u_min 0, u_max 1, adjoint_mode "full_hamiltonian", adjoint_rl_correction
/// false, corrector_iterations 1), `alphas` (default [model.alpha]) and
/// `output_dir` (default "out"). Unknown keys are rejected.
///
/// Throws ConfigError whose message starts with the key path.
ScenarioConfig parse_config(std::string_view json_text);

/// Reads and parses a config file. Throws IoError if it cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path);

enum class Variant { uncontrolled, controlled };

std::string_view variant_name(Variant variant);

/// Compact label for an order, e.g. 0.75 -> "0.75", 1 -> "1".
std::string alpha_label(double alpha);

/// `<dir>/<variant>_alpha<value>.csv`
std::filesystem::path trajectory_path(const std::filesystem::path& dir, Variant variant,
                                      double alpha);

inline constexpr std::string_view kSummaryHeader =
    "alpha,variant,objective,iterations,converged,stationarity_residual";

struct RunOptions {
    bool uncontrolled = true;
    bool controlled = true;
    bool svg = false;
    unsigned jobs = 0; ///< 0 = hardware concurrency
};

struct ScenarioItem {
    double alpha = 1.0;
    Variant variant = Variant::uncontrolled;
    double objective = 0.0;
    int iterations = 0;
    bool converged = true;
    double stationarity_residual = 0.0; ///< NaN for uncontrolled runs
    Trajectory states;
    Trajectory controls;
    Trajectory adjoints;
};

struct ScenarioReport {
    std::vector<ScenarioItem> items;
    std::vector<std::filesystem::path> files;

    const ScenarioItem& find(double alpha, Variant variant) const;
};

/// Runs every (alpha, variant) item, writes one CSV per item, then the summary
/// and, if requested, fig_S/E/I/R.svg. The output directory is checked for
/// writability before any solve. A solver failure throws NumericalError naming
/// the alpha; file failures throw IoError. Nothing is summarised on failure.
ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Trajectories of one item, for standalone use.
ScenarioItem solve_item(const ScenarioConfig& config, double alpha, Variant variant);

} // namespace fracocp
