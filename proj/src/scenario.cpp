#include "fracocp/scenario.hpp"

#include "fracocp/csv.hpp"
#include "fracocp/errors.hpp"
#include "fracocp/svg.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace fracocp {

namespace {

using json = nlohmann::json;

// Typed access to one JSON object; unknown keys are reported by finish().
class Block {
public:
    Block(const json& node, std::string path)
        : node_(node)
        , path_(std::move(path))
    {
        if (!node_.is_object()) {
            fail(path_, "expected an object");
        }
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& message)
    {
        throw ConfigError(path + ": " + message);
    }

    std::string key_path(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        const auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt)
    {
        const json* value = find(key);
        if (!value) {
            if (!fallback) {
                fail(key_path(key), "missing required key");
            }
            return *fallback;
        }
        if (!value->is_number()) {
            fail(key_path(key), "expected a number");
        }
        const double v = value->get<double>();
        if (!std::isfinite(v)) {
            fail(key_path(key), "must be finite");
        }
        return v;
    }

    long long integer(const std::string& key, long long fallback)
    {
        const json* value = find(key);
        if (!value) {
            return fallback;
        }
        if (!value->is_number_integer()) {
            fail(key_path(key), "expected an integer");
        }
        return value->get<long long>();
    }

    bool boolean(const std::string& key, bool fallback)
    {
        const json* value = find(key);
        if (!value) {
            return fallback;
        }
        if (!value->is_boolean()) {
            fail(key_path(key), "expected true or false");
        }
        return value->get<bool>();
    }

    std::optional<std::string> string(const std::string& key)
    {
        const json* value = find(key);
        if (!value) {
            return std::nullopt;
        }
        if (!value->is_string()) {
            fail(key_path(key), "expected a string");
        }
        return value->get<std::string>();
    }

    void finish() const
    {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.contains(key)) {
                fail(key_path(key), "unknown key");
            }
        }
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

// Runs a validate() that throws std::invalid_argument("field: rule") and
// re-raises it as a ConfigError under `prefix`.
template <class Fn>
void validated(const std::string& prefix, Fn&& fn)
{
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(prefix + "." + e.what());
    }
}

ModelParams parse_model(Block block)
{
    ModelParams m;
    m.Lambda = block.number("Lambda");
    m.beta1 = block.number("beta1");
    m.beta2 = block.number("beta2");
    m.mu = block.number("mu");
    m.rho = block.number("rho");
    m.gamma = block.number("gamma");
    m.tau = block.number("tau");
    m.d = block.number("d");
    m.p = block.number("p");
    m.alpha = block.number("alpha", 1.0);
    block.finish();
    validated("model", [&] { m.validate(); });
    return m;
}

ObjectiveWeights parse_weights(Block block)
{
    ObjectiveWeights w;
    w.A1 = block.number("A1", w.A1);
    w.A2 = block.number("A2", w.A2);
    w.A3 = block.number("A3", w.A3);
    w.A4 = block.number("A4", w.A4);
    w.r1 = block.number("r1", w.r1);
    w.r2 = block.number("r2", w.r2);
    block.finish();
    validated("weights", [&] { w.validate(); });
    return w;
}

State parse_state(Block block)
{
    State s;
    s.S = block.number("S");
    s.E = block.number("E");
    s.I = block.number("I");
    s.R = block.number("R");
    block.finish();
    const std::pair<const char*, double> fields[] = {{"S", s.S}, {"E", s.E}, {"I", s.I}, {"R", s.R}};
    for (const auto& [name, value] : fields) {
        if (value < 0.0) {
            Block::fail(std::string("initial_state.") + name, "must be non-negative");
        }
    }
    return s;
}

GridSpec parse_grid(Block block)
{
    GridSpec g;
    g.tf = block.number("tf", g.tf);
    const long long n = block.integer("n_steps", static_cast<long long>(g.n_steps));
    block.finish();
    if (!(g.tf > 0.0)) {
        Block::fail("grid.tf", "must be positive");
    }
    if (n < 2) {
        Block::fail("grid.n_steps", "must be at least 2");
    }
    g.n_steps = static_cast<std::size_t>(n);
    return g;
}

SweepConfig parse_sweep(Block block)
{
    SweepConfig s;
    const long long max_iterations = block.integer("max_iterations", s.max_iterations);
    s.omega = block.number("omega", s.omega);
    s.delta = block.number("delta", s.delta);
    s.bounds.lower = block.number("u_min", s.bounds.lower);
    s.bounds.upper = block.number("u_max", s.bounds.upper);
    if (const auto mode = block.string("adjoint_mode")) {
        if (*mode == "full_hamiltonian") {
            s.adjoint_mode = AdjointMode::full_hamiltonian;
        } else if (*mode == "paper_printed") {
            s.adjoint_mode = AdjointMode::paper_printed;
        } else {
            Block::fail("sweep.adjoint_mode", "expected \"full_hamiltonian\" or \"paper_printed\"");
        }
    }
    s.adjoint_rl_correction = block.boolean("adjoint_rl_correction", s.adjoint_rl_correction);
    const long long corrector = block.integer("corrector_iterations", s.corrector_iterations);
    block.finish();
    if (max_iterations < 1 || max_iterations > std::numeric_limits<int>::max()) {
        Block::fail("sweep.max_iterations", "must be a positive integer");
    }
    if (corrector < 1 || corrector > 1000) {
        Block::fail("sweep.corrector_iterations", "must lie in [1, 1000]");
    }
    s.max_iterations = static_cast<int>(max_iterations);
    s.corrector_iterations = static_cast<int>(corrector);
    validated("sweep", [&] { s.validate(); });
    return s;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot read config " + path.string());
    }
    std::ostringstream text;
    text << file.rdbuf();
    return text.str();
}

void ensure_writable(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    const auto probe = dir / ".fracocp-write-probe";
    {
        std::ofstream file(probe);
        if (!file) {
            throw IoError("output directory " + dir.string() + " is not writable");
        }
    }
    std::filesystem::remove(probe, ec);
}

std::string summary_text(const std::vector<ScenarioItem>& items)
{
    std::string out(kSummaryHeader);
    out.push_back('\n');
    for (const auto& item : items) {
        out += alpha_label(item.alpha);
        out += ',';
        out += variant_name(item.variant);
        out += ',';
        out += format_double(item.objective);
        out += ',';
        out += std::to_string(item.iterations);
        out += item.converged ? ",true," : ",false,";
        out += format_double(item.stationarity_residual);
        out.push_back('\n');
    }
    return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

void write_figures(const std::filesystem::path& dir, const ScenarioConfig& config,
                   const std::vector<ScenarioItem>& items, std::vector<std::filesystem::path>& files)
{
    const TimeGrid grid = config.grid.grid();
    std::vector<double> times(grid.nodes());
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
        times[k] = grid.time(k);
    }
    const char* names[] = {"S", "E", "I", "R"};
    const char* titles[] = {"Susceptible S(t)", "Exposed E(t)", "Infectious I(t)",
                            "Recovered R(t)"};
    for (std::size_t c = 0; c < 4; ++c) {
        LinePlot plot;
        plot.title = titles[c];
        plot.y_label = names[c];
        plot.legend_only.push_back({{}, {}, "black", false, "with control"});
        plot.legend_only.push_back({{}, {}, "black", true, "without control"});
        for (std::size_t a = 0; a < config.alphas.size(); ++a) {
            const double alpha = config.alphas[a];
            const std::string color = kPalette[a % std::size(kPalette)];
            bool labelled = false;
            for (const auto& item : items) {
                if (item.alpha != alpha) {
                    continue;
                }
                PlotSeries series;
                series.x = times;
                series.y = item.states.column(c);
                series.color = color;
                series.dotted = item.variant == Variant::uncontrolled;
                if (!labelled) {
                    series.label = "alpha = " + alpha_label(alpha);
                    labelled = true;
                }
                plot.series.push_back(std::move(series));
            }
        }
        const auto path = dir / (std::string("fig_") + names[c] + ".svg");
        write_text_file(path, render_svg(plot));
        files.push_back(path);
    }
}

} // namespace

ScenarioConfig parse_config(std::string_view json_text)
{
    json document;
    try {
        document = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("<document>: malformed JSON: ") + e.what());
    }
    Block root(document, "");

    ScenarioConfig config;
    const json* model = root.find("model");
    if (!model) {
        Block::fail("model", "missing required key");
    }
    config.model = parse_model(Block(*model, "model"));

    const json* initial = root.find("initial_state");
    if (!initial) {
        Block::fail("initial_state", "missing required key");
    }
    config.initial_state = parse_state(Block(*initial, "initial_state"));

    if (const json* weights = root.find("weights")) {
        config.weights = parse_weights(Block(*weights, "weights"));
    }
    if (const json* grid = root.find("grid")) {
        config.grid = parse_grid(Block(*grid, "grid"));
    }
    if (const json* sweep = root.find("sweep")) {
        config.sweep = parse_sweep(Block(*sweep, "sweep"));
    }
    if (const json* alphas = root.find("alphas")) {
        if (!alphas->is_array() || alphas->empty()) {
            Block::fail("alphas", "expected a non-empty array of orders");
        }
        for (std::size_t i = 0; i < alphas->size(); ++i) {
            const json& entry = (*alphas)[i];
            const std::string path = "alphas[" + std::to_string(i) + "]";
            if (!entry.is_number()) {
                Block::fail(path, "expected a number");
            }
            const double alpha = entry.get<double>();
            if (!(alpha > 0.0 && alpha <= 1.0)) {
                Block::fail(path, "must lie in (0,1]");
            }
            config.alphas.push_back(alpha);
        }
    } else {
        config.alphas = {config.model.alpha};
    }
    if (const auto dir = root.string("output_dir")) {
        if (dir->empty()) {
            Block::fail("output_dir", "must not be empty");
        }
        config.output_dir = *dir;
    }
    root.finish();
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    return parse_config(read_file(path));
}

std::string_view variant_name(Variant variant)
{
    return variant == Variant::controlled ? "controlled" : "uncontrolled";
}

std::string alpha_label(double alpha) { return format_double(alpha); }

std::filesystem::path trajectory_path(const std::filesystem::path& dir, Variant variant,
                                      double alpha)
{
    return dir / (std::string(variant_name(variant)) + "_alpha" + alpha_label(alpha) + ".csv");
}

const ScenarioItem& ScenarioReport::find(double alpha, Variant variant) const
{
    for (const auto& item : items) {
        if (item.alpha == alpha && item.variant == variant) {
            return item;
        }
    }
    throw std::out_of_range("no scenario item for alpha " + alpha_label(alpha));
}

ScenarioItem solve_item(const ScenarioConfig& config, double alpha, Variant variant)
{
    ModelParams params = config.model;
    params.alpha = alpha;
    const TimeGrid grid = config.grid.grid();

    ScenarioItem item;
    item.alpha = alpha;
    item.variant = variant;
    if (variant == Variant::uncontrolled) {
        params.validate();
        const StateVector x0 = config.initial_state.as_array();
        item.states = integrate_caputo_ivp(uncontrolled_field(params), x0, grid, alpha,
                                           config.sweep.corrector_iterations);
        item.controls = Trajectory(grid.nodes(), 2, 0.0);
        item.adjoints = Trajectory(grid.nodes(), 4, 0.0);
        item.objective = objective(config.weights, grid, item.states, item.controls);
        item.stationarity_residual = std::numeric_limits<double>::quiet_NaN();
        return item;
    }
    SweepSolution solution = fbsm_solve(params, config.weights, config.initial_state, grid,
                                        config.sweep);
    item.objective = solution.objective;
    item.iterations = solution.iterations_used;
    item.converged = solution.converged;
    item.stationarity_residual = solution.stationarity_residual;
    item.states = std::move(solution.states);
    item.controls = std::move(solution.controls);
    item.adjoints = std::move(solution.adjoints);
    return item;
}

ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options)
{
    const std::filesystem::path& dir = config.output_dir;
    ensure_writable(dir);

    std::vector<std::pair<double, Variant>> work;
    for (double alpha : config.alphas) {
        if (options.uncontrolled) {
            work.emplace_back(alpha, Variant::uncontrolled);
        }
        if (options.controlled) {
            work.emplace_back(alpha, Variant::controlled);
        }
    }

    const TimeGrid grid = config.grid.grid();
    std::vector<ScenarioItem> results(work.size());
    std::vector<std::exception_ptr> failures(work.size());
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (std::size_t i = next++; i < work.size(); i = next++) {
            const auto [alpha, variant] = work[i];
            try {
                try {
                    results[i] = solve_item(config, alpha, variant);
                } catch (const NumericalError& e) {
                    throw NumericalError("alpha " + alpha_label(alpha) + " (" +
                                         std::string(variant_name(variant)) + "): " + e.what());
                } catch (const std::invalid_argument& e) {
                    throw ConfigError("alpha " + alpha_label(alpha) + ": " + e.what());
                }
                const ScenarioItem& item = results[i];
                if (variant == Variant::uncontrolled) {
                    write_trajectory_csv(trajectory_path(dir, variant, alpha), grid, item.states);
                } else {
                    write_trajectory_csv(trajectory_path(dir, variant, alpha), grid, item.states,
                                         &item.controls, &item.adjoints);
                }
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    unsigned jobs = options.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                      : options.jobs;
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(work.size(), 1)));
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 1; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
        worker();
    }
    for (const auto& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    ScenarioReport report;
    for (std::size_t i = 0; i < work.size(); ++i) {
        report.files.push_back(trajectory_path(dir, work[i].second, work[i].first));
    }
    const auto summary = dir / "summary.csv";
    write_text_file(summary, summary_text(results));
    report.files.push_back(summary);
    if (options.svg) {
        write_figures(dir, config, results, report.files);
    }
    report.items = std::move(results);
    return report;
}

} // namespace fracocp
