#include "fracocp/cli.hpp"

#include "fracocp/csv.hpp"
#include "fracocp/errors.hpp"
#include "fracocp/scenario.hpp"

#include <CLI11.hpp>

#include <optional>

namespace fracocp {

namespace {

struct Invocation {
    std::string config_path;
    std::optional<double> alpha;
    std::string output_dir;
    unsigned jobs = 0;
    bool svg = false;
    bool paper_adjoint = false;
};

void report(const ScenarioReport& result, const ScenarioConfig& config, std::ostream& out,
            std::ostream& err)
{
    for (const auto& item : result.items) {
        out << "alpha=" << alpha_label(item.alpha) << ' ' << variant_name(item.variant)
            << " J=" << format_double(item.objective);
        if (item.variant == Variant::controlled) {
            out << " iterations=" << item.iterations
                << " converged=" << (item.converged ? "true" : "false")
                << " residual=" << format_double(item.stationarity_residual);
            if (!item.converged) {
                err << "warning: sweep for alpha=" << alpha_label(item.alpha)
                    << " did not converge within " << config.sweep.max_iterations
                    << " iterations\n";
            }
        }
        out << '\n';
    }
    out << "wrote " << result.files.size() << " files to " << config.output_dir.string() << '\n';
}

int execute(const std::string& command, const Invocation& inv, std::ostream& out,
            std::ostream& err)
{
    try {
        ScenarioConfig config = load_config(inv.config_path);
        if (!inv.output_dir.empty()) {
            config.output_dir = inv.output_dir;
        }
        if (inv.paper_adjoint) {
            config.sweep.adjoint_mode = AdjointMode::paper_printed;
        }
        if (inv.alpha) {
            if (!(*inv.alpha > 0.0 && *inv.alpha <= 1.0)) {
                throw ConfigError("--alpha: must lie in (0,1]");
            }
            config.alphas = {*inv.alpha};
        }

        RunOptions options;
        options.jobs = inv.jobs;
        options.svg = inv.svg;
        options.uncontrolled = command != "optimize";
        options.controlled = command != "simulate";
        report(run_scenario(config, options), config, out, err);
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const NumericalError& e) {
        err << "numerical abort: " << e.what() << '\n';
        return kExitNumericalAbort;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Fractional optimal control of a COVID-19 SEIR model"};
    app.name("fracocp");
    app.require_subcommand(1);

    Invocation inv;
    const auto common = [&inv](CLI::App* sub) {
        sub->add_option("--config", inv.config_path, "Scenario JSON file")->required();
        sub->add_option("--output-dir", inv.output_dir, "Override output_dir from the config");
        sub->add_option("--jobs", inv.jobs, "Concurrent scenario items (0 = all cores)");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Uncontrolled trajectories only");
    common(simulate);
    simulate->add_option("--alpha", inv.alpha, "Run a single fractional order");

    CLI::App* optimize = app.add_subcommand("optimize", "Optimal control by forward-backward sweep");
    common(optimize);
    optimize->add_flag("--paper-adjoint", inv.paper_adjoint, "Use the printed costate system");

    CLI::App* compare = app.add_subcommand("compare", "Uncontrolled and optimal runs side by side");
    common(compare);
    compare->add_flag("--svg", inv.svg, "Write fig_S/E/I/R.svg");
    compare->add_flag("--paper-adjoint", inv.paper_adjoint, "Use the printed costate system");

    std::vector<const char*> argv{"fracocp"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return kExitConfigError;
    }

    for (CLI::App* sub : {simulate, optimize, compare}) {
        if (sub->parsed()) {
            return execute(sub->get_name(), inv, out, err);
        }
    }
    return kExitConfigError;
}

} // namespace fracocp
