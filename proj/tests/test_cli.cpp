#include "fracocp/cli.hpp"
#include "fracocp/csv.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fracocp;
namespace fs = std::filesystem;

namespace {

const std::string kScenarioConfig =
    (fs::path(FRACOCP_SOURCE_DIR) / "configs" / "paper_scenario.json").string();

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::path(FRACOCP_TEST_TMP) / "cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path write_config(const fs::path& dir, const std::string& extra_model, const std::string& tail)
{
    const fs::path path = dir / "config.json";
    std::ofstream(path) << R"({"model": {"Lambda": 0.271, "beta1": 0.00035, "beta2": 0.0004,
        "mu": 0.001, "rho": 0.0058, "gamma": 0.007, "tau": 0.002, "d": 0.00025, "p": 0.3)"
                        << extra_model << R"(},
        "initial_state": {"S": 220, "E": 100, "I": 3, "R": 0},
        "grid": {"tf": 100, "n_steps": 200})"
                        << tail << "}";
    return path;
}

} // namespace

TEST_CASE("usage errors exit 1")
{
    CHECK(run({}).code == kExitConfigError);
    CHECK(run({"simulate"}).code == kExitConfigError);
    CHECK(run({"bogus", "--config", kScenarioConfig}).code == kExitConfigError);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("simulate with a single order")
{
    const fs::path dir = scratch("simulate");
    const Outcome r = run({"simulate", "--config", kScenarioConfig, "--alpha", "0.8",
                           "--output-dir", dir.string()});
    CHECK(r.code == kExitOk);
    CHECK(fs::exists(dir / "uncontrolled_alpha0.8.csv"));
    CHECK_FALSE(fs::exists(dir / "controlled_alpha0.8.csv"));
    const CsvTable summary = read_csv(dir / "summary.csv");
    REQUIRE(summary.rows.size() == 1);
    CHECK(summary.rows[0][1] == "uncontrolled");

    CHECK(run({"simulate", "--config", kScenarioConfig, "--alpha", "1.5", "--output-dir", dir.string()})
              .code == kExitConfigError);
}

TEST_CASE("config errors exit 1 and name the key")
{
    const fs::path dir = scratch("config");
    const fs::path path = write_config(dir, "", R"(, "weights": {"r1": 0})");
    const Outcome r = run({"optimize", "--config", path.string(), "--output-dir", dir.string()});
    CHECK(r.code == kExitConfigError);
    CHECK(r.err.find("weights.r1") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "summary.csv"));
}

TEST_CASE("unreadable config and unwritable output exit 3")
{
    const fs::path dir = scratch("io");
    CHECK(run({"simulate", "--config", (dir / "absent.json").string()}).code == kExitIoError);

    std::ofstream(dir / "file") << "x";
    const Outcome r = run({"simulate", "--config", kScenarioConfig, "--output-dir",
                           (dir / "file" / "out").string()});
    CHECK(r.code == kExitIoError);
}

TEST_CASE("numerical abort exits 2 without a summary")
{
    const fs::path dir = scratch("abort");
    const fs::path path = write_config(dir, "", "");
    std::ofstream(path) << R"({"model": {"Lambda": 1e300, "beta1": 1, "beta2": 0.0004,
        "mu": 0.001, "rho": 0.0058, "gamma": 0.007, "tau": 0.002, "d": 0.00025, "p": 0.3},
        "initial_state": {"S": 220, "E": 100, "I": 3, "R": 0},
        "grid": {"tf": 100, "n_steps": 50}, "alphas": [0.9]})";
    const Outcome r = run({"optimize", "--config", path.string(), "--output-dir", (dir / "out").string()});
    CHECK(r.code == kExitNumericalAbort);
    CHECK(r.err.find("alpha 0.9") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out" / "summary.csv"));
}

TEST_CASE("non-convergence still exits 0 with a warning")
{
    const fs::path dir = scratch("nonconv");
    const fs::path path = write_config(dir, "", R"(, "sweep": {"max_iterations": 1})");
    const Outcome r = run({"optimize", "--config", path.string(), "--output-dir", dir.string()});
    CHECK(r.code == kExitOk);
    CHECK(r.err.find("did not converge") != std::string::npos);
    CHECK(r.out.find("converged=false") != std::string::npos);
}

TEST_CASE("printed costate system changes the optimum")
{
    const fs::path dir = scratch("adjoint");
    const fs::path path = write_config(dir, ", \"alpha\": 0.85", R"(, "sweep": {"delta": 1e-6})");
    REQUIRE(run({"optimize", "--config", path.string(), "--output-dir", (dir / "full").string()}).code ==
            kExitOk);
    REQUIRE(run({"optimize", "--config", path.string(), "--output-dir", (dir / "printed").string(),
                 "--paper-adjoint"})
                .code == kExitOk);
    const auto a = read_csv(dir / "full" / "summary.csv").numeric_column("objective");
    const auto b = read_csv(dir / "printed" / "summary.csv").numeric_column("objective");
    REQUIRE(a.size() == 1);
    REQUIRE(b.size() == 1);
    CHECK(a[0] != b[0]);
}
