#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(WCMDP_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << body;
    return p;
}

const char* kSmallConfig = R"({
    "K": 2, "T": 4, "p": 0.5, "alpha": 0.5, "beta": 0.5, "gamma": 100.0,
    "b_low": 0.4, "b_high": 0.8, "scenario": "cjs", "Gamma": 0.5,
    "iters": 2000, "N": 2, "seed": 7
})";

}  // namespace

TEST_CASE("missing subcommand or config fails") {
    CHECK(run("") != 0);
    CHECK(run("--config /nonexistent.json kernel") != 0);
    CHECK(run("frobnicate") != 0);
}

TEST_CASE("kernel dump has stochastic admissible rows") {
    TempDir dir("wcmdp_cli_kernel");
    auto cfg = write_config(dir.path, kSmallConfig);
    CHECK(run("--config " + cfg.string() + " --out " + dir.path.string() + " kernel") == 0);
    std::istringstream in(slurp(dir.path / "kernel.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "s,s_prime,a,b,prob");
    double sums[3][2][2] = {};
    while (std::getline(in, line)) {
        int s, sp, a, b;
        double prob;
        REQUIRE(std::sscanf(line.c_str(), "%d,%d,%d,%d,%lf", &s, &sp, &a, &b, &prob) == 5);
        CHECK(!(s == 2 && a == 1));  // inadmissible rows are omitted
        sums[s][a][b] += prob;
    }
    for (int s = 0; s <= 2; ++s)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                if (s == 2 && a == 1) continue;
                CHECK(sums[s][a][b] == doctest::Approx(1.0).epsilon(1e-9));
            }
}

TEST_CASE("solve-lp writes a solution table and certified metrics") {
    TempDir dir("wcmdp_cli_lp");
    auto cfg = write_config(dir.path, kSmallConfig);
    CHECK(run("--config " + cfg.string() + " --out " + dir.path.string() + " solve-lp") == 0);
    std::istringstream in(slurp(dir.path / "lp_solution.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,s,a,b,y");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4 * 3 * 2 * 2);  // T*(K+1)*4
    auto metrics = nlohmann::json::parse(slurp(dir.path / "lp_metrics.json"));
    CHECK(metrics.contains("objective"));
    CHECK(metrics["kkt"]["stationarity"].get<double>() <= 1e-6);
    CHECK(metrics["pi_A_hat"].get<double>() >= 0.0);
}

TEST_CASE("gda and sgda emit traces and are byte-deterministic") {
    TempDir dir("wcmdp_cli_saddle");
    auto cfg = write_config(dir.path, kSmallConfig);
    const std::string base = "--config " + cfg.string() + " --out ";
    const fs::path out1 = dir.path / "run1";
    const fs::path out2 = dir.path / "run2";
    CHECK(run(base + out1.string() + " gda") == 0);
    CHECK(run(base + out2.string() + " gda") == 0);
    const std::string trace = slurp(out1 / "gda_trace.csv");
    CHECK(trace == slurp(out2 / "gda_trace.csv"));
    CHECK(slurp(out1 / "gda_solution.csv") == slurp(out2 / "gda_solution.csv"));
    std::istringstream in(trace);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header ==
          "iteration,lagrangian,dist_to_ref_frobenius,flow_residual_inf,"
          "max_budget_violation");

    CHECK(run(base + out1.string() + " sgda") == 0);
    CHECK(run(base + out2.string() + " sgda") == 0);
    CHECK(slurp(out1 / "sgda_solution.csv") == slurp(out2 / "sgda_solution.csv"));
    // A different seed changes the stochastic run.
    CHECK(run(base + out2.string() + " --seed 99 sgda") == 0);
    CHECK(slurp(out1 / "sgda_solution.csv") != slurp(out2 / "sgda_solution.csv"));
}

TEST_CASE("dp-exact prints the gap as JSON") {
    TempDir dir("wcmdp_cli_dp");
    auto cfg = write_config(dir.path, kSmallConfig);
    CHECK(run("--config " + cfg.string() + " --out " + dir.path.string() + " dp-exact") == 0);
    auto doc = nlohmann::json::parse(slurp(dir.path / "dp_exact.json"));
    CHECK(doc["gap"].get<double>() >= -1e-8);
    CHECK(doc["per_queue_value"].get<double>() ==
          doctest::Approx(doc["value"].get<double>() / 2.0));
    CHECK(doc["lp_objective"].get<double>() <=
          doc["per_queue_value"].get<double>() + 1e-8);
}

TEST_CASE("simulate writes per-seed reports and a summary") {
    TempDir dir("wcmdp_cli_sim");
    auto cfg = write_config(dir.path, kSmallConfig);
    CHECK(run("--config " + cfg.string() + " --out " + dir.path.string() +
              " simulate --runs 2") == 0);
    CHECK(fs::exists(dir.path / "sim_y_7.csv"));
    CHECK(fs::exists(dir.path / "sim_y_8.csv"));
    std::istringstream in(slurp(dir.path / "sim_epoch_7.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,rejections,stage_cost");
    auto summary = nlohmann::json::parse(slurp(dir.path / "sim_summary.json"));
    CHECK(summary["runs"].get<int>() == 2);
    CHECK(summary["mean_pi_A_hat"].get<double>() >= 0.0);
}

TEST_CASE("sweep emits ordered rows with a status column") {
    TempDir dir("wcmdp_cli_sweep");
    auto cfg = write_config(dir.path, kSmallConfig);
    CHECK(run("--config " + cfg.string() + " --out " + dir.path.string() +
              " sweep --param gamma --values 0 0.5 1.0 --solver lp") == 0);
    std::istringstream in(slurp(dir.path / "sweep.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "param,value,Gamma,objective,pi_A_hat,pi_H_hat,solver,iters,seed,status");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("gamma,", 0) == 0);
        CHECK(line.find(",ok") != std::string::npos);
        ++rows;
    }
    CHECK(rows == 3);
    // Missing values or bad parameters are rejected.
    CHECK(run("--config " + cfg.string() + " sweep --param gamma") != 0);
    CHECK(run("--config " + cfg.string() + " sweep --param q --values 1") != 0);
    // Invalid points are recorded but fail the process.
    CHECK(run("--config " + cfg.string() + " --out " + dir.path.string() +
              " sweep --param p --values 0.5 1.5 --solver lp") != 0);
    std::istringstream bad(slurp(dir.path / "sweep.csv"));
    std::getline(bad, line);
    std::getline(bad, line);
    CHECK(line.find(",ok") != std::string::npos);
    std::getline(bad, line);
    CHECK(line.find(",error") != std::string::npos);
}

TEST_CASE("convergence writes both traces and a summary with distances") {
    TempDir dir("wcmdp_cli_conv");
    auto cfg = write_config(dir.path, kSmallConfig);
    CHECK(run("--config " + cfg.string() + " --out " + dir.path.string() +
              " convergence") == 0);
    CHECK(fs::exists(dir.path / "gda_trace.csv"));
    CHECK(fs::exists(dir.path / "sgda_trace.csv"));
    auto summary = nlohmann::json::parse(slurp(dir.path / "convergence_summary.json"));
    CHECK(summary["final_gda_dist"].get<double>() <= 0.05);
    CHECK(summary["kkt"]["stationarity"].get<double>() <= 1e-6);
    // Gamma = 0 configs are rejected for saddle solvers.
    auto cfg0 = write_config(dir.path, R"({"K": 2, "T": 4, "Gamma": 0.0})");
    CHECK(run("--config " + cfg0.string() + " convergence") != 0);
    CHECK(run("--config " + cfg0.string() + " gda") != 0);
}
