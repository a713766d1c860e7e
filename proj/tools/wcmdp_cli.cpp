// Command-line front end: config ingestion, solver orchestration, parameter
// sweeps and deterministic CSV/JSON persistence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "wcmdp/config.hpp"
#include "wcmdp/exactdp.hpp"
#include "wcmdp/lp.hpp"
#include "wcmdp/saddle.hpp"
#include "wcmdp/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wcmdp;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Atomic persistence: write the whole payload to a sibling temp file, then
// rename over the target.
void write_file(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string measure_csv(const OccupationMeasure& y, const char* value_name) {
    std::string out = "t,s,a,b,";
    out += value_name;
    out += "\n";
    for (int t = 0; t < y.idx.T; ++t)
        for (int s = 0; s <= y.idx.K; ++s)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    out += std::to_string(t) + "," + std::to_string(s) + "," +
                           std::to_string(a) + "," + std::to_string(b) + "," +
                           fmt(y(t, s, a, b)) + "\n";
    return out;
}

std::string trace_csv(const std::vector<IterTrace>& traces) {
    std::string out =
        "iteration,lagrangian,dist_to_ref_frobenius,flow_residual_inf,"
        "max_budget_violation\n";
    for (const auto& tr : traces)
        out += std::to_string(tr.iteration) + "," + fmt(tr.lagrangian) + "," +
               fmt(tr.dist_to_ref) + "," + fmt(tr.flow_residual_inf) + "," +
               fmt(tr.max_budget_violation) + "\n";
    return out;
}

json kkt_json(const KktReport& kkt) {
    return {{"stationarity", kkt.stationarity},
            {"primal_feasibility", kkt.primal_feasibility},
            {"dual_feasibility", kkt.dual_feasibility},
            {"complementarity", kkt.complementarity}};
}

SaddleConfig saddle_config(const RunConfig& cfg) {
    SaddleConfig scfg;
    scfg.Gamma = cfg.Gamma;
    scfg.eta1 = cfg.eta1;
    scfg.eta2 = cfg.eta2;
    scfg.iters = cfg.iters;
    scfg.minibatch_I = cfg.minibatch_I;
    scfg.seed = cfg.seed;
    return scfg;
}

// Loose sanity thresholds for iterative solutions (descent-ascent iterates
// satisfy constraints only in the limit).
bool iterate_ok(const SaddleResult& result) {
    const auto& last = result.traces.back();
    return std::isfinite(last.lagrangian) && last.flow_residual_inf <= 1e-2 &&
           last.max_budget_violation <= 1e-2;
}

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;

    RunConfig load() const {
        RunConfig cfg = config_path.empty() ? parse_config("{}") : load_config(config_path);
        if (seed_set) cfg.seed = seed;
        return cfg;
    }
    fs::path out(const std::string& name) const {
        fs::create_directories(out_dir);
        return fs::path(out_dir) / name;
    }
};

int cmd_kernel(const GlobalArgs& g) {
    auto cfg = g.load();
    auto kernel = compute_kernel(cfg.params, cfg.tail_eps);
    std::string out = "s,s_prime,a,b,prob\n";
    for (int s = 0; s <= cfg.params.K; ++s)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                if (!kernel.admissible(s, a)) continue;
                for (int sp = 0; sp <= cfg.params.K; ++sp) {
                    const double v = kernel(s, sp, a, b);
                    if (v == 0.0) continue;
                    out += std::to_string(s) + "," + std::to_string(sp) + "," +
                           std::to_string(a) + "," + std::to_string(b) + "," + fmt(v) + "\n";
                }
            }
    write_file(g.out("kernel.csv"), out);
    return 0;
}

int cmd_solve_lp(const GlobalArgs& g) {
    auto cfg = g.load();
    auto kernel = compute_kernel(cfg.params, cfg.tail_eps);
    auto inst = build_lp(cfg.params, kernel, cfg.costs);
    auto sol = solve_exact(inst, cfg.Gamma);
    write_file(g.out("lp_solution.csv"), measure_csv(sol.y, "y"));
    auto [pa, ph] = normalized_metrics(sol.y, cfg.params);
    json metrics = {{"objective", sol.objective},
                    {"pi_A_hat", pa},
                    {"pi_H_hat", ph},
                    {"iterations", sol.iterations},
                    {"kkt", kkt_json(sol.kkt)}};
    write_file(g.out("lp_metrics.json"), metrics.dump(2) + "\n");
    return sol.kkt.certified() ? 0 : 1;
}

int cmd_saddle(const GlobalArgs& g, bool stochastic) {
    auto cfg = g.load();
    if (cfg.Gamma <= 0.0) throw ValidationError("Gamma: must be positive for gda/sgda");
    auto kernel = compute_kernel(cfg.params, cfg.tail_eps);
    auto scfg = saddle_config(cfg);
    const SaddleResult result = stochastic ? sgda(cfg.params, cfg.costs, scfg)
                                           : gda(cfg.params, kernel, cfg.costs, scfg);
    const char* name = stochastic ? "sgda" : "gda";
    write_file(g.out(std::string(name) + "_trace.csv"), trace_csv(result.traces));
    write_file(g.out(std::string(name) + "_solution.csv"), measure_csv(result.y, "y"));
    return iterate_ok(result) ? 0 : 1;
}

int cmd_dp_exact(const GlobalArgs& g) {
    auto cfg = g.load();
    auto kernel = compute_kernel(cfg.params, cfg.tail_eps);
    auto dp = dp_solve(cfg.params, kernel, cfg.costs, cfg.N);
    auto lp = solve_exact(build_lp(cfg.params, kernel, cfg.costs), 0.0);
    json out = {{"value", dp.value},
                {"per_queue_value", dp.value / cfg.N},
                {"lp_objective", lp.objective},
                {"gap", dp.value / cfg.N - lp.objective}};
    const std::string text = out.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    write_file(g.out("dp_exact.json"), text);
    return lp.kkt.certified() ? 0 : 1;
}

int cmd_simulate(const GlobalArgs& g, int runs) {
    auto cfg = g.load();
    auto kernel = compute_kernel(cfg.params, cfg.tail_eps);
    auto sol = solve_exact(build_lp(cfg.params, kernel, cfg.costs), cfg.Gamma);
    auto policy = extract_policy(sol.y, cfg.params);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(runs));
    std::iota(seeds.begin(), seeds.end(), cfg.seed);
    auto reports = simulate(policy, cfg.params, cfg.N, seeds);

    double mean_pa = 0.0, mean_ph = 0.0, mean_cost = 0.0, mean_tv = 0.0;
    for (const auto& rep : reports) {
        std::string epoch = "t,rejections,stage_cost\n";
        for (int t = 0; t < cfg.params.T; ++t)
            epoch += std::to_string(t) + "," +
                     std::to_string(rep.rejections[static_cast<std::size_t>(t)]) + "," +
                     fmt(rep.stage_costs[static_cast<std::size_t>(t)]) + "\n";
        const std::string tag = std::to_string(rep.seed);
        write_file(g.out("sim_y_" + tag + ".csv"), measure_csv(rep.y_hat, "y_hat"));
        write_file(g.out("sim_epoch_" + tag + ".csv"), epoch);
        mean_pa += rep.pi_a_hat;
        mean_ph += rep.pi_h_hat;
        mean_cost += rep.avg_cost_per_queue;
        mean_tv += std::get<0>(compare_to_lp(rep, sol.y, cfg.params));
    }
    const double r = static_cast<double>(reports.size());
    auto [pa_lp, ph_lp] = normalized_metrics(sol.y, cfg.params);
    json summary = {{"runs", runs},
                    {"N", cfg.N},
                    {"mean_pi_A_hat", mean_pa / r},
                    {"mean_pi_H_hat", mean_ph / r},
                    {"mean_cost_per_queue", mean_cost / r},
                    {"mean_max_tv_vs_lp", mean_tv / r},
                    {"lp_pi_A_hat", pa_lp},
                    {"lp_pi_H_hat", ph_lp}};
    write_file(g.out("sim_summary.json"), summary.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const GlobalArgs& g, const std::string& param,
              const std::vector<double>& values, const std::string& solver) {
    if (values.empty()) throw ValidationError("sweep: value list must be nonempty");
    std::string out = "param,value,Gamma,objective,pi_A_hat,pi_H_hat,solver,iters,seed,status\n";
    bool any_failed = false;
    for (const double value : values) {
        auto cfg = g.load();
        if (param == "p")
            cfg.params.p = value;
        else if (param == "alpha")
            cfg.params.alpha = value;
        else if (param == "beta")
            cfg.params.beta = value;
        else if (param == "gamma")
            cfg.params.gamma = value;
        else if (param == "Gamma")
            cfg.Gamma = value;
        else
            throw ValidationError("sweep: unknown parameter \"" + param + "\"");

        std::string status = "ok";
        double objective = 0.0, pa = 0.0, ph = 0.0;
        long iters = 0;
        try {
            validate(cfg.params);
            auto kernel = compute_kernel(cfg.params, cfg.tail_eps);
            auto inst = build_lp(cfg.params, kernel, cfg.costs);
            OccupationMeasure y(cfg.params.T, cfg.params.K);
            if (solver == "lp") {
                auto sol = solve_exact(inst, cfg.Gamma);
                if (!sol.kkt.certified()) status = "uncertified";
                y = sol.y;
                objective = sol.objective;
                iters = sol.iterations;
            } else {
                auto scfg = saddle_config(cfg);
                const SaddleResult result = solver == "sgda"
                                                ? sgda(cfg.params, cfg.costs, scfg)
                                                : gda(cfg.params, kernel, cfg.costs, scfg);
                if (!iterate_ok(result)) status = "unconverged";
                y = result.y;
                objective = inst.objective(y);
                iters = cfg.iters;
            }
            std::tie(pa, ph) = normalized_metrics(y, cfg.params);
        } catch (const std::exception& e) {
            status = "error";
            (void)e;
        }
        if (status != "ok") any_failed = true;
        out += param + "," + fmt(value) + "," + fmt(cfg.Gamma) + "," + fmt(objective) +
               "," + fmt(pa) + "," + fmt(ph) + "," + solver + "," + std::to_string(iters) +
               "," + std::to_string(cfg.seed) + "," + status + "\n";
    }
    write_file(g.out("sweep.csv"), out);
    return any_failed ? 1 : 0;
}

int cmd_convergence(const GlobalArgs& g) {
    auto cfg = g.load();
    if (cfg.Gamma <= 0.0) throw ValidationError("Gamma: must be positive for convergence");
    auto kernel = compute_kernel(cfg.params, cfg.tail_eps);
    auto inst = build_lp(cfg.params, kernel, cfg.costs);
    auto reference = solve_exact(inst, cfg.Gamma);

    auto scfg = saddle_config(cfg);
    scfg.reference = &reference.y;
    auto det = gda(cfg.params, kernel, cfg.costs, scfg);
    auto sto = sgda(cfg.params, cfg.costs, scfg);
    write_file(g.out("gda_trace.csv"), trace_csv(det.traces));
    write_file(g.out("sgda_trace.csv"), trace_csv(sto.traces));
    write_file(g.out("gda_solution.csv"), measure_csv(det.y, "y"));
    write_file(g.out("sgda_solution.csv"), measure_csv(sto.y, "y"));

    json summary = {{"lp_objective", reference.objective},
                    {"kkt", kkt_json(reference.kkt)},
                    {"final_gda_dist", det.y.frobenius_distance(reference.y)},
                    {"final_sgda_dist", sto.y.frobenius_distance(reference.y)},
                    {"sgda_vs_gda_dist", sto.y.frobenius_distance(det.y)},
                    {"iters", cfg.iters},
                    {"seed", cfg.seed}};
    write_file(g.out("convergence_summary.json"), summary.dump(2) + "\n");
    return (reference.kkt.certified() && iterate_ok(det) && iterate_ok(sto)) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint load-balancing and auto-scaling policies for parallel queues"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "JSON configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed (overrides config)");

    auto* kernel_cmd = app.add_subcommand("kernel", "dump the transition kernel as CSV");
    auto* lp_cmd = app.add_subcommand("solve-lp", "solve the relaxed LP/QP exactly");
    auto* gda_cmd = app.add_subcommand("gda", "deterministic descent-ascent");
    auto* sgda_cmd = app.add_subcommand("sgda", "stochastic descent-ascent");
    auto* dp_cmd = app.add_subcommand("dp-exact", "tiny-instance joint DP and gap");
    auto* sim_cmd = app.add_subcommand("simulate", "finite-N system simulation");
    int runs = 1;
    sim_cmd->add_option("--runs", runs, "number of seeds (seed, seed+1, ...)")
        ->check(CLI::PositiveNumber);
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep");
    std::string sweep_param, sweep_solver = "lp";
    std::vector<double> sweep_values;
    sweep_cmd->add_option("--param", sweep_param, "swept parameter")
        ->required()
        ->check(CLI::IsMember({"p", "alpha", "beta", "gamma", "Gamma"}));
    sweep_cmd->add_option("--values", sweep_values, "swept values")->required();
    sweep_cmd->add_option("--solver", sweep_solver, "solver")
        ->check(CLI::IsMember({"lp", "gda", "sgda"}));
    auto* conv_cmd = app.add_subcommand("convergence", "gda/sgda traces vs exact solve");

    CLI11_PARSE(app, argc, argv);
    g.seed_set = seed_opt->count() > 0;

    try {
        if (*kernel_cmd) return cmd_kernel(g);
        if (*lp_cmd) return cmd_solve_lp(g);
        if (*gda_cmd) return cmd_saddle(g, false);
        if (*sgda_cmd) return cmd_saddle(g, true);
        if (*dp_cmd) return cmd_dp_exact(g);
        if (*sim_cmd) return cmd_simulate(g, runs);
        if (*sweep_cmd) return cmd_sweep(g, sweep_param, sweep_values, sweep_solver);
        if (*conv_cmd) return cmd_convergence(g);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
