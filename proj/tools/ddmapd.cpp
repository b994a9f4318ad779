#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddmapd/baselines.hpp"
#include "ddmapd/bench.hpp"
#include "ddmapd/pp.hpp"
#include "ddmapd/render.hpp"
#include "ddmapd/validate.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    for (const auto& item : split_list(s)) out.push_back(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Double-deck multi-agent pickup and delivery solver and benchmark suite"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a random instance");
    int g_size = 8, g_den = 40, g_agents = 4;
    uint64_t g_seed = 0;
    bool g_wf = false, g_wh = false;
    std::string g_out = "instance.json";
    gen->add_option("--size", g_size, "grid side length");
    gen->add_option("--den", g_den, "pickup cell density in percent");
    gen->add_option("--agents,--n", g_agents, "number of agents");
    gen->add_option("--seed", g_seed, "random seed");
    gen->add_flag("--well-formed", g_wf, "perimeter starts, interior shelves");
    gen->add_flag("--warehouse", g_wh, "fixed 27x27 warehouse layout");
    gen->add_option("--out", g_out, "instance file to write");

    // solve
    auto* solve = app.add_subcommand("solve", "Solve an instance");
    std::string s_instance, s_algo = "ivf", s_out;
    int s_k = 8;
    double s_subopt = 1.2, s_timeout = 60.0;
    uint64_t s_seed = 0;
    solve->add_option("instance", s_instance, "instance file")->required();
    solve->add_option("--algo", s_algo, "nivf | ivf | ivf-r | pp | base | pas");
    solve->add_option("--k", s_k, "involve-future horizon (0 disables, -1 unbounded)");
    solve->add_option("--subopt", s_subopt, "MAPF suboptimality factor (>= 1)");
    solve->add_option("--seed", s_seed, "random seed");
    solve->add_option("--timeout", s_timeout, "per-MAPF-call time budget in seconds");
    solve->add_option("--out", s_out, "execution log file to write");

    // validate
    auto* val = app.add_subcommand("validate", "Validate an execution log");
    std::string v_instance, v_log;
    val->add_option("instance", v_instance, "instance file")->required();
    val->add_option("log", v_log, "execution log file")->required();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
    std::string b_sizes = "8", b_dens = "40", b_agents = "4", b_algos = "ivf";
    int b_reps = 1, b_jobs = 1, b_k = 8;
    double b_subopt = 1.2, b_timeout = 60.0;
    uint64_t b_seed = 0;
    bool b_wf = false;
    std::string b_out, b_raw, b_artifacts;
    bench_cmd->add_option("--sizes", b_sizes, "comma-separated grid sizes");
    bench_cmd->add_option("--den", b_dens, "comma-separated densities (percent)");
    bench_cmd->add_option("--n", b_agents, "comma-separated agent counts");
    bench_cmd->add_option("--algos", b_algos, "comma-separated algorithm tags");
    bench_cmd->add_option("--reps", b_reps, "instances per setting");
    bench_cmd->add_option("--seed", b_seed, "base seed");
    bench_cmd->add_option("--jobs", b_jobs, "parallel workers");
    bench_cmd->add_option("--k", b_k, "involve-future horizon");
    bench_cmd->add_option("--subopt", b_subopt, "MAPF suboptimality factor");
    bench_cmd->add_option("--timeout", b_timeout, "per-MAPF-call time budget (s)");
    bench_cmd->add_flag("--well-formed", b_wf, "use the well-formed generator");
    bench_cmd->add_option("--out", b_out, "aggregated CSV file (default: stdout)");
    bench_cmd->add_option("--raw", b_raw, "per-run CSV file");
    bench_cmd->add_option("--artifacts", b_artifacts, "directory for instances and logs");

    // render
    auto* ren = app.add_subcommand("render", "Render an execution log as SVG frames");
    std::string r_instance, r_log, r_out = "frames";
    int r_px = 24;
    ren->add_option("instance", r_instance, "instance file")->required();
    ren->add_option("log", r_log, "execution log file")->required();
    ren->add_option("--out", r_out, "output directory");
    ren->add_option("--cell-px", r_px, "cell size in pixels");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            ddmapd::bench::GeneratorSpec spec;
            spec.size = g_size;
            spec.den_percent = g_den;
            spec.num_agents = g_agents;
            spec.seed = g_seed;
            spec.well_formed = g_wf;
            spec.warehouse = g_wh;
            auto inst = ddmapd::bench::generate(spec);
            std::string map_path =
                (std::filesystem::path(g_out).parent_path() /
                 (std::filesystem::path(g_out).stem().string() + ".map"))
                    .string();
            inst.save(g_out, map_path);
            std::cout << "wrote " << g_out << " (" << inst.num_agents() << " agents, "
                      << inst.num_shelves() << " shelves)\n";
            return 0;
        }
        if (*solve) {
            if (!ddmapd::bench::algo_known(s_algo)) {
                std::cerr << "unknown algorithm: " << s_algo << "\n";
                return 1;
            }
            if (s_subopt < 1.0) {
                std::cerr << "--subopt must be >= 1\n";
                return 1;
            }
            auto inst = ddmapd::Instance::load(s_instance);
            ddmapd::decomp::DecompConfig cfg;
            cfg.omega = s_subopt;
            cfg.ivf_horizon = s_k;
            cfg.mapf_time_budget_s = s_timeout;
            cfg.seed = s_seed;
            auto res = ddmapd::bench::solve_with_algo(inst, s_algo, cfg);
            if (!res.success) {
                std::cerr << "solve failed, reason (" << ddmapd::decomp::failure_tag(res.reason)
                          << ")\n";
                return 2;
            }
            if (!s_out.empty()) res.log.save(s_out);
            std::cout << "algo=" << s_algo << " makespan=" << res.stats.makespan
                      << " flowtime=" << res.stats.flowtime
                      << " total_time_s=" << res.stats.total_time_s
                      << " agent_time_ms=" << res.stats.agent_time_s * 1000.0
                      << " trajectory_moves=" << res.stats.trajectory_moves << "\n";
            return 0;
        }
        if (*val) {
            auto inst = ddmapd::Instance::load(v_instance);
            auto log = ddmapd::ExecutionLog::load(v_log);
            auto rep = ddmapd::validate(inst, log);
            std::cout << rep.summary();
            if (!rep.structural_ok) return 3;
            return rep.violations.empty() ? 0 : 3;
        }
        if (*bench_cmd) {
            std::vector<ddmapd::bench::GeneratorSpec> specs;
            for (int size : split_ints(b_sizes))
                for (int den : split_ints(b_dens))
                    for (int n : split_ints(b_agents)) {
                        ddmapd::bench::GeneratorSpec s;
                        s.size = size;
                        s.den_percent = den;
                        s.num_agents = n;
                        s.seed = b_seed;
                        s.well_formed = b_wf;
                        specs.push_back(s);
                    }
            auto algos = split_list(b_algos);
            for (const auto& a : algos)
                if (!ddmapd::bench::algo_known(a)) {
                    std::cerr << "unknown algorithm: " << a << "\n";
                    return 1;
                }
            ddmapd::bench::SuiteOptions opts;
            opts.repetitions = b_reps;
            opts.jobs = b_jobs;
            opts.artifact_dir = b_artifacts;
            opts.config.omega = b_subopt;
            opts.config.ivf_horizon = b_k;
            opts.config.mapf_time_budget_s = b_timeout;
            auto records = ddmapd::bench::run_suite(specs, algos, opts);
            std::string csv = ddmapd::bench::aggregate_csv(records);
            if (b_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream(b_out) << csv;
            }
            if (!b_raw.empty()) std::ofstream(b_raw) << ddmapd::bench::raw_csv(records);
            return 0;
        }
        if (*ren) {
            auto inst = ddmapd::Instance::load(r_instance);
            auto log = ddmapd::ExecutionLog::load(r_log);
            int frames = ddmapd::render::write_frames(inst, log, r_out, r_px);
            std::cout << "wrote " << frames << " frames to " << r_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
