#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddmapd/decomp.hpp"
#include "ddmapd/instance.hpp"

namespace ddmapd::bench {

struct GeneratorSpec {
    int size = 8;          // n x n grid
    int den_percent = 40;  // pickup cells as % of all cells
    int num_agents = 4;
    uint64_t seed = 0;
    bool well_formed = false;
    bool warehouse = false;
};

// Random instance: pickup cells laid out as 2x2 blocks until
// floor(den * n^2) cells exist (the last block may be partial); exactly
// floor(0.1 * n^2) shelves relocate to delivery cells sampled from
// non-pickup cells; agent starts drawn from the remaining free cells.
Instance generate_random(const GeneratorSpec& spec);

// As generate_random, but shelf blocks and deliveries stay strictly off the
// perimeter and agent starts sit on the perimeter (corners excluded, and
// never both neighbors of one corner).
Instance generate_well_formed(const GeneratorSpec& spec);

// Fixed 27x27 layout: 8x4 blocks of 5x2 shelves (320 shelves), 32 agents on
// the perimeter. Delivery cells are the diagonal reflection of the pickup
// cells, shuffled by seed.
Instance generate_warehouse(const GeneratorSpec& spec);

Instance generate(const GeneratorSpec& spec);

// Known algorithm tags: nivf, ivf, ivf-r, pp, base, pas.
bool algo_known(const std::string& algo);
decomp::RunResult solve_with_algo(const Instance& inst, const std::string& algo,
                                  decomp::DecompConfig cfg);

struct RunRecord {
    GeneratorSpec spec;
    std::string algo;
    int shelf_count = 0;
    bool success = false;
    std::string failure_reason;  // "a" / "b" / "c" / ""
    int makespan = 0;
    long long flowtime = 0;
    long long trajectory_moves = 0;
    double total_time_s = 0;
    double agent_time_s = 0;
    double omega = 0;
};

struct SuiteOptions {
    int repetitions = 1;
    int jobs = 1;
    std::string artifact_dir;  // when set, per-run instances/logs are saved
    decomp::DecompConfig config;
};

// Runs |specs| x |algos| x repetitions cells; rep r uses seed spec.seed + r.
std::vector<RunRecord> run_suite(const std::vector<GeneratorSpec>& specs,
                                 const std::vector<std::string>& algos,
                                 const SuiteOptions& opts);

// Mean-per-cell CSV; means are computed over solved runs only and failure
// reasons are tallied per cell.
std::string aggregate_csv(const std::vector<RunRecord>& records);
std::string raw_csv(const std::vector<RunRecord>& records);

}  // namespace ddmapd::bench
