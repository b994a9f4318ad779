#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "ddmapd/baselines.hpp"
#include "ddmapd/bench.hpp"
#include "ddmapd/validate.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace ddmapd;
using namespace ddmapd::baselines;

namespace {

// True when agent 0 is the only agent that ever moves.
bool single_mover(const ExecutionLog& log) {
    for (size_t i = 1; i < log.agents.size(); ++i)
        for (size_t t = 1; t < log.agents[i].path.size(); ++t)
            if (log.agents[i].path[t] != log.agents[i].path[t - 1]) return false;
    return true;
}

}  // namespace

TEST_CASE("base: one adjacent relocation costs travel plus one") {
    Instance inst;
    inst.map = GridMap(6, 1);
    inst.agent_starts = {{0, 0}};
    inst.shelves = {Shelf{{0, 2}, {0, 3}}};
    auto res = run_base(inst, {});
    REQUIRE(res.success);
    CHECK(validate(inst, res.log).clean());
    CHECK(res.stats.makespan == 3);  // two travel steps, one carried step
}

TEST_CASE("base: nothing to relocate gives makespan 0") {
    Instance inst;
    inst.map = GridMap(4, 4);
    inst.agent_starts = {{0, 0}, {3, 3}};
    inst.shelves = {Shelf{{1, 1}, {1, 1}}, Shelf{{2, 2}, {2, 2}}};
    auto res = run_base(inst, {});
    REQUIRE(res.success);
    CHECK(res.stats.makespan == 0);
}

TEST_CASE("base: lockstep order is respected") {
    Instance inst = fixtures::running_example();
    auto res = run_base(inst, {});
    REQUIRE(res.success);
    CHECK(validate(inst, res.log).clean());
    CHECK(single_mover(res.log));
    // Lockstep: realized time of any shelf's trajectory step s precedes
    // every shelf's step s+1. Reconstruct realized step times from the log.
    auto traj = decomp::Solver::plan_shelf_trajectories(
        inst, [] {
            decomp::DecompConfig c;
            c.one_robust_trajectories = true;
            c.safe_trajectories = true;
            return c;
        }());
    REQUIRE(!traj.trajectories.empty());
    std::vector<int> last_time_of_step(16, -1);
    int max_done = 0;
    for (int j = 0; j < inst.num_shelves(); ++j) {
        const auto& entries = traj.trajectories[static_cast<size_t>(j)].entries;
        const auto& path = res.log.shelves[static_cast<size_t>(j)].path;
        size_t k = 0;
        for (size_t t = 1; t < path.size(); ++t) {
            if (path[t] != path[t - 1]) {
                // this realized move is trajectory step k+1
                ++k;
                while (k < entries.size() - 1 && entries[k + 1] == entries[k]) ++k;
                if (k < 16)
                    last_time_of_step[k] = std::max(last_time_of_step[k], static_cast<int>(t));
                max_done = std::max(max_done, static_cast<int>(k));
            }
        }
    }
    (void)max_done;
    int prev = -1;
    for (int s = 1; s < 16; ++s) {
        if (last_time_of_step[static_cast<size_t>(s)] < 0) continue;
        CHECK(last_time_of_step[static_cast<size_t>(s)] > prev);
        prev = last_time_of_step[static_cast<size_t>(s)];
    }
}

TEST_CASE("pas: one straight-line shelf is one contiguous carry") {
    Instance inst;
    inst.map = GridMap(6, 2);
    inst.agent_starts = {{1, 0}};
    inst.shelves = {Shelf{{0, 1}, {0, 4}}};
    auto res = run_pas(inst, {});
    REQUIRE(res.success);
    CHECK(validate(inst, res.log).clean());
    // travel to (0,1): 2 steps, then 3 carried moves
    CHECK(res.stats.makespan == 5);
}

TEST_CASE("pas: rotation of three shelves validates segment by segment") {
    Instance inst;
    inst.map = GridMap(3, 2);  // 6-cycle
    inst.agent_starts = {{1, 0}};
    inst.shelves = {Shelf{{0, 0}, {0, 1}}, Shelf{{0, 1}, {0, 2}}, Shelf{{0, 2}, {1, 2}}};
    auto res = run_pas(inst, {});
    REQUIRE(res.success);
    CHECK(validate(inst, res.log).clean());
    CHECK(single_mover(res.log));
}

TEST_CASE("pas vs base on a small dense instance") {
    bench::GeneratorSpec spec;
    spec.size = 8;
    spec.den_percent = 20;
    spec.num_agents = 1;
    spec.seed = 17;
    spec.well_formed = true;
    Instance inst = bench::generate_well_formed(spec);
    decomp::DecompConfig cfg;
    cfg.omega = 1.2;
    auto base = run_base(inst, cfg);
    auto pas = run_pas(inst, cfg);
    REQUIRE(base.success);
    REQUIRE(pas.success);
    CHECK(validate(inst, base.log).clean());
    CHECK(validate(inst, pas.log).clean());
    CHECK(single_mover(base.log));
    CHECK(single_mover(pas.log));
}

TEST_CASE("segment extraction reproduces compressed trajectories") {
    mapf::MapfProblem p;
    GridMap map(5, 5);
    p.map = &map;
    p.starts = {{0, 0}, {1, 1}};
    p.goals = {{0, 3}, {3, 1}};
    auto seq = mapf::solve_push_and_swap(p);
    REQUIRE(seq.solved());
    auto order = extract_segments(seq);
    std::vector<std::vector<Cell>> concat(2);
    concat[0].push_back(p.starts[0]);
    concat[1].push_back(p.starts[1]);
    for (const auto& seg : order.segments)
        for (size_t c = 1; c < seg.cells.size(); ++c)
            concat[static_cast<size_t>(seg.shelf)].push_back(seg.cells[c]);
    for (size_t j = 0; j < 2; ++j) {
        std::vector<Cell> compressed{seq.paths[j].front()};
        for (size_t t = 1; t < seq.paths[j].size(); ++t)
            if (seq.paths[j][t] != seq.paths[j][t - 1]) compressed.push_back(seq.paths[j][t]);
        CHECK(concat[j] == compressed);
    }
}
