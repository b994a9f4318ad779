#pragma once

// Shared test fixtures. The two-agent, four-shelf running example lives on
// a 5x3 open grid: one shelf steps aside so a second can pass through its
// cell and return afterwards, which exercises the hard/soft dependency
// machinery; a third shelf is a short independent relocation and a fourth
// never moves. The hand-written reference plan completes both agents at
// timestep 7 (flowtime 14).

#include <random>

#include "ddmapd/execution.hpp"
#include "ddmapd/instance.hpp"
#include "ddmapd/trajectory.hpp"

namespace fixtures {

using ddmapd::AgentTrace;
using ddmapd::Cell;
using ddmapd::ExecutionLog;
using ddmapd::GridMap;
using ddmapd::Instance;
using ddmapd::Shelf;
using ddmapd::ShelfTrace;
using ddmapd::Trajectory;
using ddmapd::TrajectorySet;

inline Instance running_example() {
    Instance inst;
    inst.map = GridMap(5, 3);
    inst.agent_starts = {{1, 0}, {0, 4}};
    inst.shelves = {
        Shelf{{1, 2}, {1, 2}},  // steps aside and returns
        Shelf{{1, 3}, {1, 1}},  // passes through the first shelf's cell
        Shelf{{0, 0}, {0, 1}},  // short independent relocation
        Shelf{{2, 0}, {2, 0}},  // never moves
    };
    return inst;
}

inline TrajectorySet running_example_trajectories() {
    TrajectorySet ts;
    ts.trajectories = {
        Trajectory{0, {{1, 2}, {2, 2}, {1, 2}}},
        Trajectory{1, {{1, 3}, {1, 2}, {1, 1}}},
        Trajectory{2, {{0, 0}, {0, 1}}},
        Trajectory{3, {{2, 0}}},
    };
    return ts;
}

inline ExecutionLog running_example_reference_log() {
    ExecutionLog log;
    AgentTrace a0;
    a0.path = {{1, 0}, {0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 3}, {1, 2}, {1, 1}};
    a0.carrying = {-1, 2, -1, -1, -1, 1, 1, -1};
    AgentTrace a1;
    a1.path = {{0, 4}, {0, 3}, {0, 2}, {1, 2}, {2, 2}, {2, 2}, {2, 2}, {1, 2}};
    a1.carrying = {-1, -1, -1, 0, -1, -1, 0, -1};
    log.agents = {a0, a1};
    log.shelves = {
        ShelfTrace{{{1, 2}, {1, 2}, {1, 2}, {1, 2}, {2, 2}, {2, 2}, {2, 2}, {1, 2}}},
        ShelfTrace{{{1, 3}, {1, 3}, {1, 3}, {1, 3}, {1, 3}, {1, 3}, {1, 2}, {1, 1}}},
        ShelfTrace{{{0, 0}, {0, 0}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 1}}},
        ShelfTrace{{{2, 0}, {2, 0}, {2, 0}, {2, 0}, {2, 0}, {2, 0}, {2, 0}, {2, 0}}},
    };
    return log;
}

// Random timed walk used by conflict-scan comparisons.
inline std::vector<Cell> random_walk(const GridMap& map, std::mt19937& rng, int len) {
    int cur = -1;
    while (cur < 0) {
        int v = static_cast<int>(rng() % static_cast<uint32_t>(map.size()));
        if (!map.blocked(map.cell(v))) cur = v;
    }
    std::vector<Cell> path{map.cell(cur)};
    for (int i = 0; i < len; ++i) {
        std::vector<int> opts{cur};
        for (int nb : map.neighbors(cur))
            if (nb >= 0) opts.push_back(nb);
        cur = opts[rng() % opts.size()];
        path.push_back(map.cell(cur));
    }
    return path;
}

}  // namespace fixtures
