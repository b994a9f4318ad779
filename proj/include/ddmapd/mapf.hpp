#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "ddmapd/grid.hpp"

namespace ddmapd::mapf {

struct VertexBan {
    Cell cell;
    int t;
};

struct EdgeBan {
    Cell from;
    Cell to;
    int t;  // move departing at t, arriving t+1
};

// A multi-agent path finding problem over virtual agents (shelves or free
// agents). Frozen paths are hard moving obstacles with the usual padding
// rule (parked at their final cell forever).
struct MapfProblem {
    const GridMap* map = nullptr;
    std::vector<Cell> starts;
    std::vector<Cell> goals;

    bool one_robust = false;                 // forbid entering any just-vacated cell
    std::vector<Cell> forbidden_cells;       // safe mode: cells no path may touch
    std::vector<std::vector<Cell>> frozen_paths;
    std::vector<VertexBan> vertex_bans;
    std::vector<EdgeBan> edge_bans;

    double omega = 1.0;        // suboptimality factor, >= 1
    double time_budget_s = 60.0;
};

enum class SolveStatus { solved, timeout, unsolvable };

struct SolverStats {
    long long low_level_expanded = 0;
    long long high_level_nodes = 0;
    double runtime_s = 0.0;
    int failed_agent = -1;  // prioritized planning: the agent with no path
};

// One carried stretch of a sequential solution: shelf `agent` performs
// `length` consecutive moves starting at global move index `order`.
struct SolutionSegment {
    int agent = -1;
    int order = 0;
    int length = 0;
};

struct MapfSolution {
    SolveStatus status = SolveStatus::unsolvable;
    std::vector<std::vector<Cell>> paths;  // index 0 = start
    long long cost = 0;                    // flowtime: sum of arrival times
    SolverStats stats;
    std::vector<SolutionSegment> segments;  // sequential solvers only

    bool solved() const { return status == SolveStatus::solved; }
};

// Bounded-suboptimal conflict-based search: high-level focal search on
// conflict counts within an omega bound of the best open lower bound,
// low-level space-time A* breaking ties toward fewer conflicts.
MapfSolution solve_cbs(const MapfProblem& problem);

// Space-time A* per agent in priority order; earlier agents become moving
// obstacles for later ones. Fast and incomplete.
MapfSolution solve_prioritized(const MapfProblem& problem, const std::vector<int>& order);

// Sequential pebble-motion solver: one agent moves per timestep, always
// into an empty cell, so the result is 1-robust by construction. Requires
// at least two unoccupied vertices. Tags the carried stretches as segments.
MapfSolution solve_push_and_swap(const MapfProblem& problem);

struct MultiLabelQuery {
    const GridMap* map = nullptr;
    Cell agent_start{};              // search origin (current agent cell)
    std::vector<Cell> segment;       // segment[0] = shelf cell, then forced entries
    std::vector<int> min_arrival;    // earliest absolute time each entry may be occupied
    Cell home{};                     // final destination; the path parks there
    int t0 = 0;                      // absolute start time
    const std::vector<std::vector<Cell>>* frozen_paths = nullptr;  // absolute time 0 based
    int max_t = std::numeric_limits<int>::max();
};

struct MultiLabelPath {
    std::vector<Cell> cells;  // cells[k] is the position at absolute time t0 + k
    int t0 = 0;
    int lift_index = 0;   // index into cells where the carry begins
    int place_index = 0;  // index where the carry ends (segment.back())
};

// Time-minimal path visiting: the shelf cell, the trajectory segment
// executed verbatim with no inserted waits, then home, avoiding all frozen
// paths and parking at home.
std::optional<MultiLabelPath> multi_label_astar(const MultiLabelQuery& query);

// Default horizon bound guaranteeing termination.
inline int horizon_bound(const GridMap& map, int num_agents) {
    long long b = static_cast<long long>(map.size()) * (num_agents + 1);
    return static_cast<int>(std::min<long long>(b, 8'000'000));
}

}  // namespace ddmapd::mapf
