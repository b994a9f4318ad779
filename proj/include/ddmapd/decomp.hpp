#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ddmapd/dependency.hpp"
#include "ddmapd/execution.hpp"
#include "ddmapd/instance.hpp"
#include "ddmapd/mapf.hpp"
#include "ddmapd/trajectory.hpp"

namespace ddmapd::decomp {

struct DecompConfig {
    double omega = 1.2;           // suboptimality for both MAPF layers
    int ivf_horizon = 8;          // K: 0 disables look-ahead, < 0 means unbounded
    bool one_robust_trajectories = false;
    bool safe_trajectories = false;  // keep shelf trajectories off agent starts
    double mapf_time_budget_s = 60.0;
    uint64_t seed = 0;
};

// Failure taxonomy used in benchmark bookkeeping:
//   trajectory: the shelf-trajectory MAPF call timed out or found nothing;
//   cycle: a dependency cycle needs more simultaneous carriers than agents;
//   agent_planning: no collision-free paths for free agents were found.
enum class FailureReason { none, trajectory, cycle, agent_planning };

const char* failure_tag(FailureReason r);  // "", "a", "b", "c"

struct RunStats {
    int makespan = 0;
    long long flowtime = 0;
    long long trajectory_moves = 0;
    double total_time_s = 0.0;
    double trajectory_time_s = 0.0;
    double agent_time_s = 0.0;
    int assign_calls = 0;
};

struct RunResult {
    bool success = false;
    FailureReason reason = FailureReason::none;
    ExecutionLog log;
    RunStats stats;
};

enum class AgentType { free_agent, active };

// Execution state: shelf step counters, locations, agent states and the
// planned paths of free agents. Copyable; look-ahead simulation runs on
// plain copies.
struct World {
    const Instance* inst = nullptr;
    const TrajectorySet* traj = nullptr;
    const DependencyGraph* dep = nullptr;

    int now = 0;
    std::vector<int> steps;
    std::vector<Cell> shelf_loc;
    std::vector<Cell> agent_loc;

    struct AgentState {
        AgentType type = AgentType::free_agent;
        int shelf = -1;
        friend bool operator==(const AgentState& a, const AgentState& b) {
            return a.type == b.type && a.shelf == b.shelf;
        }
    };
    std::vector<AgentState> states;

    struct FreePath {
        int t0 = 0;
        std::vector<Cell> cells;  // cells[k] = position at time t0 + k
    };
    std::vector<FreePath> free_paths;

    static World initial(const Instance& inst, const TrajectorySet& traj,
                         const DependencyGraph& dep);

    int num_agents() const { return static_cast<int>(agent_loc.size()); }
    int num_shelves() const { return static_cast<int>(shelf_loc.size()); }
    bool shelf_completed(int j) const {
        return steps[static_cast<size_t>(j)] >=
               traj->trajectories[static_cast<size_t>(j)].last_step();
    }
    bool all_completed() const;
    int assigned_agent(int shelf) const;
    // Unreleased dependencies of the shelf's next trajectory entry.
    int next_unreleased(int j) const {
        return dep->unreleased_out_degree(j, steps[static_cast<size_t>(j)] + 1, steps);
    }
    // True when the single remaining dependency can release simultaneously
    // with this shelf's advance (the blocking shelf sits at the releasing
    // step). Requires exactly one unreleased dependency.
    bool soft_dep(int j) const;

    struct UpdateOutcome {
        bool changed = false;
        std::vector<int> a_sc;       // agents whose shelves are softly constrained
        std::vector<int> a_no_move;  // subset resolved as unable to move
    };
    // Agent state machine for one timestep; see decomp.cpp.
    UpdateOutcome update_states();
    std::vector<int> find_no_move(const std::vector<int>& a_sc) const;

    // Advances one timestep: active agents and their shelves follow the
    // trajectory; free agents follow their planned paths or wait.
    void step();
};

class Solver {
public:
    Solver(const Instance& inst, DecompConfig cfg) : inst_(&inst), cfg_(cfg) {}

    RunResult run();
    // Runs the execution layer on externally supplied trajectories.
    RunResult run_with_trajectories(const TrajectorySet& traj);

    // Shelf-trajectory planning: all shelves become virtual MAPF agents,
    // including those whose delivery equals their pickup.
    static TrajectorySet plan_shelf_trajectories(const Instance& inst, const DecompConfig& cfg,
                                                 mapf::SolveStatus* status = nullptr,
                                                 mapf::SolverStats* stats = nullptr);

    // Assignment and path planning for free agents; public for tests.
    std::optional<FailureReason> assign_and_plan(World& world);

private:
    struct PoolAgent {
        int id;
        int delay;  // timesteps until the agent becomes free (0 = now)
        Cell loc;   // location at that moment
    };
    std::vector<PoolAgent> build_pool(const World& world) const;
    const std::vector<int>& dists_from(const GridMap& map, Cell c);

    const Instance* inst_;
    DecompConfig cfg_;
    std::unordered_map<int, std::vector<int>> bfs_cache_;
};

}  // namespace ddmapd::decomp
