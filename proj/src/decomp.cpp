#include "ddmapd/decomp.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <functional>
#include <map>
#include <set>

#include "ddmapd/hungarian.hpp"

namespace ddmapd::decomp {

const char* failure_tag(FailureReason r) {
    switch (r) {
        case FailureReason::none: return "";
        case FailureReason::trajectory: return "a";
        case FailureReason::cycle: return "b";
        case FailureReason::agent_planning: return "c";
    }
    return "";
}

World World::initial(const Instance& inst, const TrajectorySet& traj,
                     const DependencyGraph& dep) {
    World w;
    w.inst = &inst;
    w.traj = &traj;
    w.dep = &dep;
    w.steps.assign(static_cast<size_t>(inst.num_shelves()), 0);
    for (const auto& s : inst.shelves) w.shelf_loc.push_back(s.pickup);
    w.agent_loc = inst.agent_starts;
    w.states.assign(static_cast<size_t>(inst.num_agents()), {});
    w.free_paths.assign(static_cast<size_t>(inst.num_agents()), {});
    return w;
}

bool World::all_completed() const {
    for (int j = 0; j < num_shelves(); ++j)
        if (!shelf_completed(j)) return false;
    return true;
}

int World::assigned_agent(int shelf) const {
    for (int i = 0; i < num_agents(); ++i)
        if (states[static_cast<size_t>(i)].shelf == shelf) return i;
    return -1;
}

bool World::soft_dep(int j) const {
    auto e = dep->single_unreleased_out(j, steps[static_cast<size_t>(j)] + 1, steps);
    if (!e) return false;
    return steps[static_cast<size_t>(e->to_shelf)] == e->to_step - 1;
}

// The per-timestep agent state machine. A free agent standing at its
// assigned shelf lifts it when the next entry is unconstrained, joins the
// soft-candidate set when the single dependency may release simultaneously,
// and is otherwise unassigned. An active agent is freed on completion or on
// a hard dependency. Soft candidates are then resolved together: chains
// ending at an uncarried shelf cannot move, cycles and chains ending at a
// carried shelf advance as a group.
World::UpdateOutcome World::update_states() {
    UpdateOutcome out;
    auto before = states;
    for (int i = 0; i < num_agents(); ++i) {
        auto& st = states[static_cast<size_t>(i)];
        int j = st.shelf;
        int num_deps = 0;
        bool is_soft = false;
        if (j >= 0 && !shelf_completed(j)) {
            num_deps = next_unreleased(j);
            is_soft = num_deps == 1 && soft_dep(j);
        }
        if (st.type == AgentType::free_agent) {
            if (j < 0) continue;
            if (shelf_completed(j)) {  // assigned while en route, done meanwhile
                st.shelf = -1;
                continue;
            }
            if (agent_loc[static_cast<size_t>(i)] != shelf_loc[static_cast<size_t>(j)]) continue;
            if (is_soft)
                out.a_sc.push_back(i);
            else if (num_deps >= 1)
                st.shelf = -1;
            else
                st.type = AgentType::active;
        } else {
            if (j < 0 || shelf_completed(j)) {
                st.shelf = -1;
                st.type = AgentType::free_agent;
            } else if (is_soft) {
                out.a_sc.push_back(i);
            } else if (num_deps >= 1) {
                st.shelf = -1;
                st.type = AgentType::free_agent;
            }
        }
    }
    out.a_no_move = find_no_move(out.a_sc);
    for (int i : out.a_sc) {
        bool blocked = std::find(out.a_no_move.begin(), out.a_no_move.end(), i) !=
                       out.a_no_move.end();
        if (blocked) {
            states[static_cast<size_t>(i)].shelf = -1;
            states[static_cast<size_t>(i)].type = AgentType::free_agent;
        } else {
            states[static_cast<size_t>(i)].type = AgentType::active;
        }
    }
    out.changed = !(states == before);
    return out;
}

std::vector<int> World::find_no_move(const std::vector<int>& a_sc) const {
    // Next entries of softly constrained shelves form chains and cycles
    // (each has exactly one unreleased out-edge). Follow the chain; the
    // verdict at the terminal propagates back.
    std::map<int, int> agent_of;  // shelf -> a_sc agent
    for (int i : a_sc) agent_of[states[static_cast<size_t>(i)].shelf] = i;
    enum { kUnknown = 0, kOnStack, kMoves, kBlocked };
    std::map<int, int> color;
    std::function<int(int)> verdict = [&](int j) -> int {
        auto& c = color[j];
        if (c == kMoves || c == kBlocked) return c;
        if (c == kOnStack) return kMoves;  // cycle: simultaneous rotation
        c = kOnStack;
        auto e = dep->single_unreleased_out(j, steps[static_cast<size_t>(j)] + 1, steps);
        int res;
        if (!e) {
            res = kMoves;  // dependency released since classification
        } else if (agent_of.count(e->to_shelf) &&
                   steps[static_cast<size_t>(e->to_shelf)] + 1 == e->to_step) {
            res = verdict(e->to_shelf);
        } else {
            int carrier = assigned_agent(e->to_shelf);
            bool carried = carrier >= 0 &&
                           states[static_cast<size_t>(carrier)].type == AgentType::active;
            res = carried ? kMoves : kBlocked;
        }
        c = res;
        return res;
    };
    std::vector<int> blocked;
    for (int i : a_sc)
        if (verdict(states[static_cast<size_t>(i)].shelf) == kBlocked) blocked.push_back(i);
    return blocked;
}

void World::step() {
    ++now;
    for (int i = 0; i < num_agents(); ++i) {
        auto& st = states[static_cast<size_t>(i)];
        if (st.type == AgentType::active) {
            int j = st.shelf;
            int& k = steps[static_cast<size_t>(j)];
            ++k;
            Cell c = traj->trajectories[static_cast<size_t>(j)].entries[static_cast<size_t>(k)];
            agent_loc[static_cast<size_t>(i)] = c;
            shelf_loc[static_cast<size_t>(j)] = c;
        } else {
            const auto& fp = free_paths[static_cast<size_t>(i)];
            int idx = now - fp.t0;
            if (idx >= 1 && idx < static_cast<int>(fp.cells.size()))
                agent_loc[static_cast<size_t>(i)] = fp.cells[static_cast<size_t>(idx)];
            // otherwise wait in place
        }
    }
}

TrajectorySet Solver::plan_shelf_trajectories(const Instance& inst, const DecompConfig& cfg,
                                              mapf::SolveStatus* status,
                                              mapf::SolverStats* stats) {
    mapf::MapfProblem p;
    p.map = &inst.map;
    for (const auto& s : inst.shelves) {
        p.starts.push_back(s.pickup);
        p.goals.push_back(s.delivery);
    }
    p.one_robust = cfg.one_robust_trajectories;
    if (cfg.safe_trajectories) p.forbidden_cells = inst.agent_starts;
    p.omega = cfg.omega;

    // Conflict-based search gets half of the budget; prioritized planning
    // with move-to-front reshuffles uses the rest when it fails.
    auto t0 = std::chrono::steady_clock::now();
    auto remaining = [&] {
        return cfg.mapf_time_budget_s -
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    p.time_budget_s = cfg.mapf_time_budget_s / 2;
    auto sol = mapf::solve_cbs(p);
    if (!sol.solved()) {
        std::vector<int> order(static_cast<size_t>(inst.num_shelves()));
        for (int j = 0; j < inst.num_shelves(); ++j) order[static_cast<size_t>(j)] = j;
        for (int attempt = 0; attempt < 2 * inst.num_shelves(); ++attempt) {
            double left = remaining();
            if (left <= 0.05) break;
            p.time_budget_s = left;
            auto pri = mapf::solve_prioritized(p, order);
            if (pri.solved()) {
                sol = std::move(pri);
                break;
            }
            int failed = pri.stats.failed_agent;
            if (failed < 0 || pri.status == mapf::SolveStatus::timeout) break;
            auto it = std::find(order.begin(), order.end(), failed);
            order.erase(it);
            order.insert(order.begin(), failed);
        }
    }
    if (status) *status = sol.status;
    if (stats) *stats = sol.stats;
    TrajectorySet ts;
    if (!sol.solved()) return ts;
    for (int j = 0; j < inst.num_shelves(); ++j)
        ts.trajectories.push_back({j, std::move(sol.paths[static_cast<size_t>(j)])});
    ts.is_1robust = cfg.one_robust_trajectories;
    ts.is_safe = cfg.safe_trajectories;
    return ts;
}

const std::vector<int>& Solver::dists_from(const GridMap& map, Cell c) {
    int idx = map.index(c);
    auto it = bfs_cache_.find(idx);
    if (it != bfs_cache_.end()) return it->second;
    return bfs_cache_.emplace(idx, map.bfs_distances(idx)).first->second;
}

std::vector<Solver::PoolAgent> Solver::build_pool(const World& world) const {
    std::vector<PoolAgent> pool;
    for (int i = 0; i < world.num_agents(); ++i)
        if (world.states[static_cast<size_t>(i)].type == AgentType::free_agent)
            pool.push_back({i, 0, world.agent_loc[static_cast<size_t>(i)]});
    if (cfg_.ivf_horizon == 0) return pool;

    // Involve-future look-ahead: simulate the world and pick up active
    // agents that become free within the horizon; their assignment cost is
    // offset by the time until they free up.
    World sim = world;
    for (auto& fp : sim.free_paths) fp = {};  // free agents hold still
    long long cap = 8;
    for (const auto& t : world.traj->trajectories) cap += t.last_step();
    int limit = cfg_.ivf_horizon > 0 ? cfg_.ivf_horizon + 1
                                     : static_cast<int>(std::min<long long>(cap, 1 << 20));
    for (int delta = 1; delta <= limit; ++delta) {
        auto prev_states = sim.states;
        auto prev_steps = sim.steps;
        auto prev_locs = sim.agent_loc;
        sim.update_states();
        for (int i = 0; i < sim.num_agents(); ++i) {
            if (prev_states[static_cast<size_t>(i)].type == AgentType::active &&
                sim.states[static_cast<size_t>(i)].type == AgentType::free_agent)
                pool.push_back({i, delta - 1, sim.agent_loc[static_cast<size_t>(i)]});
        }
        sim.step();
        if (sim.steps == prev_steps && sim.states == prev_states && sim.agent_loc == prev_locs)
            break;  // quiescent
    }
    return pool;
}

namespace {

// Shelves whose next entries form a dependency cycle closed under all their
// unreleased dependencies; such a group can only advance simultaneously.
// Returns groups as sorted shelf lists.
std::vector<std::vector<int>> closed_cycle_groups(const World& w, const std::vector<char>& eligible) {
    const int M = w.num_shelves();
    // candidate vertices: eligible shelves with >= 1 unreleased dep
    std::vector<int> comp(static_cast<size_t>(M), -1);
    // Map next-entry targets to shelves: edge j -> j2 exists when an
    // unreleased out-edge of j's next entry targets j2's next entry.
    std::vector<std::vector<int>> adj(static_cast<size_t>(M));
    std::vector<char> in_graph(static_cast<size_t>(M), 0);
    std::vector<char> external_dep(static_cast<size_t>(M), 0);
    for (int j = 0; j < M; ++j) {
        if (!eligible[static_cast<size_t>(j)] || w.shelf_completed(j)) continue;
        in_graph[static_cast<size_t>(j)] = 1;
        for (int id : w.dep->out_edge_ids(j, w.steps[static_cast<size_t>(j)] + 1)) {
            if (w.dep->released(id, w.steps)) continue;
            const DepEdge& e = w.dep->edge(id);
            bool internal = eligible[static_cast<size_t>(e.to_shelf)] &&
                            !w.shelf_completed(e.to_shelf) &&
                            w.steps[static_cast<size_t>(e.to_shelf)] + 1 == e.to_step;
            if (internal)
                adj[static_cast<size_t>(j)].push_back(e.to_shelf);
            else
                external_dep[static_cast<size_t>(j)] = 1;
        }
    }
    // Tarjan SCC (iterative).
    std::vector<int> index(static_cast<size_t>(M), -1), low(static_cast<size_t>(M), 0);
    std::vector<char> on_stack(static_cast<size_t>(M), 0);
    std::vector<int> stack;
    int counter = 0, comp_count = 0;
    std::function<void(int)> strongconnect = [&](int v) {
        index[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = counter++;
        stack.push_back(v);
        on_stack[static_cast<size_t>(v)] = 1;
        for (int u : adj[static_cast<size_t>(v)]) {
            if (!in_graph[static_cast<size_t>(u)]) continue;
            if (index[static_cast<size_t>(u)] < 0) {
                strongconnect(u);
                low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], low[static_cast<size_t>(u)]);
            } else if (on_stack[static_cast<size_t>(u)]) {
                low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], index[static_cast<size_t>(u)]);
            }
        }
        if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
            while (true) {
                int u = stack.back();
                stack.pop_back();
                on_stack[static_cast<size_t>(u)] = 0;
                comp[static_cast<size_t>(u)] = comp_count;
                if (u == v) break;
            }
            ++comp_count;
        }
    };
    for (int j = 0; j < M; ++j)
        if (in_graph[static_cast<size_t>(j)] && index[static_cast<size_t>(j)] < 0) strongconnect(j);

    std::vector<std::vector<int>> groups(static_cast<size_t>(comp_count));
    for (int j = 0; j < M; ++j)
        if (in_graph[static_cast<size_t>(j)] && comp[static_cast<size_t>(j)] >= 0)
            groups[static_cast<size_t>(comp[static_cast<size_t>(j)])].push_back(j);

    std::vector<std::vector<int>> out;
    for (auto& g : groups) {
        if (g.size() < 2) continue;
        // Every member must have all unreleased deps inside its own group
        // and at least one dep (true by construction of the SCC edges).
        bool closed = true;
        for (int j : g) {
            if (external_dep[static_cast<size_t>(j)]) { closed = false; break; }
            for (int id : w.dep->out_edge_ids(j, w.steps[static_cast<size_t>(j)] + 1)) {
                if (w.dep->released(id, w.steps)) continue;
                int j2 = w.dep->edge(id).to_shelf;
                if (comp[static_cast<size_t>(j2)] != comp[static_cast<size_t>(j)]) { closed = false; break; }
            }
            if (!closed) break;
        }
        if (!closed) continue;
        std::sort(g.begin(), g.end());
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::optional<FailureReason> Solver::assign_and_plan(World& world) {
    const Instance& inst = *inst_;
    const GridMap& map = inst.map;
    const int N = world.num_agents();
    const int M = world.num_shelves();

    // Assignments of traveling free agents are tentative; redo them all.
    for (int i = 0; i < N; ++i) {
        auto& st = world.states[static_cast<size_t>(i)];
        if (st.type == AgentType::free_agent) st.shelf = -1;
    }

    // Active agents' remaining trajectory portions are hard moving
    // obstacles for every path planned in this call.
    std::vector<std::vector<Cell>> committed;
    for (int i = 0; i < N; ++i) {
        const auto& st = world.states[static_cast<size_t>(i)];
        if (st.type != AgentType::active) continue;
        const auto& entries = world.traj->trajectories[static_cast<size_t>(st.shelf)].entries;
        committed.emplace_back(entries.begin() + world.steps[static_cast<size_t>(st.shelf)],
                               entries.end());
    }
    const size_t active_tails = committed.size();

    auto pool = build_pool(world);
    std::vector<char> reserved(static_cast<size_t>(M), 0);
    std::vector<std::pair<int, Cell>> planned_targets;  // agent, goal cell

    auto assigned_somewhere = [&](int j) { return world.assigned_agent(j) >= 0; };

    struct Candidate {
        int shelf;
        int ready;  // timesteps until first executable (0 = now)
    };

    int rounds = std::max(1, M);
    bool any_real_pool = true;
    while (rounds-- > 0 && any_real_pool && !pool.empty()) {
        // Step 1: shelves executable right now.
        std::vector<Candidate> cands;
        std::vector<char> eligible(static_cast<size_t>(M), 0);
        for (int j = 0; j < M; ++j)
            eligible[static_cast<size_t>(j)] =
                !world.shelf_completed(j) && !assigned_somewhere(j) && !reserved[static_cast<size_t>(j)];
        for (int j = 0; j < M; ++j)
            if (eligible[static_cast<size_t>(j)] && world.next_unreleased(j) == 0)
                cands.push_back({j, 0});

        // Step 2: simulate the committed motion; shelves released during it
        // become candidates with their release delay as readiness.
        if (cands.empty()) {
            World sim = world;
            long long cap = 8;
            for (const auto& t : world.traj->trajectories) cap += t.last_step();
            for (const auto& fp : world.free_paths) cap += static_cast<long long>(fp.cells.size());
            for (int delta = 1; delta <= cap; ++delta) {
                auto prev_steps = sim.steps;
                auto prev_states = sim.states;
                auto prev_locs = sim.agent_loc;
                sim.update_states();
                sim.step();
                for (int j = 0; j < M; ++j)
                    if (eligible[static_cast<size_t>(j)] && !sim.shelf_completed(j) &&
                        world.dep->unreleased_out_degree(j, sim.steps[static_cast<size_t>(j)] + 1,
                                                         sim.steps) == 0)
                        cands.push_back({j, delta});
                if (!cands.empty()) break;
                if (sim.steps == prev_steps && sim.states == prev_states &&
                    sim.agent_loc == prev_locs)
                    break;
            }
        }

        // Step 3: dependency cycles among unassigned shelves; all members
        // can only move simultaneously, so offer the whole group.
        if (cands.empty()) {
            auto groups = closed_cycle_groups(world, eligible);
            for (const auto& g : groups) {
                if (static_cast<int>(g.size()) > N) return FailureReason::cycle;
                for (int j : g) cands.push_back({j, 0});
            }
        }
        if (cands.empty()) break;

        // Hungarian assignment over the pool (current and future agents).
        CostMatrix cm;
        cm.rows = static_cast<int>(pool.size());
        cm.cols = static_cast<int>(cands.size());
        cm.cost.assign(static_cast<size_t>(cm.rows) * cm.cols, kUnreachableCost);
        for (int r = 0; r < cm.rows; ++r) {
            const auto& d = dists_from(map, pool[static_cast<size_t>(r)].loc);
            for (int c = 0; c < cm.cols; ++c) {
                int cell = map.index(world.shelf_loc[static_cast<size_t>(cands[static_cast<size_t>(c)].shelf)]);
                if (d[static_cast<size_t>(cell)] < 0) continue;
                long long travel = d[static_cast<size_t>(cell)] + pool[static_cast<size_t>(r)].delay;
                cm.at(r, c) = std::max(travel, static_cast<long long>(cands[static_cast<size_t>(c)].ready));
            }
        }
        auto match = hungarian(cm);

        std::vector<int> round_agents;
        std::vector<Cell> round_goals;
        std::vector<size_t> drop_pool;
        for (int r = 0; r < cm.rows; ++r) {
            int c = match.match[static_cast<size_t>(r)];
            if (c < 0) continue;
            int shelf = cands[static_cast<size_t>(c)].shelf;
            drop_pool.push_back(static_cast<size_t>(r));
            if (pool[static_cast<size_t>(r)].delay > 0) {
                reserved[static_cast<size_t>(shelf)] = 1;  // held for the future agent
            } else {
                int agent = pool[static_cast<size_t>(r)].id;
                world.states[static_cast<size_t>(agent)].shelf = shelf;
                round_agents.push_back(agent);
                round_goals.push_back(world.shelf_loc[static_cast<size_t>(shelf)]);
            }
        }
        if (drop_pool.empty()) break;  // nothing assignable
        for (auto it = drop_pool.rbegin(); it != drop_pool.rend(); ++it)
            pool.erase(pool.begin() + static_cast<long>(*it));

        if (!round_agents.empty()) {
            mapf::MapfProblem p;
            p.map = &map;
            for (size_t a = 0; a < round_agents.size(); ++a) {
                p.starts.push_back(world.agent_loc[static_cast<size_t>(round_agents[a])]);
                p.goals.push_back(round_goals[a]);
            }
            p.frozen_paths = committed;
            p.omega = cfg_.omega;
            p.time_budget_s = cfg_.mapf_time_budget_s;
            auto sol = mapf::solve_cbs(p);
            if (!sol.solved()) return FailureReason::agent_planning;
            for (size_t a = 0; a < round_agents.size(); ++a) {
                int agent = round_agents[a];
                world.free_paths[static_cast<size_t>(agent)] = {world.now, sol.paths[a]};
                committed.push_back(std::move(sol.paths[a]));
                planned_targets.push_back({agent, round_goals[a]});
            }
        }
        any_real_pool = false;
        for (const auto& pa : pool) any_real_pool = any_real_pool || pa.delay == 0;
    }

    // Retreats: every remaining current free agent parks on the closest
    // cell off the active agents' remaining paths, unique per agent.
    std::vector<char> excluded(static_cast<size_t>(map.size()), 0);
    for (size_t ci = 0; ci < active_tails; ++ci)
        for (Cell c : committed[ci]) excluded[static_cast<size_t>(map.index(c))] = 1;
    for (const auto& [agent, goal] : planned_targets)
        excluded[static_cast<size_t>(map.index(goal))] = 1;

    std::vector<int> leftovers;
    for (const auto& pa : pool)
        if (pa.delay == 0) leftovers.push_back(pa.id);
    std::sort(leftovers.begin(), leftovers.end());

    std::vector<Cell> retreat_goals;
    for (int agent : leftovers) {
        const auto& d = dists_from(map, world.agent_loc[static_cast<size_t>(agent)]);
        int best = -1;
        for (int v = 0; v < map.size(); ++v) {
            if (d[static_cast<size_t>(v)] < 0 || excluded[static_cast<size_t>(v)]) continue;
            if (best < 0 || d[static_cast<size_t>(v)] < d[static_cast<size_t>(best)]) best = v;
        }
        if (best < 0) return FailureReason::agent_planning;
        excluded[static_cast<size_t>(best)] = 1;
        retreat_goals.push_back(map.cell(best));
    }
    if (!leftovers.empty()) {
        mapf::MapfProblem p;
        p.map = &map;
        for (size_t a = 0; a < leftovers.size(); ++a) {
            p.starts.push_back(world.agent_loc[static_cast<size_t>(leftovers[a])]);
            p.goals.push_back(retreat_goals[a]);
        }
        p.frozen_paths = committed;
        p.omega = cfg_.omega;
        p.time_budget_s = cfg_.mapf_time_budget_s;
        auto sol = mapf::solve_cbs(p);
        if (!sol.solved()) return FailureReason::agent_planning;
        for (size_t a = 0; a < leftovers.size(); ++a) {
            world.free_paths[static_cast<size_t>(leftovers[a])] = {world.now, sol.paths[a]};
            committed.push_back(std::move(sol.paths[a]));
        }
    }
    return std::nullopt;
}

RunResult Solver::run() {
    RunResult res;
    auto t_start = std::chrono::steady_clock::now();
    mapf::SolveStatus st;
    auto traj = plan_shelf_trajectories(*inst_, cfg_, &st);
    res.stats.trajectory_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    if (traj.trajectories.empty() && inst_->num_shelves() > 0) {
        res.reason = FailureReason::trajectory;
        res.stats.total_time_s = res.stats.trajectory_time_s;
        return res;
    }
    auto out = run_with_trajectories(traj);
    out.stats.trajectory_time_s = res.stats.trajectory_time_s;
    out.stats.total_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    out.stats.agent_time_s = out.stats.total_time_s - out.stats.trajectory_time_s;
    return out;
}

RunResult Solver::run_with_trajectories(const TrajectorySet& traj) {
    RunResult res;
    auto t_start = std::chrono::steady_clock::now();
    bfs_cache_.clear();
    DependencyGraph dep(traj);
    World world = World::initial(*inst_, traj, dep);
    res.stats.trajectory_moves = traj.total_moves();

    const int N = world.num_agents();
    ExecutionLog& log = res.log;
    log.agents.assign(static_cast<size_t>(N), {});
    log.shelves.assign(static_cast<size_t>(world.num_shelves()), {});
    for (int i = 0; i < N; ++i) {
        log.agents[static_cast<size_t>(i)].path.push_back(world.agent_loc[static_cast<size_t>(i)]);
        log.agents[static_cast<size_t>(i)].carrying.push_back(-1);
    }
    for (int j = 0; j < world.num_shelves(); ++j)
        log.shelves[static_cast<size_t>(j)].path.push_back(world.shelf_loc[static_cast<size_t>(j)]);

    long long guard = 512;
    for (const auto& t : traj.trajectories) guard += 8LL * t.last_step();
    guard += 16LL * inst_->map.size();

    while (!world.all_completed()) {
        auto up = world.update_states();
        if (world.now == 0 || up.changed) {
            ++res.stats.assign_calls;
            if (auto fail = assign_and_plan(world)) {
                res.reason = *fail;
                res.stats.total_time_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
                return res;
            }
        }
        // Record the carry relation for the transition now -> now+1.
        for (int i = 0; i < N; ++i)
            if (world.states[static_cast<size_t>(i)].type == AgentType::active)
                log.agents[static_cast<size_t>(i)].carrying.back() =
                    world.states[static_cast<size_t>(i)].shelf;
        world.step();
        for (int i = 0; i < N; ++i) {
            log.agents[static_cast<size_t>(i)].path.push_back(world.agent_loc[static_cast<size_t>(i)]);
            log.agents[static_cast<size_t>(i)].carrying.push_back(-1);
        }
        for (int j = 0; j < world.num_shelves(); ++j)
            log.shelves[static_cast<size_t>(j)].path.push_back(world.shelf_loc[static_cast<size_t>(j)]);
        if (world.now > guard) {
            res.reason = FailureReason::agent_planning;
            res.stats.total_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
            return res;
        }
    }

    res.success = true;
    res.stats.makespan = log.makespan();
    res.stats.flowtime = log.flowtime();
    res.stats.total_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    res.stats.agent_time_s = res.stats.total_time_s;
    return res;
}

}  // namespace ddmapd::decomp
