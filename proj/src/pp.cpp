#include "ddmapd/pp.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <set>

namespace ddmapd::pp {

using decomp::DecompConfig;
using decomp::FailureReason;
using decomp::RunResult;

WellFormedReport check_well_formed(const Instance& inst, bool attempt_trajectories,
                                   double budget_s) {
    WellFormedReport rep;
    const GridMap& map = inst.map;
    std::set<Cell> starts(inst.agent_starts.begin(), inst.agent_starts.end());
    rep.starts_distinct = starts.size() == inst.agent_starts.size();

    rep.connectivity = true;
    for (int keep = 0; keep < inst.num_agents(); ++keep) {
        std::vector<uint8_t> extra(static_cast<size_t>(map.size()), 0);
        for (int i = 0; i < inst.num_agents(); ++i)
            if (i != keep) extra[static_cast<size_t>(map.index(inst.agent_starts[static_cast<size_t>(i)]))] = 1;
        int removed = 0;
        for (int v = 0; v < map.size(); ++v)
            if (extra[static_cast<size_t>(v)] && !map.blocked(map.cell(v))) ++removed;
        int expect = map.free_cell_count() - removed;
        int seed = -1;
        for (int v = 0; v < map.size() && seed < 0; ++v)
            if (!map.blocked(map.cell(v)) && !extra[static_cast<size_t>(v)]) seed = v;
        if (seed < 0) {
            rep.connectivity = false;
            rep.disconnecting_agents.push_back(keep);
            continue;
        }
        auto dist = map.bfs_distances(seed, extra);
        int reached = 0;
        for (int v = 0; v < map.size(); ++v)
            if (dist[static_cast<size_t>(v)] >= 0) ++reached;
        if (reached != expect) {
            rep.connectivity = false;
            rep.disconnecting_agents.push_back(keep);
        }
    }

    if (attempt_trajectories) {
        rep.safe_solution_checked = true;
        DecompConfig cfg;
        cfg.one_robust_trajectories = true;
        cfg.safe_trajectories = true;
        cfg.mapf_time_budget_s = budget_s;
        auto traj = decomp::Solver::plan_shelf_trajectories(inst, cfg);
        rep.safe_solution_found = !traj.trajectories.empty();
    }
    return rep;
}

namespace {

struct Carry {
    int shelf = -1;
    int lift_t = -1;   // absolute
    int place_t = -1;  // absolute
    int start_step = 0;
};

struct PpState {
    const Instance* inst;
    const TrajectorySet* traj;
    const DependencyGraph* dep;
    std::vector<int> steps;
    std::vector<Cell> shelf_loc;
    std::vector<std::vector<Cell>> committed;  // absolute paths from time 0
    std::vector<Carry> carry;                  // pending or ongoing carries

    Cell pos(int agent, int t) const {
        const auto& p = committed[static_cast<size_t>(agent)];
        if (t >= static_cast<int>(p.size())) return p.back();
        return p[static_cast<size_t>(t)];
    }
    bool shelf_completed(int j) const {
        return steps[static_cast<size_t>(j)] >= traj->trajectories[static_cast<size_t>(j)].last_step();
    }
    bool shelf_assigned(int j, int t) const {
        for (const auto& c : carry)
            if (c.shelf == j && c.place_t > t) return true;
        return false;
    }
    bool agent_available(int agent, int t) const {
        const Carry& c = carry[static_cast<size_t>(agent)];
        return c.shelf < 0 || c.place_t <= t;
    }
    // Absolute time the carried shelf j reaches trajectory step k; -1 when
    // not scheduled by any pending carry.
    int scheduled_reach(int j, int k, int t) const {
        if (steps[static_cast<size_t>(j)] >= k) return 0;  // already reached
        for (const auto& c : carry) {
            if (c.shelf != j || c.place_t <= t) continue;
            int end_step = c.start_step + (c.place_t - c.lift_t);
            if (k > c.start_step && k <= end_step) return c.lift_t + (k - c.start_step);
        }
        return -1;
    }
};

}  // namespace

RunResult run_pp(const Instance& inst, const DecompConfig& cfg0) {
    RunResult res;
    auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    DecompConfig cfg = cfg0;
    cfg.one_robust_trajectories = true;
    cfg.safe_trajectories = true;
    auto traj = decomp::Solver::plan_shelf_trajectories(inst, cfg);
    res.stats.trajectory_time_s = elapsed();
    if (traj.trajectories.empty() && inst.num_shelves() > 0) {
        res.reason = FailureReason::trajectory;
        res.stats.total_time_s = elapsed();
        return res;
    }
    DependencyGraph dep(traj);
    if (!dep.acyclic()) {  // cannot happen for 1-robust trajectories
        res.reason = FailureReason::cycle;
        res.stats.total_time_s = elapsed();
        return res;
    }
    res.stats.trajectory_moves = traj.total_moves();

    const int N = inst.num_agents();
    const int M = inst.num_shelves();
    PpState st;
    st.inst = &inst;
    st.traj = &traj;
    st.dep = &dep;
    st.steps.assign(static_cast<size_t>(M), 0);
    for (const auto& s : inst.shelves) st.shelf_loc.push_back(s.pickup);
    st.committed.assign(static_cast<size_t>(N), {});
    for (int i = 0; i < N; ++i)
        st.committed[static_cast<size_t>(i)].push_back(inst.agent_starts[static_cast<size_t>(i)]);
    st.carry.assign(static_cast<size_t>(N), {});

    ExecutionLog& log = res.log;
    log.agents.assign(static_cast<size_t>(N), {});
    log.shelves.assign(static_cast<size_t>(M), {});
    for (int i = 0; i < N; ++i) {
        log.agents[static_cast<size_t>(i)].path.push_back(inst.agent_starts[static_cast<size_t>(i)]);
        log.agents[static_cast<size_t>(i)].carrying.push_back(-1);
    }
    for (int j = 0; j < M; ++j)
        log.shelves[static_cast<size_t>(j)].path.push_back(st.shelf_loc[static_cast<size_t>(j)]);

    // One minimum-cost (agent, shelf) commitment per round.
    auto assign_rounds = [&](int t) -> std::optional<FailureReason> {
        while (true) {
            std::vector<int> avail;
            for (int i = 0; i < N; ++i)
                if (st.agent_available(i, t)) avail.push_back(i);
            if (avail.empty()) return std::nullopt;

            struct Cand {
                int shelf;
                int ready;  // delay until executable
            };
            std::vector<Cand> cands;
            for (int j = 0; j < M; ++j) {
                if (st.shelf_completed(j) || st.shelf_assigned(j, t)) continue;
                int ready = 0;
                bool feasible = true;
                for (int id : dep.out_edge_ids(j, st.steps[static_cast<size_t>(j)] + 1)) {
                    if (dep.released(id, st.steps)) continue;
                    const DepEdge& e = dep.edge(id);
                    int reach = st.scheduled_reach(e.to_shelf, e.to_step, t);
                    if (reach < 0) {
                        feasible = false;
                        break;
                    }
                    ready = std::max(ready, reach - t);
                }
                if (feasible) cands.push_back({j, ready});
            }
            if (cands.empty()) return std::nullopt;

            // Minimum-cost pair; ties toward lower agent id then shelf id.
            long long best_cost = std::numeric_limits<long long>::max();
            int best_agent = -1, best_shelf = -1, best_ready = 0;
            for (int agent : avail) {
                auto dists = inst.map.bfs_distances(inst.map.index(st.pos(agent, t)));
                for (const Cand& c : cands) {
                    int d = dists[static_cast<size_t>(inst.map.index(st.shelf_loc[static_cast<size_t>(c.shelf)]))];
                    if (d < 0) continue;
                    long long cost = std::max<long long>(d, c.ready);
                    if (cost < best_cost) {
                        best_cost = cost;
                        best_agent = agent;
                        best_shelf = c.shelf;
                        best_ready = c.ready;
                    }
                }
            }
            (void)best_ready;
            if (best_agent < 0) return std::nullopt;

            // Segment: maximal prefix of entries whose dependencies are
            // released or scheduled by pending carries.
            const auto& entries = traj.trajectories[static_cast<size_t>(best_shelf)].entries;
            int s0 = st.steps[static_cast<size_t>(best_shelf)];
            std::vector<Cell> segment{entries[static_cast<size_t>(s0)]};
            std::vector<int> min_arrival{0};
            for (int k = s0 + 1; k < static_cast<int>(entries.size()); ++k) {
                int release = 0;
                bool ok = true;
                for (int id : dep.out_edge_ids(best_shelf, k)) {
                    if (dep.released(id, st.steps)) continue;
                    const DepEdge& e = dep.edge(id);
                    int reach = st.scheduled_reach(e.to_shelf, e.to_step, t);
                    if (reach < 0) {
                        ok = false;
                        break;
                    }
                    release = std::max(release, reach);
                }
                if (!ok) break;
                segment.push_back(entries[static_cast<size_t>(k)]);
                min_arrival.push_back(release);
            }

            std::vector<std::vector<Cell>> frozen;
            for (int i = 0; i < N; ++i)
                if (i != best_agent) frozen.push_back(st.committed[static_cast<size_t>(i)]);

            mapf::MultiLabelQuery q;
            q.map = &inst.map;
            q.agent_start = st.pos(best_agent, t);
            q.segment = segment;
            q.min_arrival = min_arrival;
            q.home = inst.agent_starts[static_cast<size_t>(best_agent)];
            q.t0 = t;
            q.frozen_paths = &frozen;
            q.max_t = mapf::horizon_bound(inst.map, N) + t;
            auto ml = mapf::multi_label_astar(q);
            if (!ml) return FailureReason::agent_planning;

            auto& path = st.committed[static_cast<size_t>(best_agent)];
            path.resize(static_cast<size_t>(t) + 1);
            path.back() = st.pos(best_agent, t);
            for (size_t c = 1; c < ml->cells.size(); ++c) path.push_back(ml->cells[c]);
            st.carry[static_cast<size_t>(best_agent)] =
                Carry{best_shelf, t + ml->lift_index, t + ml->place_index, s0};
        }
    };

    long long guard = 512;
    for (const auto& tr : traj.trajectories) guard += 8LL * tr.last_step();
    guard += 16LL * inst.map.size() * std::max(1, M / std::max(1, N));

    int t = 0;
    while (true) {
        bool done = true;
        for (int j = 0; j < M; ++j)
            if (!st.shelf_completed(j)) {
                done = false;
                break;
            }
        if (done) break;

        bool event = t == 0;
        for (int i = 0; i < N; ++i) {
            const Carry& c = st.carry[static_cast<size_t>(i)];
            if (c.shelf >= 0 && (c.lift_t == t || c.place_t == t)) event = true;
        }
        if (event) {
            ++res.stats.assign_calls;
            if (auto fail = assign_rounds(t)) {
                res.reason = *fail;
                res.stats.total_time_s = elapsed();
                return res;
            }
        }

        // Advance one tick along committed paths; carried shelves advance
        // their trajectory steps with their carriers.
        for (int i = 0; i < N; ++i) {
            const Carry& c = st.carry[static_cast<size_t>(i)];
            if (c.shelf >= 0 && c.lift_t <= t && t < c.place_t) {
                int j = c.shelf;
                int& k = st.steps[static_cast<size_t>(j)];
                ++k;
                st.shelf_loc[static_cast<size_t>(j)] =
                    traj.trajectories[static_cast<size_t>(j)].entries[static_cast<size_t>(k)];
                log.agents[static_cast<size_t>(i)].carrying.back() = j;
            }
        }
        ++t;
        for (int i = 0; i < N; ++i) {
            log.agents[static_cast<size_t>(i)].path.push_back(st.pos(i, t));
            log.agents[static_cast<size_t>(i)].carrying.push_back(-1);
        }
        for (int j = 0; j < M; ++j)
            log.shelves[static_cast<size_t>(j)].path.push_back(st.shelf_loc[static_cast<size_t>(j)]);

        if (t > guard) {
            res.reason = FailureReason::agent_planning;
            res.stats.total_time_s = elapsed();
            return res;
        }
    }

    res.success = true;
    res.stats.makespan = log.makespan();
    res.stats.flowtime = log.flowtime();
    res.stats.total_time_s = elapsed();
    res.stats.agent_time_s = res.stats.total_time_s - res.stats.trajectory_time_s;
    return res;
}

}  // namespace ddmapd::pp
