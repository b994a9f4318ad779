#include "ddmapd/baselines.hpp"

#include <chrono>

#include "ddmapd/conflicts.hpp"

namespace ddmapd::baselines {

using decomp::DecompConfig;
using decomp::FailureReason;
using decomp::RunResult;

SegmentOrder extract_segments(const mapf::MapfSolution& sequential) {
    SegmentOrder order;
    for (const auto& seg : sequential.segments) {
        SegmentOrder::Segment s;
        s.shelf = seg.agent;
        const auto& path = sequential.paths[static_cast<size_t>(seg.agent)];
        for (int i = 0; i <= seg.length; ++i)
            s.cells.push_back(path_at(path, seg.order + i));
        order.segments.push_back(std::move(s));
    }
    return order;
}

namespace {

// Incremental single-executor log builder. Only agent 0 ever moves; the
// others sit at their starts for the whole run.
struct ExecutorLog {
    const Instance& inst;
    ExecutionLog log;
    std::vector<uint8_t> parked;  // other agents' start cells
    Cell pos;

    explicit ExecutorLog(const Instance& i) : inst(i) {
        const int N = i.num_agents(), M = i.num_shelves();
        log.agents.assign(static_cast<size_t>(N), {});
        log.shelves.assign(static_cast<size_t>(M), {});
        for (int a = 0; a < N; ++a) {
            log.agents[static_cast<size_t>(a)].path.push_back(i.agent_starts[static_cast<size_t>(a)]);
            log.agents[static_cast<size_t>(a)].carrying.push_back(-1);
        }
        for (int j = 0; j < M; ++j)
            log.shelves[static_cast<size_t>(j)].path.push_back(i.shelves[static_cast<size_t>(j)].pickup);
        parked.assign(static_cast<size_t>(i.map.size()), 0);
        for (int a = 1; a < N; ++a)
            parked[static_cast<size_t>(i.map.index(i.agent_starts[static_cast<size_t>(a)]))] = 1;
        pos = i.agent_starts[0];
    }

    void tick(Cell next, int carrying_shelf) {
        log.agents[0].carrying.back() = carrying_shelf;
        log.agents[0].path.push_back(next);
        log.agents[0].carrying.push_back(-1);
        for (size_t a = 1; a < log.agents.size(); ++a) {
            log.agents[a].path.push_back(log.agents[a].path.back());
            log.agents[a].carrying.push_back(-1);
        }
        for (size_t j = 0; j < log.shelves.size(); ++j) {
            Cell c = log.shelves[j].path.back();
            if (carrying_shelf == static_cast<int>(j)) c = next;
            log.shelves[j].path.push_back(c);
        }
        pos = next;
    }

    // Walks agent 0 to `target` beneath shelves, around parked agents.
    bool travel(Cell target) {
        if (pos == target) return true;
        auto path = inst.map.shortest_path(pos, target, parked);
        if (path.empty()) return false;
        for (size_t s = 1; s < path.size(); ++s) tick(path[s], -1);
        return true;
    }

    bool carry(int shelf, Cell to) {
        tick(to, shelf);
        return true;
    }
};

}  // namespace

RunResult run_base(const Instance& inst, const DecompConfig& cfg0) {
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
    res.stats.trajectory_moves = traj.total_moves();

    ExecutorLog ex(inst);
    int max_step = 0;
    for (const auto& t : traj.trajectories) max_step = std::max(max_step, t.last_step());
    // Lockstep: every shelf completes trajectory step s before any shelf
    // begins step s+1; trajectory waits need no agent action.
    for (int s = 1; s <= max_step; ++s) {
        for (const auto& t : traj.trajectories) {
            if (s > t.last_step()) continue;
            Cell from = t.entries[static_cast<size_t>(s) - 1];
            Cell to = t.entries[static_cast<size_t>(s)];
            if (from == to) continue;
            if (!ex.travel(from)) {
                res.reason = FailureReason::agent_planning;
                res.stats.total_time_s = elapsed();
                return res;
            }
            ex.carry(t.shelf, to);
        }
    }

    res.success = true;
    res.log = std::move(ex.log);
    res.stats.makespan = res.log.makespan();
    res.stats.flowtime = res.log.flowtime();
    res.stats.total_time_s = elapsed();
    res.stats.agent_time_s = res.stats.total_time_s - res.stats.trajectory_time_s;
    return res;
}

RunResult run_pas(const Instance& inst, const DecompConfig& cfg0) {
    RunResult res;
    auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    mapf::MapfProblem p;
    p.map = &inst.map;
    for (const auto& s : inst.shelves) {
        p.starts.push_back(s.pickup);
        p.goals.push_back(s.delivery);
    }
    p.forbidden_cells = inst.agent_starts;
    p.time_budget_s = cfg0.mapf_time_budget_s;
    auto seq = mapf::solve_push_and_swap(p);
    res.stats.trajectory_time_s = elapsed();
    if (!seq.solved()) {
        res.reason = FailureReason::trajectory;
        res.stats.total_time_s = elapsed();
        return res;
    }
    for (const auto& path : seq.paths) {
        int moves = 0;
        for (size_t i = 1; i < path.size(); ++i)
            if (path[i] != path[i - 1]) ++moves;
        res.stats.trajectory_moves += moves;
    }

    auto order = extract_segments(seq);
    ExecutorLog ex(inst);
    for (const auto& seg : order.segments) {
        if (!ex.travel(seg.cells.front())) {
            res.reason = FailureReason::agent_planning;
            res.stats.total_time_s = elapsed();
            return res;
        }
        for (size_t c = 1; c < seg.cells.size(); ++c) ex.carry(seg.shelf, seg.cells[c]);
    }

    res.success = true;
    res.log = std::move(ex.log);
    res.stats.makespan = res.log.makespan();
    res.stats.flowtime = res.log.flowtime();
    res.stats.total_time_s = elapsed();
    res.stats.agent_time_s = res.stats.total_time_s - res.stats.trajectory_time_s;
    return res;
}

}  // namespace ddmapd::baselines
