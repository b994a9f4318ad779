#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <unordered_map>

#include "ddmapd/conflicts.hpp"
#include "ddmapd/mapf.hpp"
#include "stastar.hpp"

namespace ddmapd::mapf {

using detail::Cat;
using detail::ConstraintSet;
using detail::Deadline;
using detail::LowLevelQuery;
using detail::ReservationTable;

namespace {

struct FirstConflict {
    bool found = false;
    enum Kind { vertex, edge, follow } kind = vertex;
    int i = -1, j = -1, t = -1;
    Cell cell{}, cell2{};  // edge: i moves cell->cell2
};

struct ConflictScan {
    int count = 0;
    FirstConflict first;
};

// Scans all pairwise conflicts under the problem's semantics. Order of
// discovery: ascending t, vertex conflicts before move conflicts, then
// ascending agent ids.
ConflictScan scan_conflicts(const std::vector<std::vector<Cell>>& paths, const GridMap& map,
                            bool one_robust) {
    ConflictScan sc;
    int k = static_cast<int>(paths.size());
    int H = 1;
    for (const auto& p : paths) H = std::max(H, static_cast<int>(p.size()));
    std::vector<int> pos(static_cast<size_t>(k)), nxt(static_cast<size_t>(k));
    std::unordered_map<int, int> at_t;
    std::unordered_map<int, int> at_t1;
    for (int t = 0; t < H; ++t) {
        at_t.clear();
        at_t1.clear();
        for (int i = 0; i < k; ++i) {
            pos[static_cast<size_t>(i)] = map.index(path_at(paths[static_cast<size_t>(i)], t));
            nxt[static_cast<size_t>(i)] = map.index(path_at(paths[static_cast<size_t>(i)], t + 1));
        }
        for (int i = 0; i < k; ++i) {
            auto [it, fresh] = at_t.try_emplace(pos[static_cast<size_t>(i)], i);
            if (!fresh) {
                ++sc.count;
                if (!sc.first.found)
                    sc.first = {true, FirstConflict::vertex, it->second, i, t,
                                map.cell(pos[static_cast<size_t>(i)]), {}};
            }
            at_t1.try_emplace(nxt[static_cast<size_t>(i)], i);
        }
        for (int i = 0; i < k; ++i) {
            int u = pos[static_cast<size_t>(i)], v = nxt[static_cast<size_t>(i)];
            if (u == v) continue;
            auto it = at_t.find(v);
            if (it == at_t.end() || it->second == i) continue;
            int j = it->second;
            if (one_robust) {
                // Entering a cell occupied at the previous timestep covers
                // swaps as well.
                ++sc.count;
                if (!sc.first.found)
                    sc.first = {true, FirstConflict::follow, i, j, t + 1, map.cell(v), {}};
            } else if (nxt[static_cast<size_t>(j)] == u) {
                if (i < j) {
                    ++sc.count;
                    if (!sc.first.found)
                        sc.first = {true, FirstConflict::edge, i, j, t, map.cell(u), map.cell(v)};
                }
            }
        }
    }
    return sc;
}

struct HlNode {
    long long cost = 0;
    long long lb = 0;
    int conflicts = 0;
    int parent = -1;
    int agent = -1;              // replanned agent (-1 for root)
    std::vector<Cell> path;      // its new path
    int f_min = 0;               // its low-level bound under these constraints
    bool edge_constraint = false;
    Cell c_from{}, c_to{};
    int c_t = -1;
    FirstConflict first;
};

}  // namespace

MapfSolution solve_cbs(const MapfProblem& p) {
    MapfSolution sol;
    auto started = detail::Clock::now();
    auto finish = [&](SolveStatus st) {
        sol.status = st;
        sol.stats.runtime_s =
            std::chrono::duration<double>(detail::Clock::now() - started).count();
        return sol;
    };
    const GridMap& map = *p.map;
    const int k = static_cast<int>(p.starts.size());
    if (k == 0) {
        sol.cost = 0;
        return finish(SolveStatus::solved);
    }
    Deadline dl = Deadline::after(p.time_budget_s);

    std::vector<uint8_t> static_forbid;
    if (!p.forbidden_cells.empty()) {
        static_forbid.assign(static_cast<size_t>(map.size()), 0);
        for (Cell c : p.forbidden_cells) static_forbid[static_cast<size_t>(map.index(c))] = 1;
    }

    ReservationTable frozen(map);
    for (const auto& fp : p.frozen_paths) frozen.add_path(fp);

    ConstraintSet base;
    for (const auto& vb : p.vertex_bans) base.ban_vertex(map.index(vb.cell), vb.t);
    for (const auto& eb : p.edge_bans) base.ban_edge(map.index(eb.from), map.index(eb.to), eb.t);

    std::vector<std::vector<int>> heur(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i)
        heur[static_cast<size_t>(i)] =
            map.bfs_distances(map.index(p.goals[static_cast<size_t>(i)]), static_forbid);

    int max_t = horizon_bound(map, k);
    max_t = std::max(max_t, frozen.horizon() + map.size());

    auto replan = [&](int agent, const ConstraintSet& cons, const Cat* cat)
        -> std::optional<detail::LowLevelResult> {
        LowLevelQuery q;
        q.map = &map;
        q.start = map.index(p.starts[static_cast<size_t>(agent)]);
        q.goal = map.index(p.goals[static_cast<size_t>(agent)]);
        q.heuristic = &heur[static_cast<size_t>(agent)];
        q.frozen = frozen.empty() ? nullptr : &frozen;
        q.one_robust_frozen = p.one_robust;
        q.constraints = &cons;
        q.static_forbid = static_forbid.empty() ? nullptr : &static_forbid;
        q.cat = cat;
        q.omega = p.omega;
        q.max_t = max_t;
        auto r = detail::low_level_search(q, dl);
        if (r) sol.stats.low_level_expanded += r->expanded;
        return r;
    };

    // Collect the constraints imposed on one agent along a node chain.
    std::deque<HlNode> arena;  // reference-stable under push_back
    auto constraints_for = [&](int node, int agent) {
        ConstraintSet cons = base;
        for (int cur = node; cur >= 0; cur = arena[static_cast<size_t>(cur)].parent) {
            const HlNode& n = arena[static_cast<size_t>(cur)];
            if (n.agent != agent || n.c_t < 0) continue;
            if (n.edge_constraint)
                cons.ban_edge(map.index(n.c_from), map.index(n.c_to), n.c_t);
            else
                cons.ban_vertex(map.index(n.c_from), n.c_t);
        }
        return cons;
    };
    std::vector<std::vector<Cell>> root_paths(static_cast<size_t>(k));
    auto paths_at = [&](int node) {
        std::vector<const std::vector<Cell>*> out(static_cast<size_t>(k), nullptr);
        for (int cur = node; cur >= 0; cur = arena[static_cast<size_t>(cur)].parent) {
            const HlNode& n = arena[static_cast<size_t>(cur)];
            if (n.agent >= 0 && !out[static_cast<size_t>(n.agent)])
                out[static_cast<size_t>(n.agent)] = &n.path;
        }
        for (int i = 0; i < k; ++i)
            if (!out[static_cast<size_t>(i)]) out[static_cast<size_t>(i)] = &root_paths[static_cast<size_t>(i)];
        return out;
    };

    // Root: plan sequentially, biasing each path away from those before it.
    HlNode root;
    std::vector<int> root_fmin(static_cast<size_t>(k), 0);
    {
        Cat cat(map);
        for (int i = 0; i < k; ++i) {
            auto r = replan(i, base, i == 0 ? nullptr : &cat);
            if (!r) return finish(dl.passed() ? SolveStatus::timeout : SolveStatus::unsolvable);
            root_paths[static_cast<size_t>(i)] = std::move(r->path);
            root_fmin[static_cast<size_t>(i)] = r->f_min;
            root.cost += static_cast<long long>(root_paths[static_cast<size_t>(i)].size()) - 1;
            root.lb += r->f_min;
            cat.add_path(root_paths[static_cast<size_t>(i)]);
        }
        auto sc = scan_conflicts(root_paths, map, p.one_robust);
        root.conflicts = sc.count;
        root.first = sc.first;
    }
    arena.push_back(std::move(root));

    struct LbKey {
        long long lb, cost;
        int idx;
        bool operator<(const LbKey& o) const {
            if (lb != o.lb) return lb < o.lb;
            if (cost != o.cost) return cost < o.cost;
            return idx < o.idx;
        }
    };
    struct CostKey {
        long long cost;
        int idx;
        bool operator<(const CostKey& o) const {
            return cost != o.cost ? cost < o.cost : idx < o.idx;
        }
    };
    struct FocalKey {
        int conflicts;
        long long cost;
        int idx;
        bool operator<(const FocalKey& o) const {
            if (conflicts != o.conflicts) return conflicts < o.conflicts;
            if (cost != o.cost) return cost < o.cost;
            return idx < o.idx;
        }
    };
    std::set<LbKey> open_by_lb;
    std::set<CostKey> open_by_cost;
    std::set<FocalKey> focal;
    auto bound = [&](long long lb) { return static_cast<long long>(p.omega * lb + 1e-9); };
    long long lb_min = arena[0].lb;
    long long cur_bound = bound(lb_min);
    open_by_lb.insert({arena[0].lb, arena[0].cost, 0});
    open_by_cost.insert({arena[0].cost, 0});
    focal.insert({arena[0].conflicts, arena[0].cost, 0});

    while (!open_by_lb.empty()) {
        if (dl.passed()) return finish(SolveStatus::timeout);
        long long cur_lb = open_by_lb.begin()->lb;
        if (cur_lb > lb_min) {
            lb_min = cur_lb;
            long long new_bound = bound(lb_min);
            if (new_bound > cur_bound) {
                for (auto it = open_by_cost.upper_bound({cur_bound, 1 << 30});
                     it != open_by_cost.end() && it->cost <= new_bound; ++it)
                    focal.insert({arena[static_cast<size_t>(it->idx)].conflicts, it->cost, it->idx});
                cur_bound = new_bound;
            }
        }
        if (focal.empty()) {
            auto top = *open_by_lb.begin();
            focal.insert({arena[static_cast<size_t>(top.idx)].conflicts, top.cost, top.idx});
        }
        // Mostly expand the lowest-conflict node in focal, but take the
        // best-lower-bound node every few expansions; otherwise a plateau
        // of equal-cost reshuffles can starve the bound forever.
        int idx;
        if (sol.stats.high_level_nodes % 4 == 3) {
            idx = open_by_lb.begin()->idx;
            focal.erase({arena[static_cast<size_t>(idx)].conflicts,
                         arena[static_cast<size_t>(idx)].cost, idx});
        } else {
            idx = focal.begin()->idx;
            focal.erase(focal.begin());
        }
        const HlNode snapshot = arena[static_cast<size_t>(idx)];
        auto oit = open_by_lb.find({snapshot.lb, snapshot.cost, idx});
        if (oit == open_by_lb.end()) continue;  // stale focal entry
        open_by_lb.erase(oit);
        open_by_cost.erase({snapshot.cost, idx});
        ++sol.stats.high_level_nodes;
        if (getenv("DDMAPD_CBS_DEBUG") && sol.stats.high_level_nodes % 20000 == 0) {
            fprintf(stderr, "hl=%lld conf=%d cost=%lld lb=%lld lbmin=%lld bound=%lld first=(k%d i%d j%d t%d @%d,%d)\n",
                    sol.stats.high_level_nodes, snapshot.conflicts, snapshot.cost, snapshot.lb,
                    lb_min, cur_bound, (int)snapshot.first.kind, snapshot.first.i, snapshot.first.j,
                    snapshot.first.t, snapshot.first.cell.row, snapshot.first.cell.col);
        }

        if (!snapshot.first.found) {
            auto ptrs = paths_at(idx);
            sol.paths.clear();
            for (int i = 0; i < k; ++i) sol.paths.push_back(*ptrs[static_cast<size_t>(i)]);
            sol.cost = snapshot.cost;
            return finish(SolveStatus::solved);
        }

        const FirstConflict fc = snapshot.first;
        struct Branch {
            int agent;
            bool edge_constraint;
            Cell from, to;
            int t;
        };
        std::vector<Branch> branches;
        switch (fc.kind) {
            case FirstConflict::vertex:
                branches.push_back({fc.i, false, fc.cell, {}, fc.t});
                branches.push_back({fc.j, false, fc.cell, {}, fc.t});
                break;
            case FirstConflict::edge:
                branches.push_back({fc.i, true, fc.cell, fc.cell2, fc.t});
                branches.push_back({fc.j, true, fc.cell2, fc.cell, fc.t});
                break;
            case FirstConflict::follow:
                branches.push_back({fc.i, false, fc.cell, {}, fc.t});
                branches.push_back({fc.j, false, fc.cell, {}, fc.t - 1});
                break;
        }
        auto parent_paths = paths_at(idx);
        // Per-agent lower bound at this node: the deepest replan wins.
        std::vector<int> fmin_of(static_cast<size_t>(k), -1);
        for (int cur = idx; cur >= 0; cur = arena[static_cast<size_t>(cur)].parent) {
            const HlNode& n = arena[static_cast<size_t>(cur)];
            if (n.agent >= 0 && fmin_of[static_cast<size_t>(n.agent)] < 0)
                fmin_of[static_cast<size_t>(n.agent)] = n.f_min;
        }
        for (int i = 0; i < k; ++i)
            if (fmin_of[static_cast<size_t>(i)] < 0) fmin_of[static_cast<size_t>(i)] = root_fmin[static_cast<size_t>(i)];

        std::vector<HlNode> children;
        for (const Branch& br : branches) {
            HlNode child;
            child.parent = idx;
            child.agent = br.agent;
            child.edge_constraint = br.edge_constraint;
            child.c_from = br.from;
            child.c_to = br.to;
            child.c_t = br.t;

            ConstraintSet cons = constraints_for(idx, br.agent);
            if (br.edge_constraint)
                cons.ban_edge(map.index(br.from), map.index(br.to), br.t);
            else
                cons.ban_vertex(map.index(br.from), br.t);

            Cat cat(map);
            for (int i = 0; i < k; ++i)
                if (i != br.agent) cat.add_path(*parent_paths[static_cast<size_t>(i)]);
            auto r = replan(br.agent, cons, &cat);
            if (!r) {
                if (dl.passed()) return finish(SolveStatus::timeout);
                continue;  // child infeasible
            }
            child.path = std::move(r->path);
            child.f_min = std::max(r->f_min, fmin_of[static_cast<size_t>(br.agent)]);

            long long old_len = static_cast<long long>(parent_paths[static_cast<size_t>(br.agent)]->size()) - 1;
            child.cost = snapshot.cost - old_len + (static_cast<long long>(child.path.size()) - 1);
            child.lb = std::max(snapshot.lb,
                                snapshot.lb - fmin_of[static_cast<size_t>(br.agent)] + child.f_min);

            std::vector<std::vector<Cell>> probe(static_cast<size_t>(k));
            for (int i = 0; i < k; ++i)
                probe[static_cast<size_t>(i)] =
                    (i == br.agent) ? child.path : *parent_paths[static_cast<size_t>(i)];
            auto sc = scan_conflicts(probe, map, p.one_robust);
            child.conflicts = sc.count;
            child.first = sc.first;
            children.push_back(std::move(child));
        }

        // Bypass: a same-cost reroute with fewer conflicts replaces the
        // node outright, without committing to the constraint.
        int adopt = -1;
        for (size_t c = 0; c < children.size(); ++c) {
            const HlNode& ch = children[c];
            if (ch.cost != snapshot.cost || ch.conflicts >= snapshot.conflicts) continue;
            if (adopt < 0 || ch.conflicts < children[static_cast<size_t>(adopt)].conflicts)
                adopt = static_cast<int>(c);
        }
        if (adopt >= 0) {
            HlNode node = std::move(children[static_cast<size_t>(adopt)]);
            node.c_t = -1;  // the probe constraint is not kept
            node.lb = snapshot.lb;
            node.f_min = fmin_of[static_cast<size_t>(node.agent)];
            children.clear();
            children.push_back(std::move(node));
        }
        for (HlNode& child : children) {
            int cidx = static_cast<int>(arena.size());
            arena.push_back(std::move(child));
            open_by_lb.insert({arena.back().lb, arena.back().cost, cidx});
            open_by_cost.insert({arena.back().cost, cidx});
            if (arena.back().cost <= cur_bound)
                focal.insert({arena.back().conflicts, arena.back().cost, cidx});
        }
    }
    return finish(SolveStatus::unsolvable);
}

MapfSolution solve_prioritized(const MapfProblem& p, const std::vector<int>& order) {
    MapfSolution sol;
    auto started = detail::Clock::now();
    auto finish = [&](SolveStatus st) {
        sol.status = st;
        sol.stats.runtime_s =
            std::chrono::duration<double>(detail::Clock::now() - started).count();
        return sol;
    };
    const GridMap& map = *p.map;
    const int k = static_cast<int>(p.starts.size());
    if (k == 0) return finish(SolveStatus::solved);
    Deadline dl = Deadline::after(p.time_budget_s);

    std::vector<uint8_t> static_forbid;
    if (!p.forbidden_cells.empty()) {
        static_forbid.assign(static_cast<size_t>(map.size()), 0);
        for (Cell c : p.forbidden_cells) static_forbid[static_cast<size_t>(map.index(c))] = 1;
    }
    ReservationTable frozen(map);
    for (const auto& fp : p.frozen_paths) frozen.add_path(fp);
    ConstraintSet base;
    for (const auto& vb : p.vertex_bans) base.ban_vertex(map.index(vb.cell), vb.t);
    for (const auto& eb : p.edge_bans) base.ban_edge(map.index(eb.from), map.index(eb.to), eb.t);

    // Bias every path away from the start cells of agents planned later;
    // a path crossing an unplanned agent's start early often makes that
    // agent unsolvable, especially under 1-robust semantics.
    Cat start_cat(map);
    for (int agent : order)
        start_cat.add_path({p.starts[static_cast<size_t>(agent)]});

    int max_t = horizon_bound(map, k);
    sol.paths.assign(static_cast<size_t>(k), {});
    for (int agent : order) {
        start_cat.remove_path({p.starts[static_cast<size_t>(agent)]});
        LowLevelQuery q;
        auto h = map.bfs_distances(map.index(p.goals[static_cast<size_t>(agent)]), static_forbid);
        q.map = &map;
        q.start = map.index(p.starts[static_cast<size_t>(agent)]);
        q.goal = map.index(p.goals[static_cast<size_t>(agent)]);
        q.heuristic = &h;
        q.frozen = &frozen;
        q.one_robust_frozen = p.one_robust;
        q.constraints = &base;
        q.static_forbid = static_forbid.empty() ? nullptr : &static_forbid;
        q.cat = &start_cat;
        q.omega = p.omega;
        q.max_t = std::max(max_t, frozen.horizon() + map.size());
        auto r = detail::low_level_search(q, dl);
        if (!r) {
            sol.stats.failed_agent = agent;
            return finish(dl.passed() ? SolveStatus::timeout : SolveStatus::unsolvable);
        }
        sol.stats.low_level_expanded += r->expanded;
        sol.cost += static_cast<long long>(r->path.size()) - 1;
        frozen.add_path(r->path);
        sol.paths[static_cast<size_t>(agent)] = std::move(r->path);
    }
    return finish(SolveStatus::solved);
}

}  // namespace ddmapd::mapf
