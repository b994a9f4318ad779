#include "stastar.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace ddmapd::mapf::detail {

void ReservationTable::add_path(const std::vector<Cell>& path) {
    if (path.empty()) return;
    int T = static_cast<int>(path.size()) - 1;
    for (int t = 0; t <= T; ++t) {
        int c = map_->index(path[static_cast<size_t>(t)]);
        cells_.insert(vt_key(c, t));
        auto& lu = last_use_[c];
        lu = std::max(lu, t);
        if (t < T) {
            int n = map_->index(path[static_cast<size_t>(t) + 1]);
            if (n != c) edges_.insert(edge_key(c, n, t));
        }
    }
    int last = map_->index(path.back());
    auto it = parked_.find(last);
    if (it == parked_.end() || it->second > T) parked_[last] = T;
    horizon_ = std::max(horizon_, T + 1);
}

void Cat::update(const std::vector<Cell>& path, int delta) {
    if (path.empty()) return;
    int T = static_cast<int>(path.size()) - 1;
    auto drop_one = [](std::vector<int>& v, int value) {
        auto it = std::find(v.begin(), v.end(), value);
        if (it != v.end()) v.erase(it);
    };
    for (int t = 0; t <= T; ++t) {
        int c = map_->index(path[static_cast<size_t>(t)]);
        cells_[vt_key(c, t)] += delta;
        if (delta > 0)
            use_times_[c].push_back(t);
        else
            drop_one(use_times_[c], t);
        if (t < T) {
            int n = map_->index(path[static_cast<size_t>(t) + 1]);
            if (n != c) edges_[edge_key(c, n, t)] += delta;
        }
    }
    int last = map_->index(path.back());
    if (delta > 0)
        park_starts_[last].push_back(T);
    else
        drop_one(park_starts_[last], T);
    horizon_ = std::max(horizon_, T + 1);
}

void Cat::add_path(const std::vector<Cell>& path) { update(path, 1); }
void Cat::remove_path(const std::vector<Cell>& path) { update(path, -1); }

int Cat::occupancy(int cell, int t) const {
    int cnt = 0;
    auto it = cells_.find(vt_key(cell, t));
    if (it != cells_.end()) cnt += it->second;
    auto pit = park_starts_.find(cell);
    if (pit != park_starts_.end())
        for (int from : pit->second)
            if (from < t) ++cnt;  // the path itself covers t == from
    return cnt;
}

int Cat::move_conflicts(int from, int to, int t, bool one_robust) const {
    int n = occupancy(to, t);
    auto eit = edges_.find(edge_key(to, from, t - 1));
    if (from != to && eit != edges_.end()) n += eit->second;
    if (one_robust && from != to) {
        n += occupancy(to, t - 1);
        n += occupancy(from, t);  // someone stepping into the cell just left
    }
    return n;
}

int Cat::park_conflicts(int cell, int t) const {
    int n = 0;
    auto it = use_times_.find(cell);
    if (it != use_times_.end())
        for (int u : it->second)
            if (u > t) ++n;
    auto pit = park_starts_.find(cell);
    if (pit != park_starts_.end()) n += static_cast<int>(pit->second.size());
    return n;
}

namespace {

struct Node {
    int cell;
    int t;
    int conf;
    int parent;  // index into arena
};

struct OpenKey {
    int f;
    int t;  // larger t preferred (deeper)
    int cell;
    int idx;
    bool operator<(const OpenKey& o) const {
        if (f != o.f) return f < o.f;
        if (t != o.t) return t > o.t;
        if (cell != o.cell) return cell < o.cell;
        return idx < o.idx;
    }
};

struct FocalKey {
    int conf;
    int f;
    int t;
    int cell;
    int idx;
    bool operator<(const FocalKey& o) const {
        if (conf != o.conf) return conf < o.conf;
        if (f != o.f) return f < o.f;
        if (t != o.t) return t > o.t;
        if (cell != o.cell) return cell < o.cell;
        return idx < o.idx;
    }
};

}  // namespace

std::optional<LowLevelResult> low_level_search(const LowLevelQuery& q, const Deadline& dl) {
    const GridMap& map = *q.map;
    const std::vector<int>& h = *q.heuristic;
    auto why = [&](const char* reason) {
        if (getenv("DDMAPD_LL_DEBUG")) fprintf(stderr, "low_level fail: %s\n", reason);
        return std::nullopt;
    };
    if (h[static_cast<size_t>(q.start)] < 0) return why("goal unreachable");
    if (q.static_forbid && (*q.static_forbid)[static_cast<size_t>(q.start)]) return why("start forbidden");

    // The goal must admit parking: after the latest hard use of the goal
    // cell by constraints or frozen paths.
    int park_after = q.earliest_park;
    if (q.constraints) park_after = std::max(park_after, q.constraints->latest_ban_at(q.goal) + 1);
    int frozen_last = q.frozen ? q.frozen->last_use(q.goal) : -1;
    if (frozen_last == std::numeric_limits<int>::max()) return why("goal parked on");
    park_after = std::max(park_after, frozen_last + 1);
    if (q.frozen && q.one_robust_frozen && frozen_last >= 0)
        park_after = std::max(park_after, frozen_last + 2);

    auto position_legal = [&](int cell, int t) {
        if (q.static_forbid && (*q.static_forbid)[static_cast<size_t>(cell)]) return false;
        if (q.constraints && q.constraints->vertex_banned(cell, t)) return false;
        if (q.frozen) {
            if (q.frozen->vertex(cell, t)) return false;
            if (q.one_robust_frozen &&
                (q.frozen->vertex(cell, t - 1) || q.frozen->vertex(cell, t + 1)))
                return false;
        }
        return true;
    };
    auto move_legal = [&](int from, int to, int t) {  // departing at t, arriving t+1
        if (q.constraints && q.constraints->edge_banned(from, to, t)) return false;
        if (q.frozen && from != to && q.frozen->reverse_edge(from, to, t)) return false;
        return true;
    };

    if (!position_legal(q.start, 0)) return why("start blocked at t=0");

    std::vector<Node> arena;
    arena.push_back({q.start, 0, 0, -1});
    std::set<OpenKey> open;
    std::set<FocalKey> focal;
    // (cell, t) fully determines g, so the first generation of a state is
    // as cheap as any; dedupe at generation.
    std::unordered_set<long long> seen;
    seen.reserve(4096);
    seen.insert(vt_key(q.start, 0));

    // Any feasible path parks no earlier than park_after, so f may be
    // clamped from below without losing admissibility.
    int f0 = std::max(h[static_cast<size_t>(q.start)], park_after);
    int f_min = f0;
    auto bound = [&](int fm) { return static_cast<int>(q.omega * fm + 1e-9); };
    open.insert({f0, 0, q.start, 0});
    focal.insert({0, f0, 0, q.start, 0});

    LowLevelResult res;
    long long expanded = 0;
    int tick = 0;
    while (!focal.empty() || !open.empty()) {
        if (((++tick) & 1023) == 0 && dl.passed()) return why("deadline");
        // Migrate nodes that entered the focal bound after f_min grew.
        int cur_fmin = open.empty() ? f_min : open.begin()->f;
        if (cur_fmin > f_min) {
            f_min = cur_fmin;
            for (auto it = open.begin(); it != open.end() && it->f <= bound(f_min); ++it) {
                const Node& n = arena[static_cast<size_t>(it->idx)];
                focal.insert({n.conf, it->f, it->t, it->cell, it->idx});
            }
        }
        if (focal.empty()) {
            if (open.empty()) break;
            const auto& top = *open.begin();
            const Node& n = arena[static_cast<size_t>(top.idx)];
            focal.insert({n.conf, top.f, top.t, top.cell, top.idx});
        }
        auto fit = focal.begin();
        int idx = fit->idx;
        Node n = arena[static_cast<size_t>(idx)];
        int f = fit->f;
        focal.erase(fit);
        open.erase({f, n.t, n.cell, idx});
        ++expanded;

        if (n.cell == q.goal && n.t >= park_after) {
            res.f_min = std::max(f_min, open.empty() ? f : std::min(f, open.begin()->f));
            res.expanded = expanded;
            res.path.resize(static_cast<size_t>(n.t) + 1);
            int cur = idx;
            while (cur >= 0) {
                const Node& cn = arena[static_cast<size_t>(cur)];
                res.path[static_cast<size_t>(cn.t)] = map.cell(cn.cell);
                cur = cn.parent;
            }
            return res;
        }

        if (n.t + 1 > q.max_t) continue;
        auto try_succ = [&](int to) {
            if (!position_legal(to, n.t + 1)) return;
            if (!move_legal(n.cell, to, n.t)) return;
            int hv = h[static_cast<size_t>(to)];
            if (hv < 0) return;
            int nf = std::max(n.t + 1 + hv, park_after);
            if (nf > q.max_t) return;
            if (!seen.insert(vt_key(to, n.t + 1)).second) return;
            int conf = n.conf;
            if (q.cat) conf += q.cat->move_conflicts(n.cell, to, n.t + 1, q.one_robust_frozen);
            int nidx = static_cast<int>(arena.size());
            arena.push_back({to, n.t + 1, conf, idx});
            open.insert({nf, n.t + 1, to, nidx});
            if (nf <= bound(std::max(f_min, open.empty() ? nf : open.begin()->f)))
                focal.insert({conf, nf, n.t + 1, to, nidx});
        };
        try_succ(n.cell);  // wait
        for (int nb : map.neighbors(n.cell))
            if (nb >= 0) try_succ(nb);
    }
    if (getenv("DDMAPD_LL_DEBUG"))
        fprintf(stderr, "low_level fail: exhausted after %lld expansions (park_after=%d max_t=%d)\n",
                expanded, park_after, q.max_t);
    return std::nullopt;
}

}  // namespace ddmapd::mapf::detail
