#include <algorithm>
#include <set>
#include <unordered_map>

#include "ddmapd/mapf.hpp"
#include "stastar.hpp"

namespace ddmapd::mapf {

using detail::ReservationTable;

namespace {

struct MlNode {
    int cell;
    int t;       // absolute time
    int stage;   // 0 = heading to the shelf, 2 = heading home
    int parent;  // arena index
    bool committed;  // this node is the landing point of the carried segment
};

}  // namespace

std::optional<MultiLabelPath> multi_label_astar(const MultiLabelQuery& q) {
    const GridMap& map = *q.map;
    if (q.segment.empty()) return std::nullopt;
    ReservationTable frozen(map);
    if (q.frozen_paths)
        for (const auto& fp : *q.frozen_paths) frozen.add_path(fp);

    const int seg_len = static_cast<int>(q.segment.size());  // entries
    const int seg_ticks = seg_len - 1;
    const int seg0 = map.index(q.segment.front());
    const int seg_back = map.index(q.segment.back());
    const int home = map.index(q.home);

    auto d_seg0 = map.bfs_distances(seg0);
    auto d_home = map.bfs_distances(home);
    if (d_seg0[static_cast<size_t>(map.index(q.agent_start))] < 0) return std::nullopt;
    if (d_home[static_cast<size_t>(seg_back)] < 0) return std::nullopt;

    // Earliest lift so that no forced entry arrives before its release.
    int earliest_lift = q.t0;
    for (int i = 1; i < seg_len; ++i) {
        if (i >= static_cast<int>(q.min_arrival.size())) break;
        earliest_lift = std::max(earliest_lift, q.min_arrival[static_cast<size_t>(i)] - i);
    }

    int park_after_home = frozen.last_use(home);
    if (park_after_home == std::numeric_limits<int>::max()) return std::nullopt;

    auto pos_free = [&](int cell, int t) { return !frozen.vertex(cell, t); };
    auto move_ok = [&](int from, int to, int t) {
        return from == to || !frozen.reverse_edge(from, to, t);
    };

    std::vector<MlNode> arena;
    struct Key {
        int f, t, cell, stage, idx;
        bool operator<(const Key& o) const {
            if (f != o.f) return f < o.f;
            if (t != o.t) return t > o.t;
            if (stage != o.stage) return stage < o.stage;
            if (cell != o.cell) return cell < o.cell;
            return idx < o.idx;
        }
    };
    std::set<Key> open;
    std::unordered_map<long long, char> closed;
    auto state_key = [&](int cell, int t, int stage) {
        return (static_cast<long long>(t) * 2 + (stage == 2 ? 1 : 0)) * 16'000'000LL + cell;
    };
    auto hval = [&](int cell, int stage) {
        if (stage == 0)
            return d_seg0[static_cast<size_t>(cell)] + seg_ticks + d_home[static_cast<size_t>(seg_back)];
        return d_home[static_cast<size_t>(cell)];
    };

    int start_cell = map.index(q.agent_start);
    if (!pos_free(start_cell, q.t0)) return std::nullopt;
    arena.push_back({start_cell, q.t0, 0, -1, false});
    open.insert({q.t0 + hval(start_cell, 0), q.t0, start_cell, 0, 0});

    while (!open.empty()) {
        auto it = open.begin();
        Key key = *it;
        open.erase(it);
        MlNode n = arena[static_cast<size_t>(key.idx)];
        long long ck = state_key(n.cell, n.t, n.stage);
        if (closed.count(ck)) continue;
        closed[ck] = 1;

        if (n.stage == 2 && n.cell == home && n.t > park_after_home) {
            // Reconstruct, expanding the committed segment.
            std::vector<std::pair<int, MlNode>> chain;
            for (int cur = key.idx; cur >= 0; cur = arena[static_cast<size_t>(cur)].parent)
                chain.push_back({cur, arena[static_cast<size_t>(cur)]});
            std::reverse(chain.begin(), chain.end());
            MultiLabelPath out;
            out.t0 = q.t0;
            int lift_abs = -1, place_abs = -1;
            for (size_t ci = 0; ci < chain.size(); ++ci) {
                const MlNode& cn = chain[ci].second;
                if (cn.committed) {
                    lift_abs = cn.t - seg_ticks;
                    place_abs = cn.t;
                    for (int i = 1; i <= seg_ticks; ++i)
                        out.cells.push_back(q.segment[static_cast<size_t>(i)]);
                } else {
                    out.cells.push_back(map.cell(cn.cell));
                }
            }
            if (lift_abs < 0) lift_abs = place_abs = q.t0;  // degenerate
            out.lift_index = lift_abs - q.t0;
            out.place_index = place_abs - q.t0;
            return out;
        }

        if (n.t + 1 > q.max_t) continue;

        auto push_state = [&](int cell, int t, int stage, int parent, bool committed) {
            if (closed.count(state_key(cell, t, stage))) return;
            int idx = static_cast<int>(arena.size());
            arena.push_back({cell, t, stage, parent, committed});
            open.insert({t + hval(cell, stage), t, cell, stage, idx});
        };

        if (n.stage == 0 && n.cell == seg0 && n.t >= earliest_lift) {
            // Commit: execute the forced segment verbatim, no inserted waits.
            bool ok = seg_ticks == 0 || n.t + seg_ticks <= q.max_t;
            int prev = seg0;
            for (int i = 1; ok && i <= seg_ticks; ++i) {
                int cell = map.index(q.segment[static_cast<size_t>(i)]);
                if (!pos_free(cell, n.t + i) || !move_ok(prev, cell, n.t + i - 1)) ok = false;
                prev = cell;
            }
            if (ok) push_state(seg_back, n.t + seg_ticks, 2, key.idx, true);
        }
        int move_stage = n.stage;
        auto try_move = [&](int to) {
            if (!pos_free(to, n.t + 1) || !move_ok(n.cell, to, n.t)) return;
            push_state(to, n.t + 1, move_stage, key.idx, false);
        };
        try_move(n.cell);
        for (int nb : map.neighbors(n.cell))
            if (nb >= 0) try_move(nb);
    }
    return std::nullopt;
}

}  // namespace ddmapd::mapf
