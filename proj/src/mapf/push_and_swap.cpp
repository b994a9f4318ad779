#include <algorithm>
#include <deque>

#include "ddmapd/mapf.hpp"
#include "stastar.hpp"

namespace ddmapd::mapf {

namespace {

// Sequential pebble-motion state: one shelf moves per timestep, always
// into an empty cell.
struct Sequential {
    const GridMap& map;
    std::vector<uint8_t> wall;      // blocked + forbidden + done shelves
    std::vector<int> occupant;      // cell -> shelf or -1
    std::vector<int> pos;           // shelf -> cell
    std::vector<char> done;
    struct Move {
        int shelf, from, to;
    };
    std::vector<Move> moves;

    explicit Sequential(const GridMap& m) : map(m) {}

    void apply(int shelf, int to) {
        moves.push_back({shelf, pos[static_cast<size_t>(shelf)], to});
        occupant[static_cast<size_t>(pos[static_cast<size_t>(shelf)])] = -1;
        occupant[static_cast<size_t>(to)] = shelf;
        pos[static_cast<size_t>(shelf)] = to;
    }

    size_t checkpoint() const { return moves.size(); }
    void rollback(size_t mark) {
        while (moves.size() > mark) {
            Move mv = moves.back();
            moves.pop_back();
            occupant[static_cast<size_t>(mv.to)] = -1;
            occupant[static_cast<size_t>(mv.from)] = mv.shelf;
            pos[static_cast<size_t>(mv.shelf)] = mv.from;
        }
    }

    // BFS over non-wall cells with an extra exclusion mask.
    std::vector<int> bfs(int from, const std::vector<uint8_t>& exclude) const {
        std::vector<int> dist(static_cast<size_t>(map.size()), -1);
        if (wall[static_cast<size_t>(from)] || exclude[static_cast<size_t>(from)]) return dist;
        std::deque<int> q{from};
        dist[static_cast<size_t>(from)] = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int nb : map.neighbors(v)) {
                if (nb < 0 || dist[static_cast<size_t>(nb)] >= 0) continue;
                if (wall[static_cast<size_t>(nb)] || exclude[static_cast<size_t>(nb)]) continue;
                dist[static_cast<size_t>(nb)] = dist[static_cast<size_t>(v)] + 1;
                q.push_back(nb);
            }
        }
        return dist;
    }

    // Pushes the blocker at `cell` (and any shelves behind it) off to the
    // nearest empty cell, avoiding the mover and its remaining corridor.
    bool clear_cell(int cell, const std::vector<uint8_t>& keep_out) {
        auto dist = bfs(cell, keep_out);
        int target = -1, best = -1;
        for (int v = 0; v < map.size(); ++v) {
            if (dist[static_cast<size_t>(v)] <= 0 || occupant[static_cast<size_t>(v)] >= 0) continue;
            if (best < 0 || dist[static_cast<size_t>(v)] < best) {
                best = dist[static_cast<size_t>(v)];
                target = v;
            }
        }
        if (target < 0) return false;
        // Reconstruct the escape path, then cascade occupants outward.
        std::vector<int> path{target};
        int cur = target;
        while (cur != cell) {
            int nxt = -1;
            for (int nb : map.neighbors(cur)) {
                if (nb < 0 || dist[static_cast<size_t>(nb)] != dist[static_cast<size_t>(cur)] - 1) continue;
                if (nxt < 0 || nb < nxt) nxt = nb;
            }
            cur = nxt;
            path.push_back(cur);
        }
        std::reverse(path.begin(), path.end());  // cell ... target
        for (int i = static_cast<int>(path.size()) - 2; i >= 0; --i) {
            int occ = occupant[static_cast<size_t>(path[static_cast<size_t>(i)])];
            if (occ >= 0) apply(occ, path[static_cast<size_t>(i) + 1]);
        }
        return occupant[static_cast<size_t>(cell)] < 0;
    }

    bool route(int shelf, int goal) {
        if (pos[static_cast<size_t>(shelf)] == goal) return true;
        std::vector<uint8_t> none(static_cast<size_t>(map.size()), 0);
        auto dist = bfs(goal, none);
        int cur = pos[static_cast<size_t>(shelf)];
        if (dist[static_cast<size_t>(cur)] < 0) return false;
        std::vector<int> path{cur};
        while (cur != goal) {
            int nxt = -1;
            for (int nb : map.neighbors(cur)) {
                if (nb < 0 || dist[static_cast<size_t>(nb)] != dist[static_cast<size_t>(cur)] - 1) continue;
                if (nxt < 0 || nb < nxt) nxt = nb;
            }
            cur = nxt;
            path.push_back(cur);
        }
        for (size_t i = 1; i < path.size(); ++i) {
            int v = path[i];
            if (occupant[static_cast<size_t>(v)] >= 0) {
                // Escapes stay off the corridor still ahead of the mover.
                std::vector<uint8_t> keep_out(static_cast<size_t>(map.size()), 0);
                keep_out[static_cast<size_t>(pos[static_cast<size_t>(shelf)])] = 1;
                for (size_t a = i + 1; a < path.size(); ++a) keep_out[static_cast<size_t>(path[a])] = 1;
                if (!clear_cell(v, keep_out)) return false;
            }
            apply(shelf, v);
        }
        return true;
    }
};

}  // namespace

MapfSolution solve_push_and_swap(const MapfProblem& p) {
    MapfSolution sol;
    auto started = detail::Clock::now();
    auto finish = [&](SolveStatus st) {
        sol.status = st;
        sol.stats.runtime_s =
            std::chrono::duration<double>(detail::Clock::now() - started).count();
        return sol;
    };
    const GridMap& map = *p.map;
    const int M = static_cast<int>(p.starts.size());

    Sequential seq(map);
    seq.wall.assign(static_cast<size_t>(map.size()), 0);
    for (int v = 0; v < map.size(); ++v)
        if (map.blocked(map.cell(v))) seq.wall[static_cast<size_t>(v)] = 1;
    for (Cell c : p.forbidden_cells) seq.wall[static_cast<size_t>(map.index(c))] = 1;
    seq.occupant.assign(static_cast<size_t>(map.size()), -1);
    seq.pos.resize(static_cast<size_t>(M));
    seq.done.assign(static_cast<size_t>(M), 0);
    int usable = 0;
    for (int v = 0; v < map.size(); ++v)
        if (!seq.wall[static_cast<size_t>(v)]) ++usable;
    if (usable - M < 2) return finish(SolveStatus::unsolvable);
    for (int j = 0; j < M; ++j) {
        int v = map.index(p.starts[static_cast<size_t>(j)]);
        if (seq.wall[static_cast<size_t>(v)] || seq.occupant[static_cast<size_t>(v)] >= 0)
            return finish(SolveStatus::unsolvable);
        seq.occupant[static_cast<size_t>(v)] = j;
        seq.pos[static_cast<size_t>(j)] = v;
    }

    // Settle shelves whose goal cell is currently unoccupied first; this
    // resolves rotation chains in topological order. A full cycle of
    // occupied goals is broken by evicting one occupant sideways.
    std::vector<int> goal_cell(static_cast<size_t>(M));
    for (int j = 0; j < M; ++j)
        goal_cell[static_cast<size_t>(j)] = map.index(p.goals[static_cast<size_t>(j)]);
    auto candidates = [&] {
        // Shelves that still need to travel come first; parked ones settle
        // late so their cells stay usable for clearing.
        std::vector<int> order;
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < M; ++j) {
                if (seq.done[static_cast<size_t>(j)]) continue;
                bool moving = seq.pos[static_cast<size_t>(j)] != goal_cell[static_cast<size_t>(j)];
                if ((pass == 0) == moving) order.push_back(j);
            }
        return order;
    };

    int remaining = M;
    while (remaining > 0) {
        int settled = -1;
        for (int j : candidates()) {
            int occ = seq.occupant[static_cast<size_t>(goal_cell[static_cast<size_t>(j)])];
            if (occ >= 0 && occ != j) continue;  // goal blocked: defer
            size_t mark = seq.checkpoint();
            if (seq.route(j, goal_cell[static_cast<size_t>(j)])) {
                settled = j;
                break;
            }
            seq.rollback(mark);
        }
        if (settled < 0) {
            // Every remaining goal is occupied by another waiting shelf:
            // evict one occupant to the nearest empty cell.
            std::vector<uint8_t> no_exclusions(static_cast<size_t>(map.size()), 0);
            for (int j : candidates()) {
                int g = goal_cell[static_cast<size_t>(j)];
                if (seq.occupant[static_cast<size_t>(g)] < 0) continue;
                size_t mark = seq.checkpoint();
                if (seq.clear_cell(g, no_exclusions) && seq.route(j, g)) {
                    settled = j;
                    break;
                }
                seq.rollback(mark);
            }
        }
        // No route and no eviction helped; the state is unchanged, so
        // retrying cannot succeed either.
        if (settled < 0) return finish(SolveStatus::unsolvable);
        seq.done[static_cast<size_t>(settled)] = 1;
        seq.wall[static_cast<size_t>(seq.pos[static_cast<size_t>(settled)])] = 1;
        --remaining;
    }

    // Expand the move list into timed paths: one move per timestep.
    int T = static_cast<int>(seq.moves.size());
    sol.paths.assign(static_cast<size_t>(M), {});
    std::vector<int> cur(static_cast<size_t>(M));
    for (int j = 0; j < M; ++j) {
        cur[static_cast<size_t>(j)] = map.index(p.starts[static_cast<size_t>(j)]);
        sol.paths[static_cast<size_t>(j)].reserve(static_cast<size_t>(T) + 1);
        sol.paths[static_cast<size_t>(j)].push_back(p.starts[static_cast<size_t>(j)]);
    }
    for (int t = 0; t < T; ++t) {
        cur[static_cast<size_t>(seq.moves[static_cast<size_t>(t)].shelf)] =
            seq.moves[static_cast<size_t>(t)].to;
        for (int j = 0; j < M; ++j)
            sol.paths[static_cast<size_t>(j)].push_back(map.cell(cur[static_cast<size_t>(j)]));
    }
    // Trim trailing waits per shelf and account the flowtime.
    for (int j = 0; j < M; ++j) {
        auto& path = sol.paths[static_cast<size_t>(j)];
        int last = 0;
        for (int t = 1; t < static_cast<int>(path.size()); ++t)
            if (path[static_cast<size_t>(t)] != path[static_cast<size_t>(t) - 1]) last = t;
        path.resize(static_cast<size_t>(last) + 1);
        sol.cost += last;
    }
    // Segment tagging: maximal runs of consecutive moves by one shelf.
    for (int t = 0; t < T;) {
        int shelf = seq.moves[static_cast<size_t>(t)].shelf;
        int len = 0;
        while (t + len < T && seq.moves[static_cast<size_t>(t) + len].shelf == shelf) ++len;
        sol.segments.push_back({shelf, t, len});
        t += len;
    }
    return finish(SolveStatus::solved);
}

}  // namespace ddmapd::mapf
