#pragma once

// Independent reference implementations used to freeze expected values in
// tests. These deliberately avoid the library's solver code paths.

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <vector>

#include "ddmapd/conflicts.hpp"
#include "ddmapd/dependency.hpp"
#include "ddmapd/grid.hpp"
#include "ddmapd/hungarian.hpp"
#include "ddmapd/trajectory.hpp"

namespace oracles {

using ddmapd::Cell;
using ddmapd::GridMap;

// Plain quadratic scan over padded paths; each pair is scanned up to its
// own horizon (both parked afterwards, so later repeats add nothing).
inline std::vector<ddmapd::PathConflict> conflict_scan(
    const std::vector<std::vector<Cell>>& paths) {
    std::vector<ddmapd::PathConflict> out;
    auto at = [&](size_t i, size_t t) {
        const auto& p = paths[i];
        return t < p.size() ? p[t] : p.back();
    };
    for (size_t i = 0; i < paths.size(); ++i)
        for (size_t j = i + 1; j < paths.size(); ++j) {
            size_t H = std::max(paths[i].size(), paths[j].size());
            for (size_t t = 0; t < H; ++t) {
                if (at(i, t) == at(j, t))
                    out.push_back({ddmapd::ConflictType::vertex, static_cast<int>(i),
                                   static_cast<int>(j), static_cast<int>(t), at(i, t), {}});
                if (t + 1 < H && at(i, t) == at(j, t + 1) && at(i, t + 1) == at(j, t) &&
                    at(i, t) != at(i, t + 1))
                    out.push_back({ddmapd::ConflictType::edge, static_cast<int>(i),
                                   static_cast<int>(j), static_cast<int>(t), at(i, t),
                                   at(i, t + 1)});
            }
        }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.t != y.t) return x.t < y.t;
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return static_cast<int>(x.type) < static_cast<int>(y.type);
    });
    return out;
}

// Exact minimum flowtime (sum of final goal-arrival times) over joint
// states via Dijkstra. Agents at their goals may commit to staying; done
// agents are frozen obstacles. Supports up to 3 agents on small maps.
// Returns -1 when unsolvable within the horizon.
inline long long joint_flowtime(const GridMap& map, const std::vector<Cell>& starts,
                                const std::vector<Cell>& goals, bool one_robust = false) {
    const int k = static_cast<int>(starts.size());
    const int V = map.size();
    auto encode = [&](const std::vector<int>& cells, int mask) {
        long long key = mask;
        for (int i = 0; i < k; ++i) key = key * V + cells[static_cast<size_t>(i)];
        return key;
    };
    std::vector<int> start_cells, goal_cells;
    for (Cell c : starts) start_cells.push_back(map.index(c));
    for (Cell c : goals) goal_cells.push_back(map.index(c));

    using Entry = std::pair<long long, long long>;  // cost, state key
    std::map<long long, long long> dist;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    std::map<long long, std::pair<std::vector<int>, int>> decode;

    long long s0 = encode(start_cells, 0);
    dist[s0] = 0;
    decode[s0] = {start_cells, 0};
    pq.push({0, s0});
    const int full = (1 << k) - 1;

    while (!pq.empty()) {
        auto [d, key] = pq.top();
        pq.pop();
        if (dist[key] != d) continue;
        auto [cells, mask] = decode[key];
        if (mask == full) return d;

        // Zero-cost commit transitions.
        for (int i = 0; i < k; ++i) {
            if ((mask >> i) & 1) continue;
            if (cells[static_cast<size_t>(i)] != goal_cells[static_cast<size_t>(i)]) continue;
            long long nk = encode(cells, mask | (1 << i));
            auto it = dist.find(nk);
            if (it == dist.end() || it->second > d) {
                dist[nk] = d;
                decode[nk] = {cells, mask | (1 << i)};
                pq.push({d, nk});
            }
        }

        // Joint moves of all non-done agents; each costs 1.
        std::vector<int> movers;
        for (int i = 0; i < k; ++i)
            if (!((mask >> i) & 1)) movers.push_back(i);
        if (movers.empty()) continue;
        long long step_cost = static_cast<long long>(movers.size());

        std::vector<std::vector<int>> options(movers.size());
        for (size_t m = 0; m < movers.size(); ++m) {
            int c = cells[static_cast<size_t>(movers[m])];
            options[m].push_back(c);
            for (int nb : map.neighbors(c))
                if (nb >= 0) options[m].push_back(nb);
        }
        std::vector<size_t> pick(movers.size(), 0);
        while (true) {
            std::vector<int> next = cells;
            for (size_t m = 0; m < movers.size(); ++m)
                next[static_cast<size_t>(movers[m])] = options[m][pick[m]];
            bool ok = true;
            for (int i = 0; i < k && ok; ++i)
                for (int j = i + 1; j < k && ok; ++j) {
                    if (next[static_cast<size_t>(i)] == next[static_cast<size_t>(j)]) ok = false;
                    if (next[static_cast<size_t>(i)] == cells[static_cast<size_t>(j)] &&
                        next[static_cast<size_t>(j)] == cells[static_cast<size_t>(i)] &&
                        next[static_cast<size_t>(i)] != cells[static_cast<size_t>(i)])
                        ok = false;
                }
            if (ok && one_robust) {
                for (int i = 0; i < k && ok; ++i)
                    for (int j = 0; j < k && ok; ++j) {
                        if (i == j) continue;
                        if (next[static_cast<size_t>(i)] != cells[static_cast<size_t>(i)] &&
                            next[static_cast<size_t>(i)] == cells[static_cast<size_t>(j)])
                            ok = false;
                    }
            }
            if (ok) {
                long long nk = encode(next, mask);
                long long nd = d + step_cost;
                auto it = dist.find(nk);
                if (it == dist.end() || it->second > nd) {
                    dist[nk] = nd;
                    decode[nk] = {next, mask};
                    pq.push({nd, nk});
                }
            }
            size_t m = 0;
            while (m < movers.size() && ++pick[m] == options[m].size()) pick[m++] = 0;
            if (m == movers.size()) break;
        }
    }
    return -1;
}

// Brute-force dependency edge set: quadruple loop over entry pairs.
inline std::vector<ddmapd::DepEdge> dep_edges(const ddmapd::TrajectorySet& ts) {
    std::vector<ddmapd::DepEdge> out;
    const auto& tr = ts.trajectories;
    for (size_t j = 0; j < tr.size(); ++j)
        for (size_t j2 = 0; j2 < tr.size(); ++j2) {
            if (j == j2) continue;
            for (size_t k = 0; k < tr[j].entries.size(); ++k)
                for (size_t k2 = 0; k2 < tr[j2].entries.size(); ++k2)
                    if (k > k2 && tr[j].entries[k] == tr[j2].entries[k2])
                        out.push_back({static_cast<int>(j), static_cast<int>(k),
                                       static_cast<int>(j2), static_cast<int>(k2) + 1});
        }
    std::sort(out.begin(), out.end());
    return out;
}

// Exhaustive assignment minimum for matrices with min(rows, cols) <= 8:
// tries every injection of the smaller side into the larger.
inline long long assignment_min(const ddmapd::CostMatrix& m) {
    bool rows_small = m.rows <= m.cols;
    int small = rows_small ? m.rows : m.cols;
    int large = rows_small ? m.cols : m.rows;
    std::vector<int> perm(static_cast<size_t>(large));
    for (int i = 0; i < large; ++i) perm[static_cast<size_t>(i)] = i;
    long long best = std::numeric_limits<long long>::max();
    std::sort(perm.begin(), perm.end());
    do {
        long long c = 0;
        for (int i = 0; i < small; ++i)
            c += rows_small ? m.at(i, perm[static_cast<size_t>(i)])
                            : m.at(perm[static_cast<size_t>(i)], i);
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace oracles
