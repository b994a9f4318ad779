#pragma once

// Internal space-time A* machinery shared by the MAPF solvers.

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ddmapd/grid.hpp"

namespace ddmapd::mapf::detail {

using Clock = std::chrono::steady_clock;

struct Deadline {
    Clock::time_point end;
    static Deadline after(double seconds) {
        return Deadline{Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(seconds))};
    }
    bool passed() const { return Clock::now() >= end; }
};

inline long long vt_key(int cell, int t) { return static_cast<long long>(t) * 16'000'000LL + cell; }
inline long long edge_key(int from, int to, int t) {
    return (static_cast<long long>(t) * 16'000'000LL + from) * 16'000'000LL + to;
}

// Hard moving obstacles built from timed paths (absolute time, index 0 =
// time 0); a path stays parked at its final cell forever.
class ReservationTable {
public:
    explicit ReservationTable(const GridMap& map) : map_(&map) {}

    void add_path(const std::vector<Cell>& path);

    bool vertex(int cell, int t) const {
        if (t >= horizon_) {
            auto it = parked_.find(cell);
            return it != parked_.end() && it->second <= t;
        }
        return cells_.count(vt_key(cell, t)) > 0;
    }
    // True when a frozen path traverses to->from over [t, t+1] (a swap with
    // a move from->to).
    bool reverse_edge(int from, int to, int t) const {
        return edges_.count(edge_key(to, from, t)) > 0;
    }
    // Latest time the cell is used by any frozen path; INT_MAX when a path
    // parks there.
    int last_use(int cell) const {
        auto pit = parked_.find(cell);
        if (pit != parked_.end()) return std::numeric_limits<int>::max();
        auto it = last_use_.find(cell);
        return it == last_use_.end() ? -1 : it->second;
    }
    int horizon() const { return horizon_; }
    bool empty() const { return cells_.empty() && parked_.empty(); }

private:
    const GridMap* map_;
    std::unordered_set<long long> cells_;
    std::unordered_set<long long> edges_;
    std::unordered_map<int, int> parked_;    // cell -> park start time
    std::unordered_map<int, int> last_use_;  // cell -> latest non-parked use
    int horizon_ = 0;
};

// Hard constraints for one agent (from CBS branching).
struct ConstraintSet {
    std::unordered_set<long long> vertices;  // (cell, t)
    std::unordered_set<long long> edges;     // (from, to, t)
    std::unordered_map<int, int> latest_vertex_ban;  // cell -> latest banned t

    void ban_vertex(int cell, int t) {
        vertices.insert(vt_key(cell, t));
        auto& lv = latest_vertex_ban[cell];
        lv = std::max(lv, t);
    }
    void ban_edge(int from, int to, int t) { edges.insert(edge_key(from, to, t)); }
    bool vertex_banned(int cell, int t) const { return vertices.count(vt_key(cell, t)) > 0; }
    bool edge_banned(int from, int to, int t) const { return edges.count(edge_key(from, to, t)) > 0; }
    int latest_ban_at(int cell) const {
        auto it = latest_vertex_ban.find(cell);
        return it == latest_vertex_ban.end() ? -1 : it->second;
    }
};

// Soft conflict counts against the other agents' current paths; guides the
// focal ordering only.
class Cat {
public:
    explicit Cat(const GridMap& map) : map_(&map) {}
    void add_path(const std::vector<Cell>& path);
    void remove_path(const std::vector<Cell>& path);
    // Conflicts created by arriving at `to` (from `from`) at time t, under
    // plain or 1-robust semantics.
    int move_conflicts(int from, int to, int t, bool one_robust) const;
    // Conflicts created by parking at `cell` from time t on.
    int park_conflicts(int cell, int t) const;

private:
    void update(const std::vector<Cell>& path, int delta);
    int occupancy(int cell, int t) const;
    const GridMap* map_;
    std::unordered_map<long long, int> cells_;
    std::unordered_map<long long, int> edges_;
    std::unordered_map<int, std::vector<int>> use_times_;     // cell -> times on the path
    std::unordered_map<int, std::vector<int>> park_starts_;   // cell -> path end times
    int horizon_ = 0;

public:
    int horizon() const { return horizon_; }
};

struct LowLevelQuery {
    const GridMap* map = nullptr;
    int start = -1;
    int goal = -1;
    const std::vector<int>* heuristic = nullptr;  // BFS distances to goal
    const ReservationTable* frozen = nullptr;
    bool one_robust_frozen = false;
    const ConstraintSet* constraints = nullptr;
    const std::vector<uint8_t>* static_forbid = nullptr;
    const Cat* cat = nullptr;
    double omega = 1.0;  // focal bound on path length
    int max_t = 1 << 20;
    int earliest_park = 0;  // parking before this time is not allowed
};

struct LowLevelResult {
    std::vector<Cell> path;
    int f_min = 0;  // lower bound on any feasible path cost under the query
    long long expanded = 0;
};

// Focal space-time A*: returns a path with cost <= omega * optimal among
// paths satisfying the query, minimizing soft conflicts within the bound.
std::optional<LowLevelResult> low_level_search(const LowLevelQuery& q, const Deadline& dl);

}  // namespace ddmapd::mapf::detail
