#include "ddmapd/dependency.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <unordered_map>

namespace ddmapd {

void DependencyGraph::build(const TrajectorySet& traj) {
    edges_.clear();
    entry_counts_.clear();
    entry_offsets_.clear();

    const auto& ts = traj.trajectories;
    int total_entries = 0;
    for (const auto& t : ts) {
        entry_offsets_.push_back(total_entries);
        entry_counts_.push_back(static_cast<int>(t.entries.size()));
        total_entries += static_cast<int>(t.entries.size());
    }

    // Group entries by cell, then create an edge for every ordered pair of
    // same-cell entries of distinct shelves with a strictly later step.
    std::unordered_map<long long, std::vector<std::pair<int, int>>> by_cell;
    for (int j = 0; j < static_cast<int>(ts.size()); ++j) {
        for (int k = 0; k < static_cast<int>(ts[static_cast<size_t>(j)].entries.size()); ++k) {
            Cell c = ts[static_cast<size_t>(j)].entries[static_cast<size_t>(k)];
            long long key = (static_cast<long long>(c.row) << 20) | static_cast<unsigned>(c.col);
            by_cell[key].push_back({j, k});
        }
    }
    for (auto& [key, visits] : by_cell) {
        (void)key;
        for (const auto& [j, k] : visits) {
            for (const auto& [j2, k2] : visits) {
                if (j == j2 || k <= k2) continue;
                // Entry (j, k) waits for shelf j2 to reach step k2+1. A later
                // visitor while j2 is parked forever would be a collision in
                // the trajectory set itself, so the target step exists.
                assert(k2 + 1 < static_cast<int>(ts[static_cast<size_t>(j2)].entries.size()));
                edges_.push_back(DepEdge{j, k, j2, k2 + 1});
            }
        }
    }
    std::sort(edges_.begin(), edges_.end());

    out_offsets_.assign(static_cast<size_t>(total_entries) + 1, 0);
    for (const auto& e : edges_) ++out_offsets_[static_cast<size_t>(entry_id(e.from_shelf, e.from_step)) + 1];
    for (size_t i = 1; i < out_offsets_.size(); ++i) out_offsets_[i] += out_offsets_[i - 1];
    out_ids_.assign(edges_.size(), 0);
    std::vector<int> fill(out_offsets_.begin(), out_offsets_.end() - 1);
    for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
        int ent = entry_id(edges_[static_cast<size_t>(id)].from_shelf, edges_[static_cast<size_t>(id)].from_step);
        out_ids_[static_cast<size_t>(fill[static_cast<size_t>(ent)]++)] = id;
    }
}

std::span<const int> DependencyGraph::out_edge_ids(int shelf, int step) const {
    if (shelf < 0 || shelf >= num_shelves()) return {};
    if (step < 0 || step >= entry_count(shelf)) return {};
    int ent = entry_id(shelf, step);
    return std::span<const int>(out_ids_.data() + out_offsets_[static_cast<size_t>(ent)],
                                static_cast<size_t>(out_offsets_[static_cast<size_t>(ent) + 1] -
                                                    out_offsets_[static_cast<size_t>(ent)]));
}

int DependencyGraph::unreleased_out_degree(int shelf, int step, const std::vector<int>& steps) const {
    int deg = 0;
    for (int id : out_edge_ids(shelf, step))
        if (!released(id, steps)) ++deg;
    return deg;
}

std::optional<DepEdge> DependencyGraph::single_unreleased_out(int shelf, int step,
                                                              const std::vector<int>& steps) const {
    std::optional<DepEdge> found;
    for (int id : out_edge_ids(shelf, step)) {
        if (released(id, steps)) continue;
        if (found) return std::nullopt;
        found = edges_[static_cast<size_t>(id)];
    }
    return found;
}

bool DependencyGraph::acyclic() const {
    // Kahn's algorithm, peeling entries with zero remaining out-degree.
    int total = entry_offsets_.empty() ? 0 : entry_offsets_.back() + entry_counts_.back();
    std::vector<std::vector<int>> incoming(static_cast<size_t>(total));
    std::vector<int> outdeg(static_cast<size_t>(total), 0);
    for (const auto& e : edges_) {
        incoming[static_cast<size_t>(entry_id(e.to_shelf, e.to_step))].push_back(
            entry_id(e.from_shelf, e.from_step));
        ++outdeg[static_cast<size_t>(entry_id(e.from_shelf, e.from_step))];
    }
    std::deque<int> q;
    for (int v = 0; v < total; ++v)
        if (outdeg[static_cast<size_t>(v)] == 0) q.push_back(v);
    int seen = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        ++seen;
        for (int u : incoming[static_cast<size_t>(v)])
            if (--outdeg[static_cast<size_t>(u)] == 0) q.push_back(u);
    }
    return seen == total;
}

}  // namespace ddmapd
