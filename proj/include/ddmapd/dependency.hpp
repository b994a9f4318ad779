#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ddmapd/trajectory.hpp"

namespace ddmapd {

// Precedence edge between trajectory entries: entry (from_shelf, from_step)
// may be occupied no earlier than entry (to_shelf, to_step) has been
// reached. Built for every pair of entries of distinct shelves that share a
// cell, with the later visitor depending on the earlier one having moved on.
struct DepEdge {
    int from_shelf;
    int from_step;
    int to_shelf;
    int to_step;

    friend bool operator==(const DepEdge& a, const DepEdge& b) {
        return a.from_shelf == b.from_shelf && a.from_step == b.from_step &&
               a.to_shelf == b.to_shelf && a.to_step == b.to_step;
    }
    friend bool operator<(const DepEdge& a, const DepEdge& b) {
        if (a.from_shelf != b.from_shelf) return a.from_shelf < b.from_shelf;
        if (a.from_step != b.from_step) return a.from_step < b.from_step;
        if (a.to_shelf != b.to_shelf) return a.to_shelf < b.to_shelf;
        return a.to_step < b.to_step;
    }
};

// Directed graph over trajectory entries. The edge set is fixed at build
// time; release state is a function of the per-shelf step counters: an edge
// is released once steps[to_shelf] >= to_step. This keeps simulated
// look-ahead cheap (copy the step vector, nothing else).
class DependencyGraph {
public:
    DependencyGraph() = default;
    explicit DependencyGraph(const TrajectorySet& traj) { build(traj); }

    void build(const TrajectorySet& traj);

    const std::vector<DepEdge>& edges() const { return edges_; }
    std::span<const int> out_edge_ids(int shelf, int step) const;
    const DepEdge& edge(int id) const { return edges_[static_cast<size_t>(id)]; }

    bool released(int edge_id, const std::vector<int>& steps) const {
        const DepEdge& e = edges_[static_cast<size_t>(edge_id)];
        return steps[static_cast<size_t>(e.to_shelf)] >= e.to_step;
    }
    int unreleased_out_degree(int shelf, int step, const std::vector<int>& steps) const;
    // The unique unreleased out-edge, when the out-degree is exactly one.
    std::optional<DepEdge> single_unreleased_out(int shelf, int step,
                                                 const std::vector<int>& steps) const;

    int num_shelves() const { return static_cast<int>(entry_counts_.size()); }
    int entry_count(int shelf) const { return entry_counts_[static_cast<size_t>(shelf)]; }

    // True when the initial edge set contains no directed cycle.
    bool acyclic() const;

private:
    int entry_id(int shelf, int step) const {
        return entry_offsets_[static_cast<size_t>(shelf)] + step;
    }

    std::vector<DepEdge> edges_;
    std::vector<int> entry_counts_;
    std::vector<int> entry_offsets_;
    // CSR out-edge ids per entry.
    std::vector<int> out_offsets_;
    std::vector<int> out_ids_;
};

}  // namespace ddmapd
