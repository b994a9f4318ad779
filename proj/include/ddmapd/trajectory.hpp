#pragma once

#include <string>
#include <vector>

#include "ddmapd/grid.hpp"
#include "ddmapd/instance.hpp"

namespace ddmapd {

// Planned timed location sequence of one shelf. entries[0] is the pickup,
// entries.back() the delivery; consecutive entries are equal (wait) or
// adjacent (one move).
struct Trajectory {
    int shelf = -1;
    std::vector<Cell> entries;

    int last_step() const { return static_cast<int>(entries.size()) - 1; }
    // Number of actual moves (waits excluded).
    int move_count() const;
    Cell at(int step) const {
        if (step >= static_cast<int>(entries.size())) return entries.back();
        return entries[static_cast<size_t>(step)];
    }
};

struct TrajectorySet {
    std::vector<Trajectory> trajectories;
    bool is_1robust = false;
    bool is_safe = false;

    long long total_moves() const;
    int num_shelves() const { return static_cast<int>(trajectories.size()); }

    // Checks structure, mutual collision-freedom, and the 1-robust / safe
    // flags against their definitions. Empty result means consistent.
    std::vector<std::string> verify(const Instance& inst) const;
};

// Flag predicates usable on any trajectory set.
bool trajectories_one_robust(const std::vector<Trajectory>& ts);
bool trajectories_safe(const std::vector<Trajectory>& ts, const std::vector<Cell>& agent_starts);

}  // namespace ddmapd
