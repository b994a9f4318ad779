#pragma once

#include <string>
#include <vector>

#include "ddmapd/grid.hpp"

namespace ddmapd {

// carrying[t] is the shelf held during the transition t -> t+1, or -1.
// The final entry has no following transition and must be -1.
struct AgentTrace {
    std::vector<Cell> path;
    std::vector<int> carrying;
};

struct ShelfTrace {
    std::vector<Cell> path;
};

// Per-timestep record of a full execution: agent locations, shelf
// locations and the carry relation. Makespan and flowtime are derived
// from agent completion times.
struct ExecutionLog {
    std::vector<AgentTrace> agents;
    std::vector<ShelfTrace> shelves;

    // Metrics as declared in a loaded file (-1 when absent); the validator
    // checks them against the derived values.
    int declared_makespan = -1;
    long long declared_flowtime = -1;

    // Completion time of an agent: the earliest t after which its location
    // never changes (0 for an agent that never moves).
    int completion_time(int agent) const;
    int makespan() const;
    long long flowtime() const;

    // Longest stored path length minus one (for padded access).
    int horizon() const;

    static ExecutionLog load(const std::string& path);
    void save(const std::string& path) const;
    std::string to_json_string() const;
    static ExecutionLog from_json_string(const std::string& text);
};

}  // namespace ddmapd
