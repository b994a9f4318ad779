#pragma once

#include <string>
#include <vector>

#include "ddmapd/execution.hpp"
#include "ddmapd/instance.hpp"

namespace ddmapd {

enum class ViolationType {
    agent_vertex_collision,
    agent_edge_collision,
    shelf_vertex_collision,
    shelf_edge_collision,
    agent_teleport,
    shelf_teleport,
    move_while_uncarried,
    carry_mismatch,   // carrier and shelf not co-located, or shelf left behind
    double_carry,     // one shelf held by two agents at the same timestep
    blocked_cell,
    start_mismatch,
    undelivered,
    metric_mismatch,
};

const char* violation_name(ViolationType t);

struct Violation {
    ViolationType type;
    int a = -1;  // agent or shelf id (context-dependent)
    int b = -1;  // second id for collisions
    int t = -1;
    Cell cell{};
    std::string describe() const;
};

struct ValidationReport {
    bool structural_ok = true;
    std::string structural_error;
    std::vector<Violation> violations;

    bool clean() const { return structural_ok && violations.empty(); }
    std::string summary() const;
};

// Full check of an execution log against an instance and the two-deck
// collision semantics. An empty report means a valid solution.
ValidationReport validate(const Instance& inst, const ExecutionLog& log);

}  // namespace ddmapd
