#pragma once

#include <vector>

#include "ddmapd/decomp.hpp"
#include "ddmapd/instance.hpp"

namespace ddmapd::pp {

struct WellFormedReport {
    bool starts_distinct = false;
    bool connectivity = false;  // G minus any N-1 starts stays connected
    std::vector<int> disconnecting_agents;  // agents i where removing the others fails
    // Constructive check: a safe 1-robust trajectory set was found within
    // budget. Reported empirically, never as a disproof.
    bool safe_solution_checked = false;
    bool safe_solution_found = false;

    bool structurally_well_formed() const { return starts_distinct && connectivity; }
};

WellFormedReport check_well_formed(const Instance& inst, bool attempt_trajectories = false,
                                   double budget_s = 10.0);

// Prioritized variant: safe 1-robust shelf trajectories, one minimum-cost
// (agent, shelf) commitment per round, multi-label paths that return to the
// agent's own start, and start-terminating dummy paths throughout. Complete
// for well-formed instances.
decomp::RunResult run_pp(const Instance& inst, const decomp::DecompConfig& cfg);

}  // namespace ddmapd::pp
