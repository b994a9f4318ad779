#pragma once

#include "ddmapd/decomp.hpp"
#include "ddmapd/instance.hpp"
#include "ddmapd/mapf.hpp"

namespace ddmapd::baselines {

// Total order over carried stretches of a sequential solution.
// Concatenating the moves of one shelf's segments reproduces its
// trajectory with waits removed.
struct SegmentOrder {
    struct Segment {
        int shelf = -1;
        std::vector<Cell> cells;  // cells[0] = carry start, then one move per entry
    };
    std::vector<Segment> segments;
};

SegmentOrder extract_segments(const mapf::MapfSolution& sequential);

// Single-agent lockstep baseline: agent 0 executes step t of every shelf
// trajectory before any shelf's step t+1; all other agents wait at their
// starts. Trajectories are safe and 1-robust.
decomp::RunResult run_base(const Instance& inst, const decomp::DecompConfig& cfg);

// Single-agent segment baseline: agent 0 executes the segments of a
// sequential pebble-motion solution in their total order, each segment in
// one contiguous carry.
decomp::RunResult run_pas(const Instance& inst, const decomp::DecompConfig& cfg);

}  // namespace ddmapd::baselines
