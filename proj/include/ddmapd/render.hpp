#pragma once

#include <string>

#include "ddmapd/execution.hpp"
#include "ddmapd/instance.hpp"

namespace ddmapd::render {

// Writes one SVG per timestep (frame_0000.svg, ...) showing both decks:
// shelves as squares on top of the agent circles. Read-only over its
// inputs; returns the number of frames written.
int write_frames(const Instance& inst, const ExecutionLog& log, const std::string& out_dir,
                 int cell_px = 24);

}  // namespace ddmapd::render
