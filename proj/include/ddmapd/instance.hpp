#pragma once

#include <string>
#include <vector>

#include "ddmapd/grid.hpp"

namespace ddmapd {

struct Shelf {
    Cell pickup;
    Cell delivery;
    bool needs_relocation() const { return pickup != delivery; }
};

// A problem instance: N agents rearranging M >= N shelves on a grid.
// Agents move beneath shelves freely; collisions are checked separately
// among agents and among shelves.
struct Instance {
    GridMap map;
    std::vector<Cell> agent_starts;
    std::vector<Shelf> shelves;

    int num_agents() const { return static_cast<int>(agent_starts.size()); }
    int num_shelves() const { return static_cast<int>(shelves.size()); }

    // Returns a list of invariant violations; empty means the instance is valid.
    std::vector<std::string> validate() const;

    // JSON object {map: <path>, agents: [[r,c],...],
    //              shelves: [{pickup:[r,c], delivery:[r,c]},...]}.
    // The map path is resolved relative to the instance file's directory.
    static Instance load(const std::string& path);
    void save(const std::string& instance_path, const std::string& map_path) const;
};

}  // namespace ddmapd
