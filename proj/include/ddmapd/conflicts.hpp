#pragma once

#include <span>
#include <vector>

#include "ddmapd/grid.hpp"

namespace ddmapd {

enum class ConflictType { vertex, edge };

struct PathConflict {
    ConflictType type = ConflictType::vertex;
    int a = -1;    // lower path id
    int b = -1;    // higher path id
    int t = 0;     // vertex: time of co-location; edge: time the swap starts
    Cell cell{};   // vertex cell, or a's cell at t for an edge conflict
    Cell cell2{};  // edge conflicts: a's cell at t+1

    friend bool operator==(const PathConflict& x, const PathConflict& y) {
        return x.type == y.type && x.a == y.a && x.b == y.b && x.t == y.t &&
               x.cell == y.cell && x.cell2 == y.cell2;
    }
};

// Position on a timed path with the standard padding rule: beyond its end
// a path stays at its final cell.
inline Cell path_at(std::span<const Cell> path, int t) {
    if (t < 0) t = 0;
    if (t >= static_cast<int>(path.size())) return path.back();
    return path[static_cast<size_t>(t)];
}

// All vertex and edge conflicts between two timed paths (shorter padded by
// its final cell), ordered by ascending t, vertex before edge at equal t.
std::vector<PathConflict> collision_check(std::span<const Cell> a, std::span<const Cell> b,
                                          int id_a = 0, int id_b = 1);

// Pairwise scan over a set of paths; conflicts ordered by (t, a, b, type).
std::vector<PathConflict> collision_check_all(const std::vector<std::vector<Cell>>& paths);

}  // namespace ddmapd
