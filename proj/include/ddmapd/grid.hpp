#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ddmapd {

// Grid cell addressed as (row, col), 0-based, row-major.
struct Cell {
    int row = 0;
    int col = 0;

    friend bool operator==(const Cell& a, const Cell& b) {
        return a.row == b.row && a.col == b.col;
    }
    friend bool operator!=(const Cell& a, const Cell& b) { return !(a == b); }
    friend bool operator<(const Cell& a, const Cell& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    }
};

struct CellHash {
    size_t operator()(const Cell& c) const {
        return std::hash<long long>()((static_cast<long long>(c.row) << 32) ^
                                      static_cast<unsigned>(c.col));
    }
};

// 4-neighbor grid map. Free cells must form a connected graph.
class GridMap {
public:
    GridMap() = default;
    GridMap(int width, int height, std::vector<uint8_t> blocked = {});

    // MovingAI-style text format: "type octile" / "height H" / "width W" /
    // "map" followed by H rows of W chars, '.' free, '@' blocked.
    static GridMap parse(const std::string& text);
    static GridMap load(const std::string& path);
    std::string serialize() const;
    void save(const std::string& path) const;

    int width() const { return width_; }
    int height() const { return height_; }
    int size() const { return width_ * height_; }

    bool in_bounds(Cell c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    bool blocked(Cell c) const { return blocked_[index(c)] != 0; }
    bool free(Cell c) const { return in_bounds(c) && !blocked(c); }

    int index(Cell c) const { return c.row * width_ + c.col; }
    Cell cell(int idx) const { return Cell{idx / width_, idx % width_}; }

    // Free neighbors of a free cell; -1 entries are padding.
    const std::array<int, 4>& neighbors(int idx) const { return adj_[idx]; }

    int free_cell_count() const { return free_count_; }
    bool free_cells_connected() const;

    // BFS distances over free cells from `from`; -1 where unreachable.
    // `extra_blocked`, when given, marks further cells to treat as walls.
    std::vector<int> bfs_distances(int from) const;
    std::vector<int> bfs_distances(int from, const std::vector<uint8_t>& extra_blocked) const;

    // Shortest cell path between two free cells avoiding extra walls;
    // empty when unreachable. Ties resolved toward smaller (row, col).
    std::vector<Cell> shortest_path(Cell from, Cell to,
                                    const std::vector<uint8_t>& extra_blocked = {}) const;

private:
    void build_adjacency();

    int width_ = 0;
    int height_ = 0;
    int free_count_ = 0;
    std::vector<uint8_t> blocked_;
    std::vector<std::array<int, 4>> adj_;
};

}  // namespace ddmapd
