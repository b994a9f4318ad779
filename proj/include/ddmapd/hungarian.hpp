#pragma once

#include <cstdint>
#include <vector>

namespace ddmapd {

// Cost of an (agent, shelf) pair that is effectively unreachable. Pairs at
// this cost are matched only when no finite alternative completes a maximum
// matching, and are stripped from the result.
inline constexpr long long kUnreachableCost = 1'000'000'000LL;

struct CostMatrix {
    int rows = 0;  // free agents
    int cols = 0;  // candidate shelves
    std::vector<long long> cost;  // row-major

    long long& at(int r, int c) { return cost[static_cast<size_t>(r) * cols + c]; }
    long long at(int r, int c) const { return cost[static_cast<size_t>(r) * cols + c]; }
};

struct AssignmentResult {
    // row -> col, -1 for unmatched rows; exactly min(rows, cols) pairs
    // before sentinel stripping.
    std::vector<int> match;
    long long total_cost = 0;
};

// Minimal-cost bipartite assignment of size min(rows, cols). Rows are
// pre-reduced by their minima, so adding a constant to a row never changes
// the returned matching.
AssignmentResult hungarian(const CostMatrix& costs);

}  // namespace ddmapd
