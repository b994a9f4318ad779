#include "ddmapd/hungarian.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ddmapd {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

// Potentials-based assignment for an n x m matrix with n <= m.
// Returns row -> col. Deterministic: columns scanned in increasing order.
std::vector<int> solve_rect(int n, int m, const std::vector<long long>& a) {
    std::vector<long long> u(static_cast<size_t>(n) + 1, 0), v(static_cast<size_t>(m) + 1, 0);
    std::vector<int> p(static_cast<size_t>(m) + 1, 0), way(static_cast<size_t>(m) + 1, 0);
    auto cost = [&](int i, int j) {  // 1-indexed
        return a[static_cast<size_t>(i - 1) * m + (j - 1)];
    };
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(static_cast<size_t>(m) + 1, kInf);
        std::vector<char> used(static_cast<size_t>(m) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            int i0 = p[static_cast<size_t>(j0)], j1 = -1;
            long long delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                long long cur = cost(i0, j) - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(static_cast<size_t>(n), -1);
    for (int j = 1; j <= m; ++j)
        if (p[static_cast<size_t>(j)] > 0) row_to_col[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
    return row_to_col;
}

}  // namespace

AssignmentResult hungarian(const CostMatrix& costs) {
    if (costs.rows <= 0 || costs.cols <= 0) throw std::runtime_error("empty cost matrix");
    if (static_cast<int>(costs.cost.size()) != costs.rows * costs.cols)
        throw std::runtime_error("cost matrix size mismatch");

    // Pre-reduce along the fully used dimension only: subtracting a
    // constant from a line that every maximum matching covers shifts all
    // totals equally, so the optimal set is unchanged and the result is
    // invariant to per-row constant shifts (rows <= cols). Reducing a
    // partially used dimension would skew the comparison instead.
    std::vector<long long> a = costs.cost;
    const int R = costs.rows, C = costs.cols;
    if (R <= C) {
        for (int r = 0; r < R; ++r) {
            long long mn = kInf;
            for (int c = 0; c < C; ++c) mn = std::min(mn, a[static_cast<size_t>(r) * C + c]);
            for (int c = 0; c < C; ++c) a[static_cast<size_t>(r) * C + c] -= mn;
        }
    } else {
        for (int c = 0; c < C; ++c) {
            long long mn = kInf;
            for (int r = 0; r < R; ++r) mn = std::min(mn, a[static_cast<size_t>(r) * C + c]);
            for (int r = 0; r < R; ++r) a[static_cast<size_t>(r) * C + c] -= mn;
        }
    }

    std::vector<int> row_to_col;
    if (R <= C) {
        row_to_col = solve_rect(R, C, a);
    } else {
        std::vector<long long> at(static_cast<size_t>(R) * C);
        for (int r = 0; r < R; ++r)
            for (int c = 0; c < C; ++c) at[static_cast<size_t>(c) * R + r] = a[static_cast<size_t>(r) * C + c];
        auto col_to_row = solve_rect(C, R, at);
        row_to_col.assign(static_cast<size_t>(R), -1);
        for (int c = 0; c < C; ++c)
            if (col_to_row[static_cast<size_t>(c)] >= 0)
                row_to_col[static_cast<size_t>(col_to_row[static_cast<size_t>(c)])] = c;
    }

    AssignmentResult res;
    res.match.assign(static_cast<size_t>(R), -1);
    for (int r = 0; r < R; ++r) {
        int c = row_to_col[static_cast<size_t>(r)];
        if (c < 0) continue;
        if (costs.at(r, c) >= kUnreachableCost) continue;  // strip padded pairs
        res.match[static_cast<size_t>(r)] = c;
        res.total_cost += costs.at(r, c);
    }
    return res;
}

}  // namespace ddmapd
