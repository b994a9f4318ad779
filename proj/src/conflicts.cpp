#include "ddmapd/conflicts.hpp"

#include <algorithm>

namespace ddmapd {

std::vector<PathConflict> collision_check(std::span<const Cell> a, std::span<const Cell> b,
                                          int id_a, int id_b) {
    std::vector<PathConflict> out;
    if (a.empty() || b.empty()) return out;
    int horizon = static_cast<int>(std::max(a.size(), b.size())) - 1;
    for (int t = 0; t <= horizon; ++t) {
        Cell pa = path_at(a, t), pb = path_at(b, t);
        if (pa == pb)
            out.push_back({ConflictType::vertex, id_a, id_b, t, pa, {}});
        if (t < horizon) {
            Cell na = path_at(a, t + 1), nb = path_at(b, t + 1);
            if (pa == nb && na == pb && pa != na)
                out.push_back({ConflictType::edge, id_a, id_b, t, pa, na});
        }
    }
    return out;
}

std::vector<PathConflict> collision_check_all(const std::vector<std::vector<Cell>>& paths) {
    std::vector<PathConflict> out;
    for (size_t i = 0; i < paths.size(); ++i) {
        for (size_t j = i + 1; j < paths.size(); ++j) {
            auto pair = collision_check(paths[i], paths[j], static_cast<int>(i), static_cast<int>(j));
            out.insert(out.end(), pair.begin(), pair.end());
        }
    }
    std::sort(out.begin(), out.end(), [](const PathConflict& x, const PathConflict& y) {
        if (x.t != y.t) return x.t < y.t;
        if (x.a != y.a) return x.a < y.a;
        if (x.b != y.b) return x.b < y.b;
        return static_cast<int>(x.type) < static_cast<int>(y.type);
    });
    return out;
}

}  // namespace ddmapd
