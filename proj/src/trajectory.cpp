#include "ddmapd/trajectory.hpp"

#include <cstdlib>
#include <set>
#include <sstream>

#include "ddmapd/conflicts.hpp"

namespace ddmapd {

int Trajectory::move_count() const {
    int n = 0;
    for (size_t k = 1; k < entries.size(); ++k)
        if (entries[k] != entries[k - 1]) ++n;
    return n;
}

long long TrajectorySet::total_moves() const {
    long long n = 0;
    for (const auto& t : trajectories) n += t.move_count();
    return n;
}

bool trajectories_one_robust(const std::vector<Trajectory>& ts) {
    int horizon = 0;
    for (const auto& t : ts) horizon = std::max(horizon, t.last_step());
    for (int t = 0; t < horizon; ++t) {
        for (size_t j = 0; j < ts.size(); ++j) {
            Cell next = ts[j].at(t + 1);
            if (next == ts[j].at(t)) continue;
            for (size_t j2 = 0; j2 < ts.size(); ++j2) {
                if (j2 == j) continue;
                if (ts[j2].at(t) == next) return false;
            }
        }
    }
    return true;
}

bool trajectories_safe(const std::vector<Trajectory>& ts, const std::vector<Cell>& agent_starts) {
    std::set<Cell> starts(agent_starts.begin(), agent_starts.end());
    for (const auto& t : ts)
        for (Cell c : t.entries)
            if (starts.count(c)) return false;
    return true;
}

std::vector<std::string> TrajectorySet::verify(const Instance& inst) const {
    std::vector<std::string> problems;
    if (num_shelves() != inst.num_shelves()) {
        problems.push_back("trajectory count does not match shelf count");
        return problems;
    }
    for (int j = 0; j < num_shelves(); ++j) {
        const Trajectory& t = trajectories[static_cast<size_t>(j)];
        std::ostringstream tag;
        tag << "shelf " << j << ": ";
        if (t.entries.empty()) {
            problems.push_back(tag.str() + "empty trajectory");
            continue;
        }
        if (t.entries.front() != inst.shelves[static_cast<size_t>(j)].pickup)
            problems.push_back(tag.str() + "does not start at pickup");
        if (t.entries.back() != inst.shelves[static_cast<size_t>(j)].delivery)
            problems.push_back(tag.str() + "does not end at delivery");
        for (size_t k = 0; k + 1 < t.entries.size(); ++k) {
            Cell a = t.entries[k], b = t.entries[k + 1];
            int manhattan = std::abs(a.row - b.row) + std::abs(a.col - b.col);
            if (manhattan > 1) {
                problems.push_back(tag.str() + "non-adjacent step");
                break;
            }
        }
        for (Cell c : t.entries)
            if (!inst.map.free(c)) {
                problems.push_back(tag.str() + "uses a blocked or out-of-bounds cell");
                break;
            }
    }
    std::vector<std::vector<Cell>> paths;
    paths.reserve(trajectories.size());
    for (const auto& t : trajectories) paths.push_back(t.entries);
    if (!collision_check_all(paths).empty())
        problems.push_back("trajectories collide");
    if (is_1robust && !trajectories_one_robust(trajectories))
        problems.push_back("1-robust flag set but trajectories are not 1-robust");
    if (is_safe && !trajectories_safe(trajectories, inst.agent_starts))
        problems.push_back("safe flag set but trajectories use an agent start");
    return problems;
}

}  // namespace ddmapd
