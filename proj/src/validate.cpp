#include "ddmapd/validate.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "ddmapd/conflicts.hpp"

namespace ddmapd {

const char* violation_name(ViolationType t) {
    switch (t) {
        case ViolationType::agent_vertex_collision: return "agent-vertex-collision";
        case ViolationType::agent_edge_collision: return "agent-edge-collision";
        case ViolationType::shelf_vertex_collision: return "shelf-vertex-collision";
        case ViolationType::shelf_edge_collision: return "shelf-edge-collision";
        case ViolationType::agent_teleport: return "agent-teleport";
        case ViolationType::shelf_teleport: return "shelf-teleport";
        case ViolationType::move_while_uncarried: return "move-while-uncarried";
        case ViolationType::carry_mismatch: return "carry-mismatch";
        case ViolationType::double_carry: return "double-carry";
        case ViolationType::blocked_cell: return "blocked-cell";
        case ViolationType::start_mismatch: return "start-mismatch";
        case ViolationType::undelivered: return "undelivered";
        case ViolationType::metric_mismatch: return "metric-mismatch";
    }
    return "unknown";
}

std::string Violation::describe() const {
    std::ostringstream os;
    os << violation_name(type) << " ids=(" << a;
    if (b >= 0) os << "," << b;
    os << ") t=" << t << " cell=(" << cell.row << "," << cell.col << ")";
    return os.str();
}

std::string ValidationReport::summary() const {
    if (!structural_ok) return "structural error: " + structural_error;
    if (violations.empty()) return "valid";
    std::ostringstream os;
    os << violations.size() << " violation(s):\n";
    for (const auto& v : violations) os << "  " << v.describe() << "\n";
    return os.str();
}

namespace {

bool adjacent_or_equal(Cell a, Cell b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col) <= 1;
}

}  // namespace

ValidationReport validate(const Instance& inst, const ExecutionLog& log) {
    ValidationReport rep;
    auto structural = [&](const std::string& msg) {
        rep.structural_ok = false;
        rep.structural_error = msg;
        return rep;
    };

    const int N = inst.num_agents(), M = inst.num_shelves();
    if (static_cast<int>(log.agents.size()) != N) return structural("agent count mismatch");
    if (static_cast<int>(log.shelves.size()) != M) return structural("shelf count mismatch");
    for (int i = 0; i < N; ++i) {
        const auto& a = log.agents[static_cast<size_t>(i)];
        if (a.path.empty()) return structural("empty agent path");
        if (a.carrying.size() != a.path.size())
            return structural("carrying array length differs from path length");
        for (int s : a.carrying)
            if (s < -1 || s >= M) return structural("carrying references an unknown shelf");
        for (Cell c : a.path)
            if (!inst.map.in_bounds(c)) return structural("agent path leaves the map");
    }
    for (const auto& s : log.shelves) {
        if (s.path.empty()) return structural("empty shelf path");
        for (Cell c : s.path)
            if (!inst.map.in_bounds(c)) return structural("shelf path leaves the map");
    }

    const int T = log.horizon();
    auto agent_at = [&](int i, int t) { return path_at(log.agents[static_cast<size_t>(i)].path, t); };
    auto shelf_at = [&](int j, int t) { return path_at(log.shelves[static_cast<size_t>(j)].path, t); };
    auto carrying_at = [&](int i, int t) {
        const auto& c = log.agents[static_cast<size_t>(i)].carrying;
        // Padding: past the stored range an agent holds nothing.
        if (t < 0 || t >= static_cast<int>(c.size())) return -1;
        return c[static_cast<size_t>(t)];
    };

    // Starts.
    for (int i = 0; i < N; ++i)
        if (agent_at(i, 0) != inst.agent_starts[static_cast<size_t>(i)])
            rep.violations.push_back({ViolationType::start_mismatch, i, -1, 0, agent_at(i, 0)});
    for (int j = 0; j < M; ++j)
        if (shelf_at(j, 0) != inst.shelves[static_cast<size_t>(j)].pickup)
            rep.violations.push_back({ViolationType::start_mismatch, j, -1, 0, shelf_at(j, 0)});

    // Motion legality per timestep.
    for (int t = 0; t <= T; ++t) {
        for (int i = 0; i < N; ++i) {
            Cell c = agent_at(i, t);
            if (inst.map.blocked(c))
                rep.violations.push_back({ViolationType::blocked_cell, i, -1, t, c});
            if (t < T && !adjacent_or_equal(c, agent_at(i, t + 1)))
                rep.violations.push_back({ViolationType::agent_teleport, i, -1, t, agent_at(i, t + 1)});
        }
        for (int j = 0; j < M; ++j) {
            Cell c = shelf_at(j, t);
            if (inst.map.blocked(c))
                rep.violations.push_back({ViolationType::blocked_cell, j, -1, t, c});
            if (t < T && !adjacent_or_equal(c, shelf_at(j, t + 1)))
                rep.violations.push_back({ViolationType::shelf_teleport, j, -1, t, shelf_at(j, t + 1)});
        }
    }

    // Carry relation: a held shelf sits under its carrier and follows it;
    // shelves never move on their own.
    for (int t = 0; t < T; ++t) {
        std::vector<int> carrier(static_cast<size_t>(M), -1);
        for (int i = 0; i < N; ++i) {
            int j = carrying_at(i, t);
            if (j < 0) continue;
            if (carrier[static_cast<size_t>(j)] >= 0)
                rep.violations.push_back({ViolationType::double_carry, carrier[static_cast<size_t>(j)], i, t, shelf_at(j, t)});
            carrier[static_cast<size_t>(j)] = i;
            if (agent_at(i, t) != shelf_at(j, t) || agent_at(i, t + 1) != shelf_at(j, t + 1))
                rep.violations.push_back({ViolationType::carry_mismatch, i, j, t, agent_at(i, t)});
        }
        for (int j = 0; j < M; ++j)
            if (shelf_at(j, t) != shelf_at(j, t + 1) && carrier[static_cast<size_t>(j)] < 0)
                rep.violations.push_back({ViolationType::move_while_uncarried, j, -1, t, shelf_at(j, t)});
    }

    // Deck collisions.
    for (int t = 0; t <= T; ++t) {
        for (int i = 0; i < N; ++i)
            for (int i2 = i + 1; i2 < N; ++i2) {
                if (agent_at(i, t) == agent_at(i2, t))
                    rep.violations.push_back({ViolationType::agent_vertex_collision, i, i2, t, agent_at(i, t)});
                if (t < T && agent_at(i, t) == agent_at(i2, t + 1) &&
                    agent_at(i, t + 1) == agent_at(i2, t) && agent_at(i, t) != agent_at(i, t + 1))
                    rep.violations.push_back({ViolationType::agent_edge_collision, i, i2, t, agent_at(i, t)});
            }
        for (int j = 0; j < M; ++j)
            for (int j2 = j + 1; j2 < M; ++j2) {
                if (shelf_at(j, t) == shelf_at(j2, t))
                    rep.violations.push_back({ViolationType::shelf_vertex_collision, j, j2, t, shelf_at(j, t)});
                if (t < T && shelf_at(j, t) == shelf_at(j2, t + 1) &&
                    shelf_at(j, t + 1) == shelf_at(j2, t) && shelf_at(j, t) != shelf_at(j, t + 1))
                    rep.violations.push_back({ViolationType::shelf_edge_collision, j, j2, t, shelf_at(j, t)});
            }
    }

    // Delivery.
    for (int j = 0; j < M; ++j)
        if (shelf_at(j, T) != inst.shelves[static_cast<size_t>(j)].delivery)
            rep.violations.push_back({ViolationType::undelivered, j, -1, T, shelf_at(j, T)});

    // Metric arithmetic on declared values, when present.
    if (log.declared_makespan >= 0 && log.declared_makespan != log.makespan())
        rep.violations.push_back({ViolationType::metric_mismatch, -1, -1, log.declared_makespan, {}});
    if (log.declared_flowtime >= 0 && log.declared_flowtime != log.flowtime())
        rep.violations.push_back({ViolationType::metric_mismatch, -1, -1, static_cast<int>(log.declared_flowtime), {}});

    return rep;
}

}  // namespace ddmapd
