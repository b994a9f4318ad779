#include "ddmapd/instance.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ddmapd {

namespace {

std::string cell_str(Cell c) {
    std::ostringstream os;
    os << "(" << c.row << "," << c.col << ")";
    return os.str();
}

Cell parse_cell(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw std::runtime_error("cell must be [row, col]");
    return Cell{j[0].get<int>(), j[1].get<int>()};
}

nlohmann::json cell_json(Cell c) { return nlohmann::json::array({c.row, c.col}); }

}  // namespace

std::vector<std::string> Instance::validate() const {
    std::vector<std::string> problems;
    if (num_shelves() < num_agents())
        problems.push_back("instance requires M >= N shelves");
    if (num_agents() == 0) problems.push_back("instance has no agents");
    if (!map.free_cells_connected()) problems.push_back("map free cells are disconnected");

    auto check_cell = [&](Cell c, const std::string& what) {
        if (!map.in_bounds(c)) {
            problems.push_back(what + " " + cell_str(c) + " out of bounds");
            return false;
        }
        if (map.blocked(c)) {
            problems.push_back(what + " " + cell_str(c) + " is blocked");
            return false;
        }
        return true;
    };

    std::set<Cell> starts, pickups, deliveries;
    for (Cell c : agent_starts) {
        check_cell(c, "agent start");
        if (!starts.insert(c).second)
            problems.push_back("duplicate agent start " + cell_str(c));
    }
    for (const Shelf& s : shelves) {
        check_cell(s.pickup, "shelf pickup");
        check_cell(s.delivery, "shelf delivery");
        if (!pickups.insert(s.pickup).second)
            problems.push_back("duplicate shelf pickup " + cell_str(s.pickup));
        if (!deliveries.insert(s.delivery).second)
            problems.push_back("duplicate shelf delivery " + cell_str(s.delivery));
    }
    return problems;
}

Instance Instance::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    nlohmann::json j;
    in >> j;

    Instance inst;
    std::string map_path = j.at("map").get<std::string>();
    std::filesystem::path mp(map_path);
    if (mp.is_relative()) mp = std::filesystem::path(path).parent_path() / mp;
    inst.map = GridMap::load(mp.string());
    for (const auto& a : j.at("agents")) inst.agent_starts.push_back(parse_cell(a));
    for (const auto& s : j.at("shelves"))
        inst.shelves.push_back(Shelf{parse_cell(s.at("pickup")), parse_cell(s.at("delivery"))});

    auto problems = inst.validate();
    if (!problems.empty())
        throw std::runtime_error("invalid instance " + path + ": " + problems.front());
    return inst;
}

void Instance::save(const std::string& instance_path, const std::string& map_path) const {
    map.save(map_path);
    nlohmann::json j;
    // Store the map reference relative to the instance file when possible.
    std::filesystem::path mp(map_path), ip(instance_path);
    std::error_code ec;
    auto rel = std::filesystem::relative(mp, ip.parent_path(), ec);
    j["map"] = (ec || rel.empty()) ? map_path : rel.string();
    j["agents"] = nlohmann::json::array();
    for (Cell c : agent_starts) j["agents"].push_back(cell_json(c));
    j["shelves"] = nlohmann::json::array();
    for (const Shelf& s : shelves) {
        nlohmann::json sj;
        sj["pickup"] = cell_json(s.pickup);
        sj["delivery"] = cell_json(s.delivery);
        j["shelves"].push_back(sj);
    }
    std::ofstream out(instance_path);
    if (!out) throw std::runtime_error("cannot write instance file: " + instance_path);
    out << j.dump(2) << "\n";
}

}  // namespace ddmapd
