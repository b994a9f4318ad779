#include "ddmapd/execution.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace ddmapd {

int ExecutionLog::completion_time(int agent) const {
    const auto& p = agents[static_cast<size_t>(agent)].path;
    for (int t = static_cast<int>(p.size()) - 1; t >= 1; --t)
        if (p[static_cast<size_t>(t)] != p[static_cast<size_t>(t) - 1]) return t;
    return 0;
}

int ExecutionLog::makespan() const {
    int m = 0;
    for (int i = 0; i < static_cast<int>(agents.size()); ++i)
        m = std::max(m, completion_time(i));
    return m;
}

long long ExecutionLog::flowtime() const {
    long long f = 0;
    for (int i = 0; i < static_cast<int>(agents.size()); ++i) f += completion_time(i);
    return f;
}

int ExecutionLog::horizon() const {
    size_t h = 1;
    for (const auto& a : agents) h = std::max(h, a.path.size());
    for (const auto& s : shelves) h = std::max(h, s.path.size());
    return static_cast<int>(h) - 1;
}

namespace {

nlohmann::json cell_json(Cell c) { return nlohmann::json::array({c.row, c.col}); }

Cell parse_cell(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw std::runtime_error("cell must be [row, col]");
    return Cell{j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

std::string ExecutionLog::to_json_string() const {
    nlohmann::json j;
    j["makespan"] = makespan();
    j["flowtime"] = flowtime();
    j["agents"] = nlohmann::json::array();
    for (const auto& a : agents) {
        nlohmann::json aj;
        aj["path"] = nlohmann::json::array();
        for (Cell c : a.path) aj["path"].push_back(cell_json(c));
        aj["carrying"] = a.carrying;
        j["agents"].push_back(aj);
    }
    j["shelves"] = nlohmann::json::array();
    for (const auto& s : shelves) {
        nlohmann::json sj;
        sj["path"] = nlohmann::json::array();
        for (Cell c : s.path) sj["path"].push_back(cell_json(c));
        j["shelves"].push_back(sj);
    }
    return j.dump(2);
}

ExecutionLog ExecutionLog::from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ExecutionLog log;
    if (j.contains("makespan")) log.declared_makespan = j["makespan"].get<int>();
    if (j.contains("flowtime")) log.declared_flowtime = j["flowtime"].get<long long>();
    for (const auto& aj : j.at("agents")) {
        AgentTrace a;
        for (const auto& c : aj.at("path")) a.path.push_back(parse_cell(c));
        if (aj.contains("carrying")) a.carrying = aj.at("carrying").get<std::vector<int>>();
        if (a.carrying.empty()) a.carrying.assign(a.path.size(), -1);
        log.agents.push_back(std::move(a));
    }
    for (const auto& sj : j.at("shelves")) {
        ShelfTrace s;
        for (const auto& c : sj.at("path")) s.path.push_back(parse_cell(c));
        log.shelves.push_back(std::move(s));
    }
    return log;
}

ExecutionLog ExecutionLog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open log file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

void ExecutionLog::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write log file: " + path);
    out << to_json_string() << "\n";
}

}  // namespace ddmapd
