#include "ddmapd/render.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ddmapd/conflicts.hpp"

namespace ddmapd::render {

namespace {

std::string frame_svg(const Instance& inst, const ExecutionLog& log, int t, int px) {
    const GridMap& map = inst.map;
    const int W = map.width() * px, H = map.height() * px;
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
       << "' viewBox='0 0 " << W << " " << H << "'>\n";
    os << "<rect width='" << W << "' height='" << H << "' fill='#fafafa'/>\n";
    for (int r = 0; r < map.height(); ++r)
        for (int c = 0; c < map.width(); ++c)
            if (map.blocked(Cell{r, c}))
                os << "<rect x='" << c * px << "' y='" << r * px << "' width='" << px
                   << "' height='" << px << "' fill='#444'/>\n";
    for (int i = 0; i <= map.width(); ++i)
        os << "<line x1='" << i * px << "' y1='0' x2='" << i * px << "' y2='" << H
           << "' stroke='#ddd' stroke-width='1'/>\n";
    for (int i = 0; i <= map.height(); ++i)
        os << "<line x1='0' y1='" << i * px << "' x2='" << W << "' y2='" << i * px
           << "' stroke='#ddd' stroke-width='1'/>\n";

    // Delivery markers.
    for (size_t j = 0; j < inst.shelves.size(); ++j) {
        Cell d = inst.shelves[j].delivery;
        if (inst.shelves[j].pickup == d) continue;
        os << "<rect x='" << d.col * px + px / 4 << "' y='" << d.row * px + px / 4 << "' width='"
           << px / 2 << "' height='" << px / 2
           << "' fill='none' stroke='#2a2' stroke-dasharray='2,2'/>\n";
    }

    // Carry relation at time t.
    std::vector<int> carrier(log.shelves.size(), -1);
    for (size_t i = 0; i < log.agents.size(); ++i) {
        const auto& carry = log.agents[i].carrying;
        if (t < static_cast<int>(carry.size()) && carry[static_cast<size_t>(t)] >= 0)
            carrier[static_cast<size_t>(carry[static_cast<size_t>(t)])] = static_cast<int>(i);
    }

    // Agents (low deck).
    for (size_t i = 0; i < log.agents.size(); ++i) {
        Cell c = path_at(log.agents[i].path, t);
        os << "<circle cx='" << c.col * px + px / 2 << "' cy='" << c.row * px + px / 2 << "' r='"
           << px * 2 / 5 << "' fill='#4a90d9'/>\n";
        os << "<text x='" << c.col * px + px / 2 << "' y='" << c.row * px + px / 2 + px / 8
           << "' font-size='" << px / 2 << "' text-anchor='middle' fill='#fff'>" << i
           << "</text>\n";
    }
    // Shelves (high deck, drawn above).
    for (size_t j = 0; j < log.shelves.size(); ++j) {
        Cell c = path_at(log.shelves[j].path, t);
        bool held = carrier[j] >= 0;
        os << "<rect x='" << c.col * px + px / 6 << "' y='" << c.row * px + px / 6 << "' width='"
           << px * 2 / 3 << "' height='" << px * 2 / 3 << "' fill='#c96' fill-opacity='0.6'"
           << " stroke='" << (held ? "#d22" : "#953") << "' stroke-width='" << (held ? 2 : 1)
           << "'/>\n";
    }
    os << "<text x='4' y='" << H - 4 << "' font-size='" << px / 2 << "' fill='#333'>t=" << t
       << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace

int write_frames(const Instance& inst, const ExecutionLog& log, const std::string& out_dir,
                 int cell_px) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    int frames = log.horizon() + 1;
    for (int t = 0; t < frames; ++t) {
        std::ostringstream name;
        name << "frame_" << std::setw(4) << std::setfill('0') << t << ".svg";
        std::ofstream out(fs::path(out_dir) / name.str());
        out << frame_svg(inst, log, t, cell_px);
    }
    return frames;
}

}  // namespace ddmapd::render
