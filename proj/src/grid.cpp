#include "ddmapd/grid.hpp"

#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ddmapd {

GridMap::GridMap(int width, int height, std::vector<uint8_t> blocked)
    : width_(width), height_(height), blocked_(std::move(blocked)) {
    if (width_ <= 0 || height_ <= 0)
        throw std::runtime_error("grid dimensions must be positive");
    if (blocked_.empty()) blocked_.assign(static_cast<size_t>(size()), 0);
    if (static_cast<int>(blocked_.size()) != size())
        throw std::runtime_error("blocked mask size mismatch");
    build_adjacency();
}

void GridMap::build_adjacency() {
    free_count_ = 0;
    adj_.assign(static_cast<size_t>(size()), {-1, -1, -1, -1});
    static constexpr int dr[4] = {-1, 0, 0, 1};
    static constexpr int dc[4] = {0, -1, 1, 0};
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) {
            int idx = r * width_ + c;
            if (blocked_[idx]) continue;
            ++free_count_;
            int n = 0;
            for (int d = 0; d < 4; ++d) {
                Cell nb{r + dr[d], c + dc[d]};
                if (free(nb)) adj_[idx][n++] = index(nb);
            }
        }
    }
}

GridMap GridMap::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int w = -1, h = -1;
    bool saw_map = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "type") continue;
        if (key == "height") { ls >> h; continue; }
        if (key == "width") { ls >> w; continue; }
        if (key == "map") { saw_map = true; break; }
        if (!key.empty()) throw std::runtime_error("map header: unexpected line '" + line + "'");
    }
    if (!saw_map || w <= 0 || h <= 0)
        throw std::runtime_error("map header incomplete");
    std::vector<uint8_t> blocked(static_cast<size_t>(w) * h, 0);
    for (int r = 0; r < h; ++r) {
        if (!std::getline(in, line)) throw std::runtime_error("map body truncated");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (static_cast<int>(line.size()) < w) throw std::runtime_error("map row too short");
        for (int c = 0; c < w; ++c) {
            char ch = line[static_cast<size_t>(c)];
            if (ch == '.' || ch == 'G' || ch == 'S') continue;
            if (ch == '@' || ch == 'O' || ch == 'T' || ch == 'W')
                blocked[static_cast<size_t>(r) * w + c] = 1;
            else
                throw std::runtime_error(std::string("map body: unexpected char '") + ch + "'");
        }
    }
    GridMap g(w, h, std::move(blocked));
    if (g.free_cell_count() == 0) throw std::runtime_error("map has no free cells");
    if (!g.free_cells_connected()) throw std::runtime_error("map free cells are disconnected");
    return g;
}

GridMap GridMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string GridMap::serialize() const {
    std::ostringstream out;
    out << "type octile\nheight " << height_ << "\nwidth " << width_ << "\nmap\n";
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) out << (blocked_[static_cast<size_t>(r) * width_ + c] ? '@' : '.');
        out << '\n';
    }
    return out.str();
}

void GridMap::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write map file: " + path);
    out << serialize();
}

bool GridMap::free_cells_connected() const {
    int seed = -1;
    for (int i = 0; i < size(); ++i)
        if (!blocked_[i]) { seed = i; break; }
    if (seed < 0) return false;
    auto dist = bfs_distances(seed);
    int reached = 0;
    for (int i = 0; i < size(); ++i)
        if (!blocked_[i] && dist[i] >= 0) ++reached;
    return reached == free_count_;
}

std::vector<int> GridMap::bfs_distances(int from) const {
    static const std::vector<uint8_t> kNoExtra;
    return bfs_distances(from, kNoExtra);
}

std::vector<int> GridMap::bfs_distances(int from, const std::vector<uint8_t>& extra_blocked) const {
    std::vector<int> dist(static_cast<size_t>(size()), -1);
    if (from < 0 || from >= size() || blocked_[from]) return dist;
    if (!extra_blocked.empty() && extra_blocked[from]) return dist;
    std::deque<int> q;
    dist[from] = 0;
    q.push_back(from);
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int nb : adj_[v]) {
            if (nb < 0 || dist[nb] >= 0) continue;
            if (!extra_blocked.empty() && extra_blocked[nb]) continue;
            dist[nb] = dist[v] + 1;
            q.push_back(nb);
        }
    }
    return dist;
}

std::vector<Cell> GridMap::shortest_path(Cell from, Cell to,
                                         const std::vector<uint8_t>& extra_blocked) const {
    auto dist = bfs_distances(index(to), extra_blocked);
    int cur = index(from);
    if (dist[cur] < 0) return {};
    std::vector<Cell> path;
    path.push_back(from);
    while (cur != index(to)) {
        int best = -1;
        for (int nb : adj_[cur]) {
            if (nb < 0 || dist[nb] < 0 || dist[nb] != dist[cur] - 1) continue;
            if (best < 0 || nb < best) best = nb;
        }
        cur = best;
        path.push_back(cell(cur));
    }
    return path;
}

}  // namespace ddmapd
