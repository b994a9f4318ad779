#include "ddmapd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "ddmapd/baselines.hpp"
#include "ddmapd/pp.hpp"

namespace ddmapd::bench {

namespace {

// mt19937 output is standardized; avoid std distributions so that the same
// seed yields the same instance on every platform.
struct Rng {
    std::mt19937 gen;
    explicit Rng(uint64_t seed) : gen(static_cast<uint32_t>(seed ^ (seed >> 32))) {}
    int below(int n) { return static_cast<int>(gen() % static_cast<uint32_t>(n)); }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
            std::swap(v[static_cast<size_t>(i)], v[static_cast<size_t>(below(i + 1))]);
    }
};

Instance generate_grid_instance(const GeneratorSpec& spec, bool well_formed) {
    const int n = spec.size;
    if (n < 3) throw std::runtime_error("grid too small");
    Rng rng(spec.seed);
    GridMap map(n, n);

    const int target = static_cast<int>(static_cast<long long>(spec.den_percent) * n * n / 100);
    if (target <= 0) throw std::runtime_error("density yields zero shelves (M >= N violated)");

    const int lo = well_formed ? 1 : 0;
    const int hi_block = well_formed ? n - 3 : n - 2;  // top-left corner bound for 2x2
    if (hi_block < lo) throw std::runtime_error("grid too small for shelf blocks");

    std::set<Cell> pickup_set;
    std::vector<Cell> pickups;
    int rejects = 0;
    while (static_cast<int>(pickups.size()) < target) {
        if (rejects > 10000) throw std::runtime_error("shelf density infeasible");
        int r = lo + rng.below(hi_block - lo + 1);
        int c = lo + rng.below(hi_block - lo + 1);
        Cell block[4] = {{r, c}, {r, c + 1}, {r + 1, c}, {r + 1, c + 1}};
        bool clash = false;
        for (Cell b : block) clash = clash || pickup_set.count(b) > 0;
        if (clash) {
            ++rejects;
            continue;
        }
        for (Cell b : block) {
            if (static_cast<int>(pickups.size()) >= target) break;
            pickup_set.insert(b);
            pickups.push_back(b);
        }
    }

    Instance inst;
    inst.map = map;
    for (Cell p : pickups) inst.shelves.push_back(Shelf{p, p});

    // Relocating subset and their deliveries.
    const int M = static_cast<int>(pickups.size());
    int relocate = std::min(M, n * n / 10);
    std::vector<int> ids(static_cast<size_t>(M));
    for (int j = 0; j < M; ++j) ids[static_cast<size_t>(j)] = j;
    rng.shuffle(ids);
    ids.resize(static_cast<size_t>(relocate));

    std::vector<Cell> delivery_pool;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            Cell cell{r, c};
            if (pickup_set.count(cell)) continue;
            if (well_formed && (r == 0 || c == 0 || r == n - 1 || c == n - 1)) continue;
            delivery_pool.push_back(cell);
        }
    if (static_cast<int>(delivery_pool.size()) < relocate)
        throw std::runtime_error("not enough free cells for deliveries");
    std::set<Cell> delivery_set;
    for (int j : ids) {
        int pick = rng.below(static_cast<int>(delivery_pool.size()));
        Cell d = delivery_pool[static_cast<size_t>(pick)];
        delivery_pool.erase(delivery_pool.begin() + pick);
        inst.shelves[static_cast<size_t>(j)].delivery = d;
        delivery_set.insert(d);
    }

    // Agent starts.
    std::vector<Cell> start_pool;
    if (well_formed) {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                bool perim = r == 0 || c == 0 || r == n - 1 || c == n - 1;
                bool corner = (r == 0 || r == n - 1) && (c == 0 || c == n - 1);
                if (perim && !corner) start_pool.push_back(Cell{r, c});
            }
    } else {
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                Cell cell{r, c};
                if (!pickup_set.count(cell) && !delivery_set.count(cell))
                    start_pool.push_back(cell);
            }
    }
    rng.shuffle(start_pool);
    std::set<Cell> taken;
    // Keeping both neighbors of one corner out of the start set preserves
    // connectivity when any N-1 starts are removed.
    auto corner_pair_blocked = [&](Cell c) {
        if (!well_formed) return false;
        const Cell corners[4] = {{0, 0}, {0, n - 1}, {n - 1, 0}, {n - 1, n - 1}};
        for (Cell k : corners) {
            Cell a{k.row, k.col == 0 ? 1 : n - 2};
            Cell b{k.row == 0 ? 1 : n - 2, k.col};
            if (c == a && taken.count(b)) return true;
            if (c == b && taken.count(a)) return true;
        }
        return false;
    };
    for (Cell c : start_pool) {
        if (static_cast<int>(taken.size()) >= spec.num_agents) break;
        if (corner_pair_blocked(c)) continue;
        taken.insert(c);
        inst.agent_starts.push_back(c);
    }
    if (static_cast<int>(inst.agent_starts.size()) < spec.num_agents)
        throw std::runtime_error("not enough free cells for agent starts");
    if (inst.num_shelves() < inst.num_agents())
        throw std::runtime_error("M >= N violated");

    auto problems = inst.validate();
    if (!problems.empty()) throw std::runtime_error("generator: " + problems.front());
    return inst;
}

}  // namespace

Instance generate_random(const GeneratorSpec& spec) { return generate_grid_instance(spec, false); }

Instance generate_well_formed(const GeneratorSpec& spec) {
    return generate_grid_instance(spec, true);
}

Instance generate_warehouse(const GeneratorSpec& spec) {
    const int n = 27;
    Rng rng(spec.seed);
    Instance inst;
    inst.map = GridMap(n, n);

    // 8 block-columns (2 wide, pitch 3) x 4 block-rows (5 tall, pitch 6)
    // inside a 2-cell margin.
    std::vector<Cell> pickups;
    for (int br = 0; br < 4; ++br)
        for (int bc = 0; bc < 8; ++bc)
            for (int dr = 0; dr < 5; ++dr)
                for (int dc = 0; dc < 2; ++dc)
                    pickups.push_back(Cell{2 + 6 * br + dr, 2 + 3 * bc + dc});

    std::vector<Cell> targets;
    for (Cell p : pickups) targets.push_back(Cell{p.col, p.row});  // diagonal reflection
    rng.shuffle(targets);
    for (size_t j = 0; j < pickups.size(); ++j)
        inst.shelves.push_back(Shelf{pickups[j], targets[j]});

    int agents = spec.num_agents > 0 ? spec.num_agents : 32;
    std::vector<Cell> perim;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            bool on = r == 0 || c == 0 || r == n - 1 || c == n - 1;
            bool corner = (r == 0 || r == n - 1) && (c == 0 || c == n - 1);
            if (on && !corner) perim.push_back(Cell{r, c});
        }
    rng.shuffle(perim);
    std::set<Cell> taken;
    auto corner_pair_blocked = [&](Cell c) {
        const Cell corners[4] = {{0, 0}, {0, n - 1}, {n - 1, 0}, {n - 1, n - 1}};
        for (Cell k : corners) {
            Cell a{k.row, k.col == 0 ? 1 : n - 2};
            Cell b{k.row == 0 ? 1 : n - 2, k.col};
            if (c == a && taken.count(b)) return true;
            if (c == b && taken.count(a)) return true;
        }
        return false;
    };
    for (Cell c : perim) {
        if (static_cast<int>(taken.size()) >= agents) break;
        if (corner_pair_blocked(c)) continue;
        taken.insert(c);
        inst.agent_starts.push_back(c);
    }

    auto problems = inst.validate();
    if (!problems.empty()) throw std::runtime_error("warehouse generator: " + problems.front());
    return inst;
}

Instance generate(const GeneratorSpec& spec) {
    if (spec.warehouse) return generate_warehouse(spec);
    if (spec.well_formed) return generate_well_formed(spec);
    return generate_random(spec);
}

bool algo_known(const std::string& algo) {
    return algo == "nivf" || algo == "ivf" || algo == "ivf-r" || algo == "pp" ||
           algo == "base" || algo == "pas";
}

decomp::RunResult solve_with_algo(const Instance& inst, const std::string& algo,
                                  decomp::DecompConfig cfg) {
    if (algo == "nivf") {
        cfg.ivf_horizon = 0;
        cfg.one_robust_trajectories = false;
        return decomp::Solver(inst, cfg).run();
    }
    if (algo == "ivf") {
        cfg.one_robust_trajectories = false;
        return decomp::Solver(inst, cfg).run();
    }
    if (algo == "ivf-r") {
        cfg.one_robust_trajectories = true;
        return decomp::Solver(inst, cfg).run();
    }
    if (algo == "pp") return pp::run_pp(inst, cfg);
    if (algo == "base") return baselines::run_base(inst, cfg);
    if (algo == "pas") return baselines::run_pas(inst, cfg);
    throw std::runtime_error("unknown algorithm tag: " + algo);
}

namespace {

std::string cell_dir(const GeneratorSpec& s) {
    std::ostringstream os;
    os << s.size << "_" << s.den_percent;
    return os.str();
}

RunRecord run_one(const GeneratorSpec& spec, const std::string& algo, const SuiteOptions& opts) {
    RunRecord rec;
    rec.spec = spec;
    rec.algo = algo;
    rec.omega = opts.config.omega;
    try {
        Instance inst = generate(spec);
        rec.shelf_count = inst.num_shelves();
        if (!opts.artifact_dir.empty()) {
            namespace fs = std::filesystem;
            fs::path dir = fs::path(opts.artifact_dir) / cell_dir(spec);
            fs::create_directories(dir);
            std::string base = (dir / std::to_string(spec.seed)).string();
            inst.save(base + ".json", base + ".map");
        }
        auto res = solve_with_algo(inst, algo, opts.config);
        rec.success = res.success;
        rec.failure_reason = decomp::failure_tag(res.reason);
        rec.makespan = res.stats.makespan;
        rec.flowtime = res.stats.flowtime;
        rec.trajectory_moves = res.stats.trajectory_moves;
        rec.total_time_s = res.stats.total_time_s;
        rec.agent_time_s = res.stats.agent_time_s;
        if (res.success && !opts.artifact_dir.empty()) {
            namespace fs = std::filesystem;
            fs::path dir = fs::path(opts.artifact_dir) / cell_dir(spec);
            res.log.save((dir / (std::to_string(spec.seed) + "_" + algo + ".log.json")).string());
        }
    } catch (const std::exception& e) {
        rec.success = false;
        rec.failure_reason = "gen";
    }
    return rec;
}

}  // namespace

std::vector<RunRecord> run_suite(const std::vector<GeneratorSpec>& specs,
                                 const std::vector<std::string>& algos,
                                 const SuiteOptions& opts) {
    struct Job {
        GeneratorSpec spec;
        std::string algo;
    };
    std::vector<Job> jobs;
    for (const auto& spec : specs)
        for (int rep = 0; rep < opts.repetitions; ++rep)
            for (const auto& algo : algos) {
                GeneratorSpec s = spec;
                s.seed = spec.seed + static_cast<uint64_t>(rep);
                jobs.push_back({s, algo});
            }

    std::vector<RunRecord> records(jobs.size());
    int workers = std::max(1, opts.jobs);
    if (workers == 1) {
        for (size_t i = 0; i < jobs.size(); ++i)
            records[i] = run_one(jobs[i].spec, jobs[i].algo, opts);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                records[i] = run_one(jobs[i].spec, jobs[i].algo, opts);
            }
        };
        std::vector<std::future<void>> futs;
        for (int w = 0; w < workers; ++w) futs.push_back(std::async(std::launch::async, worker));
        for (auto& f : futs) f.get();
    }
    return records;
}

static const char* kHeader =
    "size,den,M,N,algo,makespan,flowtime,total_time_s,agent_time_ms,omega,success,failure_reason";

std::string raw_csv(const std::vector<RunRecord>& records) {
    std::ostringstream os;
    os << kHeader << ",seed\n";
    for (const auto& r : records) {
        os << r.spec.size << "," << r.spec.den_percent << "," << r.shelf_count << ","
           << r.spec.num_agents << "," << r.algo << "," << r.makespan << "," << r.flowtime << ","
           << r.total_time_s << "," << r.agent_time_s * 1000.0 << "," << r.omega << ","
           << (r.success ? 1 : 0) << "," << r.failure_reason << "," << r.spec.seed << "\n";
    }
    return os.str();
}

std::string aggregate_csv(const std::vector<RunRecord>& records) {
    struct Agg {
        long long solved = 0, total = 0, shelf_cells = 0;
        double makespan = 0, flowtime = 0, total_time = 0, agent_time = 0, omega = 0;
        int fail_a = 0, fail_b = 0, fail_c = 0, fail_gen = 0;
    };
    std::map<std::tuple<int, int, int, std::string>, Agg> cells;
    for (const auto& r : records) {
        auto& a = cells[{r.spec.size, r.spec.den_percent, r.spec.num_agents, r.algo}];
        ++a.total;
        if (r.success) {
            ++a.solved;
            a.shelf_cells += r.shelf_count;
            a.makespan += r.makespan;
            a.flowtime += static_cast<double>(r.flowtime);
            a.total_time += r.total_time_s;
            a.agent_time += r.agent_time_s;
            a.omega = r.omega;
        }
        if (r.failure_reason == "a") ++a.fail_a;
        if (r.failure_reason == "b") ++a.fail_b;
        if (r.failure_reason == "c") ++a.fail_c;
        if (r.failure_reason == "gen") ++a.fail_gen;
    }
    std::ostringstream os;
    os << kHeader << "\n";
    for (const auto& [key, a] : cells) {
        auto [size, den, agents, algo] = key;
        double s = a.solved > 0 ? static_cast<double>(a.solved) : 1.0;
        os << size << "," << den << "," << (a.solved ? a.shelf_cells / a.solved : 0) << ","
           << agents << "," << algo << "," << a.makespan / s << "," << a.flowtime / s << ","
           << a.total_time / s << "," << a.agent_time * 1000.0 / s << "," << a.omega << ","
           << static_cast<double>(a.solved) / static_cast<double>(a.total) << ",";
        std::ostringstream fr;
        if (a.fail_a) fr << "a:" << a.fail_a << ";";
        if (a.fail_b) fr << "b:" << a.fail_b << ";";
        if (a.fail_c) fr << "c:" << a.fail_c << ";";
        if (a.fail_gen) fr << "gen:" << a.fail_gen << ";";
        os << fr.str() << "\n";
    }
    return os.str();
}

}  // namespace ddmapd::bench
