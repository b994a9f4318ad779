#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "ddmapd/bench.hpp"
#include "ddmapd/pp.hpp"
#include "ddmapd/validate.hpp"
#include "doctest.h"

using namespace ddmapd;
using namespace ddmapd::bench;

TEST_CASE("random generator hits the floor(den * n^2) shelf count") {
    GeneratorSpec spec;
    spec.size = 8;
    spec.den_percent = 40;
    spec.num_agents = 4;
    spec.seed = 1;
    Instance inst = generate_random(spec);
    CHECK(inst.num_shelves() == 25);  // floor(0.4 * 64)
    CHECK(inst.validate().empty());

    spec.size = 16;
    spec.den_percent = 20;
    Instance inst2 = generate_random(spec);
    CHECK(inst2.num_shelves() == 51);  // floor(0.2 * 256)
}

TEST_CASE("relocating shelves are floor(0.1 n^2) with deliveries off pickups") {
    GeneratorSpec spec;
    spec.size = 10;
    spec.den_percent = 30;
    spec.num_agents = 4;
    spec.seed = 5;
    Instance inst = generate_random(spec);
    std::set<Cell> pickups;
    for (const auto& s : inst.shelves) pickups.insert(s.pickup);
    int relocating = 0;
    for (const auto& s : inst.shelves)
        if (s.needs_relocation()) {
            ++relocating;
            CHECK(!pickups.count(s.delivery));
        }
    CHECK(relocating == 10);  // floor(0.1 * 100)
}

TEST_CASE("pickup cells form 2x2 blocks except possibly the last") {
    GeneratorSpec spec;
    spec.size = 12;
    spec.den_percent = 40;
    spec.num_agents = 4;
    spec.seed = 9;
    Instance inst = generate_random(spec);
    // Every pickup has at least one orthogonal pickup neighbor within its
    // own 2x2 block, except possibly one trimmed block of the tail.
    std::set<Cell> pickups;
    for (const auto& s : inst.shelves) pickups.insert(s.pickup);
    int lonely = 0;
    for (Cell c : pickups) {
        bool neighbor = pickups.count({c.row + 1, c.col}) || pickups.count({c.row - 1, c.col}) ||
                        pickups.count({c.row, c.col + 1}) || pickups.count({c.row, c.col - 1});
        if (!neighbor) ++lonely;
    }
    CHECK(lonely <= 1);
}

TEST_CASE("zero density is rejected") {
    GeneratorSpec spec;
    spec.size = 8;
    spec.den_percent = 0;
    CHECK_THROWS(generate_random(spec));
}

TEST_CASE("generation is seed-deterministic") {
    GeneratorSpec spec;
    spec.size = 10;
    spec.den_percent = 30;
    spec.num_agents = 6;
    spec.seed = 123;
    Instance a = generate_random(spec);
    Instance b = generate_random(spec);
    CHECK(a.agent_starts == b.agent_starts);
    REQUIRE(a.num_shelves() == b.num_shelves());
    for (int j = 0; j < a.num_shelves(); ++j) {
        CHECK(a.shelves[static_cast<size_t>(j)].pickup == b.shelves[static_cast<size_t>(j)].pickup);
        CHECK(a.shelves[static_cast<size_t>(j)].delivery == b.shelves[static_cast<size_t>(j)].delivery);
    }
    spec.seed = 124;
    Instance c = generate_random(spec);
    CHECK(a.agent_starts != c.agent_starts);
}

TEST_CASE("well-formed generator passes the structural checks across seeds") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        GeneratorSpec spec;
        spec.size = 16;
        spec.den_percent = 20;
        spec.num_agents = 8;
        spec.seed = seed;
        spec.well_formed = true;
        Instance inst = generate_well_formed(spec);
        CHECK(inst.validate().empty());
        auto rep = pp::check_well_formed(inst);
        CHECK(rep.starts_distinct);
        CHECK(rep.connectivity);
        // starts on the perimeter, shelves strictly inside
        for (Cell c : inst.agent_starts) {
            bool perim = c.row == 0 || c.col == 0 || c.row == 15 || c.col == 15;
            bool corner = (c.row == 0 || c.row == 15) && (c.col == 0 || c.col == 15);
            CHECK(perim);
            CHECK(!corner);
        }
        for (const auto& s : inst.shelves) {
            CHECK(s.pickup.row > 0);
            CHECK(s.pickup.row < 15);
            CHECK(s.delivery.col > 0);
            CHECK(s.delivery.col < 15);
        }
    }
}

TEST_CASE("too many agents for the perimeter is a generation error") {
    GeneratorSpec spec;
    spec.size = 5;
    spec.den_percent = 30;
    spec.num_agents = 13;  // only 12 non-corner perimeter cells on 5x5
    spec.well_formed = true;
    CHECK_THROWS(generate_well_formed(spec));
}

TEST_CASE("warehouse layout: 320 shelves, perimeter agents, reflected targets") {
    GeneratorSpec spec;
    spec.seed = 2;
    Instance inst = generate_warehouse(spec);
    CHECK(inst.num_shelves() == 320);
    CHECK(inst.num_agents() == 32);
    CHECK(inst.map.width() == 27);
    CHECK(inst.map.height() == 27);
    for (Cell c : inst.agent_starts) {
        bool perim = c.row == 0 || c.col == 0 || c.row == 26 || c.col == 26;
        CHECK(perim);
    }
    std::multiset<std::pair<int, int>> pickups, targets;
    for (const auto& s : inst.shelves) {
        pickups.insert({s.pickup.row, s.pickup.col});
        targets.insert({s.delivery.col, s.delivery.row});  // reflect back
    }
    CHECK(pickups == targets);
    auto rep = pp::check_well_formed(inst);
    CHECK(rep.starts_distinct);
    CHECK(rep.connectivity);
}

TEST_CASE("suite runner: empty algorithm list yields a header-only CSV") {
    auto csv = aggregate_csv({});
    CHECK(csv.find("size,den,M,N,algo") == 0);
    CHECK(csv.find('\n') == csv.size() - 1);
}

TEST_CASE("suite runner produces one mean row per cell") {
    GeneratorSpec spec;
    spec.size = 8;
    spec.den_percent = 40;
    spec.num_agents = 4;
    spec.seed = 100;
    SuiteOptions opts;
    opts.repetitions = 2;
    opts.config.omega = 1.2;
    auto records = run_suite({spec}, {"ivf", "nivf"}, opts);
    REQUIRE(records.size() == 4);
    for (const auto& r : records) CHECK(r.success);
    auto csv = aggregate_csv(records);
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 3);  // header + 2 algo rows
    auto raw = raw_csv(records);
    lines = 0;
    for (char c : raw)
        if (c == '\n') ++lines;
    CHECK(lines == 5);
}

TEST_CASE("unknown algorithm tags are rejected") {
    CHECK(algo_known("ivf-r"));
    CHECK(!algo_known("zen"));
    GeneratorSpec spec;
    Instance inst = generate_random(spec);
    CHECK_THROWS(solve_with_algo(inst, "zen", {}));
}
