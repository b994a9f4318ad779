#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "ddmapd/hungarian.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ddmapd;

namespace {

CostMatrix make(int rows, int cols, std::initializer_list<long long> values) {
    CostMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.cost.assign(values);
    return m;
}

}  // namespace

TEST_CASE("cheap diagonal is matched") {
    auto m = make(3, 3, {0, 9, 9, 9, 0, 9, 9, 9, 0});
    auto res = hungarian(m);
    CHECK(res.total_cost == 0);
    CHECK(res.match == std::vector<int>{0, 1, 2});
}

TEST_CASE("1x1 matrix") {
    auto m = make(1, 1, {5});
    auto res = hungarian(m);
    CHECK(res.total_cost == 5);
    CHECK(res.match == std::vector<int>{0});
}

TEST_CASE("random matrices match the exhaustive permutation minimum") {
    std::mt19937 rng(42);
    for (int round = 0; round < 300; ++round) {
        int n = 2 + static_cast<int>(rng() % 6);  // up to 7x7
        CostMatrix m;
        m.rows = n;
        m.cols = n;
        m.cost.resize(static_cast<size_t>(n) * n);
        for (auto& v : m.cost) v = static_cast<long long>(rng() % 50);
        auto res = hungarian(m);
        CHECK(res.total_cost == oracles::assignment_min(m));
        // sanity: result is a matching
        std::vector<char> used(static_cast<size_t>(n), 0);
        for (int c : res.match) {
            REQUIRE(c >= 0);
            CHECK(!used[static_cast<size_t>(c)]);
            used[static_cast<size_t>(c)] = 1;
        }
    }
}

TEST_CASE("rectangular matrices assign min(rows, cols) pairs") {
    std::mt19937 rng(43);
    for (int round = 0; round < 100; ++round) {
        int rows = 1 + static_cast<int>(rng() % 5);
        int cols = 1 + static_cast<int>(rng() % 5);
        CostMatrix m;
        m.rows = rows;
        m.cols = cols;
        m.cost.resize(static_cast<size_t>(rows) * cols);
        for (auto& v : m.cost) v = static_cast<long long>(rng() % 30);
        auto res = hungarian(m);
        int matched = 0;
        for (int c : res.match)
            if (c >= 0) ++matched;
        CHECK(matched == std::min(rows, cols));
        CHECK(res.total_cost == oracles::assignment_min(m));
    }
}

TEST_CASE("adding a constant to a row keeps the matching") {
    std::mt19937 rng(44);
    for (int round = 0; round < 200; ++round) {
        int n = 2 + static_cast<int>(rng() % 5);
        CostMatrix m;
        m.rows = n;
        m.cols = n;
        m.cost.resize(static_cast<size_t>(n) * n);
        for (auto& v : m.cost) v = static_cast<long long>(rng() % 20);
        auto base = hungarian(m);
        int row = static_cast<int>(rng() % static_cast<uint32_t>(n));
        long long shift = 1 + static_cast<long long>(rng() % 17);
        CostMatrix shifted = m;
        for (int c = 0; c < n; ++c) shifted.at(row, c) += shift;
        auto res = hungarian(shifted);
        CHECK(res.match == base.match);
    }
}

TEST_CASE("unreachable sentinel pairs are stripped") {
    auto m = make(2, 1, {kUnreachableCost, 3});
    auto res = hungarian(m);
    CHECK(res.match[0] == -1);
    CHECK(res.match[1] == 0);
    CHECK(res.total_cost == 3);
}

TEST_CASE("determinism: repeated solves agree") {
    std::mt19937 rng(45);
    CostMatrix m;
    m.rows = 6;
    m.cols = 6;
    m.cost.resize(36);
    for (auto& v : m.cost) v = static_cast<long long>(rng() % 4);  // many ties
    auto a = hungarian(m);
    auto b = hungarian(m);
    CHECK(a.match == b.match);
    CHECK(a.total_cost == b.total_cost);
}
