#include <doctest.h>

#include <random>

#include "homothet/order.hpp"
#include "audits.hpp"
#include "oracles.hpp"

using namespace homothet;
using namespace homothet::audit;

namespace {

Triangulation wheel6_sphere() {
    // ring 0..5 counterclockwise, hub 6; outer hexagon fanned from 0
    std::vector<Face> f;
    for (int k = 0; k < 6; ++k) f.push_back({k, (k + 1) % 6, 6});
    f.push_back({0, 2, 1});
    f.push_back({0, 3, 2});
    f.push_back({0, 4, 3});
    f.push_back({0, 5, 4});
    return Triangulation::from_faces(f, {0, 1, 2});
}

}  // namespace

TEST_CASE("tetrahedron order, godparent, heir and boundary cycle") {
    auto T = tetrahedron();
    auto R = RootedOrder::build(T);
    CHECK(R.parent(1) == 0);
    CHECK(R.parent(2) == 1);
    CHECK(R.parent(3) == 2);
    CHECK(R.lt(0, 1));
    CHECK(R.lt(1, 2));
    CHECK(R.lt(2, 3));
    // <c,d,a> is clockwise, so around c the vertex a lies clockwise of d and the
    // counterclockwise bound of d's arc is b.
    auto [g, h] = godparent_heir(R, 3);
    CHECK(g == 1);
    CHECK(h == 3);
    CHECK(boundary_cycle(R, 3) == std::vector<int>{0, 1, 2});
    CHECK_THROWS(boundary_cycle(R, 2));
    CHECK_THROWS(godparent_heir(R, 1));
    CHECK(audit_order(R) == 0);
}

TEST_CASE("octahedron and wheel orders satisfy the invariants") {
    auto R = RootedOrder::build(octahedron());
    CHECK(audit_order(R) == 0);
    CHECK(audit_godparent_heir(R) == 0);
    CHECK(audit_boundary_cycles(R) == 0);
    auto W = wheel6_sphere();
    auto RW = RootedOrder::build(W);
    CHECK(audit_order(RW) == 0);
    for (int v = 3; v < 7; ++v) CHECK(RW.lt(W.c(), v));
    CHECK(audit_boundary_cycles(RW) == 0);
}

TEST_CASE("leaf boundary cycle is the neighbor circle") {
    std::mt19937_64 rng(7);
    auto T = random_triangulation(25, rng);
    auto R = RootedOrder::build(T);
    for (int i = 0; i < T.vertex_count(); ++i) {
        if (!R.children(i).empty() || !R.lt(T.c(), i)) continue;
        auto H = boundary_cycle(R, i);
        std::set<int> got(H.begin(), H.end());
        std::set<int> nb(T.rotation(i).begin(), T.rotation(i).end());
        CHECK(got == nb);
    }
}

TEST_CASE("random triangulations: order invariants and boundary cycles") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 100; ++rep) {
        int n = std::uniform_int_distribution<int>(10, 60)(rng);
        auto T = random_triangulation(n, rng);
        auto R = RootedOrder::build(T);
        CHECK(audit_order(R) == 0);
        CHECK(audit_godparent_heir(R) == 0);
        CHECK(audit_boundary_cycles(R) == 0);
    }
}

TEST_CASE("counterclockwise spirals") {
    auto T = tetrahedron();
    CHECK(is_counterclockwise_spiral(T, {0, 1, 2, 3}));
    CHECK_FALSE(is_counterclockwise_spiral(T, {0, 2, 1, 3}));
    auto B = Triangulation::from_faces({{0, 1, 3}, {1, 2, 3}, {2, 0, 3}, {1, 0, 4}, {2, 1, 4}, {0, 2, 4}}, {0, 1, 4});
    CHECK_FALSE(is_counterclockwise_spiral(B, {3, 4, 0, 1, 2}));  // 3,4 not adjacent
    CHECK_THROWS(is_counterclockwise_spiral(T, {0, 1, 2}));

    // spirals found by search in small random triangulations; structural facts on each
    std::mt19937_64 rng(5);
    int found = 0;
    for (int rep = 0; rep < 40; ++rep) {
        auto S = random_triangulation(std::uniform_int_distribution<int>(5, 8)(rng), rng);
        std::vector<std::vector<int>> sp;
        oracle::find_spirals(S, sp, 3);
        for (const auto& seq : sp) {
            ++found;
            int s = static_cast<int>(seq.size());
            for (int j = 4; j <= s; ++j) {  // 1-based positions
                int vj = seq[j - 1];
                int kj = s + 1;
                for (int k = 1; k <= s; ++k)
                    if (S.adjacent(vj, seq[k - 1])) {
                        kj = k;
                        break;
                    }
                CHECK(kj < j - 2);
                CHECK(S.adjacent(seq[j - 2], seq[kj - 1]));
                for (int m = kj + 1; m <= j - 2; ++m)
                    for (int t = m + 2; t < j; ++t) CHECK_FALSE(S.adjacent(seq[m - 1], seq[t - 1]));
            }
        }
    }
    CHECK(found > 0);
}
