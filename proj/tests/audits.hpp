#pragma once
// Invariant audits shared by the unit tests and the acceptance run.  Each
// returns the number of violations.

#include <algorithm>
#include <set>

#include "homothet/order.hpp"
#include "oracles.hpp"

namespace homothet::audit {

// order invariants
inline int audit_order(const RootedOrder& R) {
    const auto& T = R.triangulation();
    int bad = 0;
    int a = T.a(), b = T.b(), c = T.c();
    if (R.children(a) != std::vector<int>{b}) ++bad;
    if (R.parent(c) != b) ++bad;
    for (auto [u, v] : T.edges())
        if (!R.comparable(u, v)) ++bad;
    for (int v = 0; v < T.vertex_count(); ++v) {
        auto anc = R.ancestors(v);
        for (std::size_t k = 0; k < anc.size(); ++k)
            for (std::size_t m = k; m < anc.size(); ++m)
                if (!R.le(anc[k], anc[m])) ++bad;
        if (v != a && v != b && v != c && !R.lt(c, v)) ++bad;
    }
    // every edge is a tree edge or a left edge
    for (auto [x, y] : T.edges()) {
        int v = R.le(x, y) ? x : y, u = v == x ? y : x;  // v < u
        if (R.parent(u) == v) continue;
        if (v == a) continue;
        // v is a proper ancestor of u-1; the tree path a..u-1 passes v from parent(v) to next
        auto p = R.path(v, R.parent(u));
        if (p.size() < 2) {
            ++bad;
            continue;
        }
        int next = p[1];
        auto left = oracle::ccw_range(T, v, next, R.parent(v));
        if (std::find(left.begin(), left.end(), u) == left.end()) ++bad;
    }
    return bad;
}

inline int audit_godparent_heir(const RootedOrder& R) {
    const auto& T = R.triangulation();
    int bad = 0;
    for (int i = 0; i < T.vertex_count(); ++i) {
        if (i == T.a() || i == T.b()) continue;
        auto [g, h] = godparent_heir(R, i);
        if (!R.lt(g, R.parent(i))) ++bad;
        if (!T.adjacent(g, R.parent(i))) ++bad;
        if (!T.adjacent(g, h) || !R.le(i, h)) ++bad;
        // exhaustive: all v >= i adjacent to g form a chain whose minimum is h
        for (int v : T.rotation(g))
            if (R.le(i, v) && !R.le(h, v)) ++bad;
    }
    return bad;
}

inline int audit_boundary_cycles(const RootedOrder& R) {
    const auto& T = R.triangulation();
    int bad = 0;
    for (int i = 0; i < T.vertex_count(); ++i) {
        if (!R.lt(T.c(), i)) continue;
        auto H = boundary_cycle(R, i);
        std::set<int> got(H.begin(), H.end());
        if (got.size() != H.size() || got != oracle::boundary_set(R, i)) ++bad;
        if (H.back() != R.parent(i)) ++bad;
        for (std::size_t k = 1; k < H.size(); ++k) {
            if (!R.lt(H[k - 1], H[k])) ++bad;
            if (!T.adjacent(H[k - 1], H[k])) ++bad;
        }
        if (!T.adjacent(H.front(), H.back())) ++bad;
        if (!T.is_clockwise_triangle(R.parent(i), i, H.front())) ++bad;
        auto back = oracle::backward_walk(R, i);
        std::set<int> bset(back.begin(), back.end());
        bset.insert(R.parent(i));
        if (bset != got) ++bad;
    }
    return bad;
}

}  // namespace homothet::audit
