#pragma once

#include <utility>
#include <vector>

#include "homothet/triangulation.hpp"

namespace homothet {

// Right-oriented dfs tree rooted at the edge (a,b) and the order it induces.
// u <= v iff u lies on the tree path from v to a.  "v-1" is parent(v).
class RootedOrder {
public:
    static RootedOrder build(const Triangulation& T);

    const Triangulation& triangulation() const { return T_; }
    int parent(int v) const { return parent_[v]; }
    int depth(int v) const { return depth_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }
    // vertices in the order they were born (parents before children)
    const std::vector<int>& birth_order() const { return birth_; }
    bool le(int u, int v) const { return tin_[u] <= tin_[v] && tout_[v] <= tout_[u]; }
    bool lt(int u, int v) const { return u != v && le(u, v); }
    bool comparable(int u, int v) const { return le(u, v) || le(v, u); }
    // defined for v not in {a,b}; -1 otherwise
    int godparent(int v) const { return godparent_[v]; }
    int heir(int v) const { return heir_[v]; }
    // the arc of i-1's unborn neighbors that produced i, clockwise end first
    const std::vector<int>& birth_arc(int v) const { return arc_[v]; }
    // ancestors of v from a down to parent(v)
    std::vector<int> ancestors(int v) const;
    // tree path u = x_0 < x_1 < ... < x_k = v, requires u <= v
    std::vector<int> path(int u, int v) const;

private:
    Triangulation T_;
    std::vector<int> parent_, depth_, godparent_, heir_, tin_, tout_, birth_;
    std::vector<std::vector<int>> children_, arc_;
};

std::pair<int, int> godparent_heir(const RootedOrder& order, int i);

// Vertices bounding I = {j >= i}, from the forward walk started at (i-1, i).
std::vector<int> boundary_cycle(const RootedOrder& order, int i);

bool is_counterclockwise_spiral(const Triangulation& T, const std::vector<int>& seq);

}  // namespace homothet
