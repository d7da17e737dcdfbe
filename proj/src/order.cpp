#include "homothet/order.hpp"

#include <algorithm>
#include <stdexcept>

namespace homothet {

// The dynasty: a dies after bearing b.  When v dies, its unborn neighbors split
// into maximal runs of the counterclockwise rotation ("arcs").  v bears the most
// clockwise vertex of every arc, i.e. the first vertex of the run in
// counterclockwise order:
//
//       godparent of w1
//             |     wk
//             |   /  ...
//             v ---- w2
//             |
//             w1   <- child
//             |
//          ancestor
//
// The neighbor just past the counterclockwise end wk is the godparent of w1.
RootedOrder RootedOrder::build(const Triangulation& T) {
    RootedOrder R;
    R.T_ = T;
    int n = T.vertex_count();
    int a = T.a(), b = T.b();
    R.parent_.assign(n, -1);
    R.depth_.assign(n, 0);
    R.godparent_.assign(n, -1);
    R.heir_.assign(n, -1);
    R.children_.assign(n, {});
    R.arc_.assign(n, {});
    std::vector<char> born(n, 0);
    born[a] = born[b] = 1;
    R.parent_[b] = a;
    R.depth_[b] = 1;
    R.children_[a].push_back(b);
    R.birth_ = {a, b};
    std::vector<int> stack{b};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        const auto& rot = T.rotation(v);
        int d = static_cast<int>(rot.size());
        // start the scan just after a born neighbor (v always has its parent)
        int s0 = -1;
        for (int k = 0; k < d; ++k)
            if (born[rot[k]]) s0 = k;
        if (s0 < 0) throw std::logic_error("dynasty: vertex without born neighbor");
        std::vector<int> new_children;
        for (int k = 1; k <= d; ++k) {
            int w = rot[(s0 + k) % d];
            if (born[w]) continue;
            int prev = rot[(s0 + k - 1) % d];
            if (!born[prev]) continue;  // not the clockwise end of a run
            std::vector<int> arc;
            int m = k;
            while (m <= d && !born[rot[(s0 + m) % d]]) arc.push_back(rot[(s0 + m) % d]), ++m;
            int child = arc.front();
            R.parent_[child] = v;
            R.depth_[child] = R.depth_[v] + 1;
            R.godparent_[child] = rot[(s0 + m) % d];
            R.arc_[child] = arc;
            new_children.push_back(child);
        }
        for (int c : new_children) {
            born[c] = 1;
            R.children_[v].push_back(c);
            R.birth_.push_back(c);
        }
        for (auto it = new_children.rbegin(); it != new_children.rend(); ++it) stack.push_back(*it);
    }
    if (static_cast<int>(R.birth_.size()) != n) throw std::logic_error("dynasty did not reach every vertex");
    // Euler tour for the comparability oracle
    R.tin_.assign(n, 0);
    R.tout_.assign(n, 0);
    int clock = 0;
    std::vector<std::pair<int, std::size_t>> st{{a, 0}};
    R.tin_[a] = clock++;
    while (!st.empty()) {
        auto& [v, k] = st.back();
        if (k < R.children_[v].size()) {
            int c = R.children_[v][k++];
            R.tin_[c] = clock++;
            st.push_back({c, 0});
        } else {
            R.tout_[v] = clock++;
            st.pop_back();
        }
    }
    // heirs: the minimal vertex >= i adjacent to the godparent
    for (int i = 0; i < n; ++i) {
        int g = R.godparent_[i];
        if (g < 0) continue;
        int best = -1;
        for (int w : T.rotation(g))
            if (R.le(i, w) && (best < 0 || R.depth_[w] < R.depth_[best])) best = w;
        if (best < 0) throw std::logic_error("heir: godparent has no neighbor >= i");
        R.heir_[i] = best;
    }
    return R;
}

std::vector<int> RootedOrder::ancestors(int v) const {
    std::vector<int> out;
    for (int u = parent_[v]; u >= 0; u = parent_[u]) out.push_back(u);
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<int> RootedOrder::path(int u, int v) const {
    if (!le(u, v)) throw std::invalid_argument("path: u is not an ancestor of v");
    std::vector<int> out;
    for (int x = v; x != u; x = parent_[x]) out.push_back(x);
    out.push_back(u);
    std::reverse(out.begin(), out.end());
    return out;
}

std::pair<int, int> godparent_heir(const RootedOrder& order, int i) {
    const auto& T = order.triangulation();
    if (i == T.a() || i == T.b()) throw std::invalid_argument("godparent_heir: undefined at a and b");
    return {order.godparent(i), order.heir(i)};
}

std::vector<int> boundary_cycle(const RootedOrder& order, int i) {
    const auto& T = order.triangulation();
    if (!order.lt(T.c(), i)) throw std::invalid_argument("boundary_cycle: requires i > c");
    auto in_I = [&](int x) { return order.le(i, x); };
    std::vector<int> H;
    int u = order.parent(i), j = i;
    int guard = 4 * T.vertex_count() + 8;
    while (guard-- > 0) {
        // around u, move clockwise from j until leaving I
        int prev = j, w = T.cw_next(u, j);
        while (in_I(w)) prev = w, w = T.cw_next(u, w);
        u = w;
        j = prev;
        if (!H.empty() && order.lt(u, H.back())) return H;
        H.push_back(u);
    }
    throw std::logic_error("boundary_cycle: walk did not close");
}

bool is_counterclockwise_spiral(const Triangulation& T, const std::vector<int>& seq) {
    int s = static_cast<int>(seq.size());
    int n = T.vertex_count();
    if (s != n) throw std::invalid_argument("is_counterclockwise_spiral: not a permutation of V");
    std::vector<int> pos(n, -1);
    for (int k = 0; k < s; ++k) {
        if (seq[k] < 0 || seq[k] >= n || pos[seq[k]] >= 0)
            throw std::invalid_argument("is_counterclockwise_spiral: not a permutation of V");
        pos[seq[k]] = k;
    }
    for (int k = 1; k < s; ++k)
        if (!T.adjacent(seq[k - 1], seq[k])) return false;
    // Walking v_{j-1} -> v_j -> v_{j+1}, the left side at v_j is the open
    // counterclockwise range from v_{j+1} to v_{j-1}.
    for (int j = 1; j + 1 < s; ++j) {
        int v = seq[j], prev = seq[j - 1], next = seq[j + 1];
        for (int w = T.ccw_next(v, next); w != prev; w = T.ccw_next(v, w))
            if (pos[w] < j - 1) return false;  // earlier vertex on the left
        for (int w = T.ccw_next(v, prev); w != next; w = T.ccw_next(v, w))
            if (pos[w] > j + 1) return false;  // later vertex on the right
    }
    return true;
}

}  // namespace homothet
