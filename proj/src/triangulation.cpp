#include "homothet/triangulation.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace homothet {

namespace {

using Kind = TriangulationError::Kind;

std::uint64_t key(int u, int v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

std::string fmt_face(const Face& f) {
    return "(" + std::to_string(f[0]) + "," + std::to_string(f[1]) + "," + std::to_string(f[2]) + ")";
}

}  // namespace

Triangulation Triangulation::from_faces(std::vector<Face> faces, std::array<int, 3> root) {
    if (faces.empty()) throw TriangulationError(Kind::Input, "empty face list");
    int n = 0;
    for (const auto& f : faces)
        for (int v : f) {
            if (v < 0) throw TriangulationError(Kind::Input, "negative vertex index in face " + fmt_face(f));
            n = std::max(n, v + 1);
        }
    for (const auto& f : faces)
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
            throw TriangulationError(Kind::Loop, "loop: face " + fmt_face(f) + " repeats a vertex");

    std::unordered_map<std::uint64_t, int> directed;   // directed edge -> third vertex
    std::unordered_map<std::uint64_t, int> undirected; // incidence count
    directed.reserve(faces.size() * 4);
    undirected.reserve(faces.size() * 4);
    for (const auto& f : faces) {
        for (int k = 0; k < 3; ++k) {
            int u = f[k], v = f[(k + 1) % 3];
            int lo = std::min(u, v), hi = std::max(u, v);
            if (++undirected[key(lo, hi)] > 2)
                throw TriangulationError(Kind::MultiEdge, "multi-edge or non-manifold edge {" + std::to_string(lo) + "," +
                                                              std::to_string(hi) + "} used by more than two faces");
        }
    }
    for (const auto& f : faces) {
        for (int k = 0; k < 3; ++k) {
            int u = f[k], v = f[(k + 1) % 3];
            if (!directed.emplace(key(u, v), f[(k + 2) % 3]).second)
                throw TriangulationError(Kind::Orientation, "inconsistent orientation: directed edge " + std::to_string(u) +
                                                                "->" + std::to_string(v) + " occurs in two faces");
        }
    }
    for (const auto& [k, cnt] : undirected)
        if (cnt != 2)
            throw TriangulationError(Kind::NonManifold, "non-manifold edge {" + std::to_string(k >> 32) + "," +
                                                            std::to_string(k & 0xffffffffu) + "} has one incident face");

    // Rotation: for a stored face (u,v,w), w follows v counterclockwise around u.
    std::vector<std::vector<std::pair<int, int>>> nxt(n);
    for (const auto& f : faces)
        for (int k = 0; k < 3; ++k) nxt[f[k]].push_back({f[(k + 1) % 3], f[(k + 2) % 3]});
    Triangulation T;
    T.n_ = n;
    T.rot_.assign(n, {});
    for (int u = 0; u < n; ++u) {
        auto& m = nxt[u];
        if (m.empty()) throw TriangulationError(Kind::Disconnected, "vertex " + std::to_string(u) + " lies on no face");
        std::sort(m.begin(), m.end());
        auto follow = [&](int v) {
            auto it = std::lower_bound(m.begin(), m.end(), std::make_pair(v, -1));
            return (it != m.end() && it->first == v) ? it->second : -1;
        };
        int start = m.front().first, v = start;
        do {
            T.rot_[u].push_back(v);
            v = follow(v);
            if (v < 0 || T.rot_[u].size() > m.size())
                throw TriangulationError(Kind::NonManifold, "link of vertex " + std::to_string(u) + " is not a cycle");
        } while (v != start);
        if (T.rot_[u].size() != m.size())
            throw TriangulationError(Kind::NonManifold, "link of vertex " + std::to_string(u) + " is not a single cycle");
    }
    // connectivity
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int w : T.rot_[u])
            if (!seen[w]) seen[w] = 1, ++reached, stack.push_back(w);
    }
    if (reached != n) throw TriangulationError(Kind::Disconnected, "edge graph is disconnected");
    int E = static_cast<int>(undirected.size()), F = static_cast<int>(faces.size());
    if (n - E + F != 2)
        throw TriangulationError(Kind::Euler, "Euler relation fails: V-E+F = " + std::to_string(n - E + F));
    T.edges_ = E;
    T.faces_ = std::move(faces);
    T.root_ = root;
    for (int v : root)
        if (v < 0 || v >= n) throw TriangulationError(Kind::RootNotFace, "root vertex out of range");
    if (!T.has_face(root[0], root[2], root[1])) {
        if (T.has_face(root[0], root[1], root[2]))
            throw TriangulationError(Kind::Orientation,
                                     "root triple is stored counterclockwise; the root must be the clockwise face (a,c,b)");
        throw TriangulationError(Kind::RootNotFace, "root triple is not a face");
    }
    return T;
}

int Triangulation::rotation_index(int v, int w) const {
    const auto& r = rot_[v];
    for (std::size_t k = 0; k < r.size(); ++k)
        if (r[k] == w) return static_cast<int>(k);
    return -1;
}

bool Triangulation::adjacent(int u, int v) const { return u != v && rotation_index(u, v) >= 0; }

int Triangulation::ccw_next(int v, int w) const {
    int k = rotation_index(v, w);
    if (k < 0) throw std::invalid_argument("ccw_next: not adjacent");
    return rot_[v][(k + 1) % rot_[v].size()];
}

int Triangulation::cw_next(int v, int w) const {
    int k = rotation_index(v, w);
    if (k < 0) throw std::invalid_argument("cw_next: not adjacent");
    int d = static_cast<int>(rot_[v].size());
    return rot_[v][(k + d - 1) % d];
}

bool Triangulation::has_face(int u, int v, int w) const {
    // the rotation is read off the faces, so w following v around u means (u,v,w) is a face
    int k = rotation_index(u, v);
    return k >= 0 && rot_[u][(k + 1) % rot_[u].size()] == w;
}

std::vector<std::pair<int, int>> Triangulation::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges_);
    for (int u = 0; u < n_; ++u)
        for (int w : rot_[u])
            if (u < w) out.push_back({u, w});
    return out;
}

bool is_face_triangle_lookup(const Triangulation& T, int u, int v, int w) {
    if (!T.adjacent(u, v) || !T.adjacent(v, w) || !T.adjacent(u, w))
        throw std::invalid_argument("is_face_triangle: vertices are not pairwise adjacent");
    return T.has_face(u, v, w) || T.has_face(u, w, v);
}

bool is_face_triangle_separation(const Triangulation& T, int u, int v, int w) {
    if (!T.adjacent(u, v) || !T.adjacent(v, w) || !T.adjacent(u, w))
        throw std::invalid_argument("is_face_triangle: vertices are not pairwise adjacent");
    int n = T.vertex_count();
    std::vector<char> seen(n, 0);
    seen[u] = seen[v] = seen[w] = 1;
    int start = -1;
    for (int x = 0; x < n && start < 0; ++x)
        if (!seen[x]) start = x;
    if (start < 0) return true;
    std::vector<int> stack{start};
    seen[start] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : T.rotation(x))
            if (!seen[y]) seen[y] = 1, ++reached, stack.push_back(y);
    }
    return reached == n - 3;
}

bool is_face_triangle(const Triangulation& T, int u, int v, int w) {
    bool a = is_face_triangle_lookup(T, u, v, w);
    bool b = is_face_triangle_separation(T, u, v, w);
    if (a != b) throw std::logic_error("is_face_triangle: lookup and separation test disagree");
    return a;
}

std::vector<Face> cone_faces(const std::vector<int>& cycle, int apex) {
    std::vector<Face> out;
    int m = static_cast<int>(cycle.size());
    for (int k = 0; k < m; ++k) out.push_back({apex, cycle[k], cycle[(k + 1) % m]});
    return out;
}

Triangulation split_cell(const Triangulation& T, const std::vector<int>& cycle, int new_vertex) {
    if (cycle.size() != 3)
        throw std::invalid_argument("split_cell: the cells of a triangulation are triangles");
    auto faces = T.faces();
    auto it = std::find_if(faces.begin(), faces.end(), [&](const Face& f) {
        for (int s = 0; s < 3; ++s)
            if (f[s] == cycle[0] && f[(s + 1) % 3] == cycle[1] && f[(s + 2) % 3] == cycle[2]) return true;
        return false;
    });
    if (it == faces.end()) throw std::invalid_argument("split_cell: cycle does not bound a cell");
    auto r = T.root();
    for (int s = 0; s < 3; ++s)
        if (cycle[s] == r[0] && cycle[(s + 1) % 3] == r[2] && cycle[(s + 2) % 3] == r[1])
            throw std::invalid_argument("split_cell: refusing to split the root face");
    if (new_vertex != T.vertex_count()) throw std::invalid_argument("split_cell: new vertex must be the next index");
    faces.erase(it);
    for (auto& f : cone_faces(cycle, new_vertex)) faces.push_back(f);
    return Triangulation::from_faces(std::move(faces), r);
}

CellComplex::CellComplex(std::vector<std::vector<int>> cells) : cells_(std::move(cells)) {
    for (const auto& c : cells_) {
        if (c.size() < 3) throw std::invalid_argument("CellComplex: cell with fewer than 3 vertices");
        for (int v : c) n_ = std::max(n_, v + 1);
    }
}

int CellComplex::find_cell(const std::vector<int>& cycle) const {
    std::size_t m = cycle.size();
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const auto& c = cells_[i];
        if (c.size() != m) continue;
        for (std::size_t s = 0; s < m; ++s) {
            bool ok = true;
            for (std::size_t k = 0; k < m && ok; ++k) ok = c[(s + k) % m] == cycle[k];
            if (ok) return static_cast<int>(i);
        }
    }
    return -1;
}

void CellComplex::split_cell(const std::vector<int>& cycle, int new_vertex) {
    if (cycle.size() < 3) throw std::invalid_argument("split_cell: not a cycle");
    std::vector<int> sorted = cycle;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("split_cell: boundary repeats a vertex");
    replace_cell(cycle, cone_faces(cycle, new_vertex));
    n_ = std::max(n_, new_vertex + 1);
}

void CellComplex::replace_cell(const std::vector<int>& cycle, const std::vector<Face>& faces) {
    int i = find_cell(cycle);
    if (i < 0) throw std::invalid_argument("split_cell: cycle does not bound a cell");
    cells_.erase(cells_.begin() + i);
    for (const auto& f : faces) {
        cells_.push_back({f[0], f[1], f[2]});
        for (int v : f) n_ = std::max(n_, v + 1);
    }
}

Triangulation CellComplex::to_triangulation(std::array<int, 3> root) const {
    std::vector<Face> faces;
    faces.reserve(cells_.size());
    for (const auto& c : cells_) {
        if (c.size() != 3) throw TriangulationError(TriangulationError::Kind::Input, "complex still has a non-triangular cell");
        faces.push_back({c[0], c[1], c[2]});
    }
    return Triangulation::from_faces(std::move(faces), root);
}

Triangulation tetrahedron() {
    // a=0 top, b=1 lower left, c=2 lower right, d=3 center
    return Triangulation::from_faces({{0, 1, 3}, {1, 2, 3}, {2, 0, 3}, {0, 2, 1}}, {0, 1, 2});
}

Triangulation octahedron() {
    // outer triangle 0,1,2; inner triangle 3,4,5 with 3 opposite 2, 4 opposite 0, 5 opposite 1
    return Triangulation::from_faces({{0, 2, 1},
                                      {0, 1, 3},
                                      {1, 4, 3},
                                      {1, 2, 4},
                                      {2, 5, 4},
                                      {2, 0, 5},
                                      {0, 3, 5},
                                      {3, 4, 5}},
                                     {0, 1, 2});
}

Triangulation random_triangulation(int n, std::mt19937_64& rng) {
    if (n < 4) throw std::invalid_argument("random_triangulation: n >= 4");
    auto T = tetrahedron();
    auto r = T.root();
    std::vector<Face> faces = T.faces();
    auto is_root = [&](const Face& f) {
        for (int s = 0; s < 3; ++s)
            if (f[s] == r[0] && f[(s + 1) % 3] == r[2] && f[(s + 2) % 3] == r[1]) return true;
        return false;
    };
    for (int v = 4; v < n; ++v) {
        std::size_t k;
        do k = std::uniform_int_distribution<std::size_t>(0, faces.size() - 1)(rng);
        while (is_root(faces[k]));
        Face f = faces[k];
        faces.erase(faces.begin() + static_cast<long>(k));
        for (auto& g : cone_faces({f[0], f[1], f[2]}, v)) faces.push_back(g);
    }
    // Random flips away from the root face diversify the degree sequence.
    T = Triangulation::from_faces(faces, r);
    int flips = n;
    for (int attempt = 0; attempt < 20 * n && flips > 0; ++attempt) {
        std::size_t k = std::uniform_int_distribution<std::size_t>(0, faces.size() - 1)(rng);
        if (is_root(faces[k])) continue;
        int s = std::uniform_int_distribution<int>(0, 2)(rng);
        int u = faces[k][s], v = faces[k][(s + 1) % 3], w = faces[k][(s + 2) % 3];
        auto inroot = [&](int x) { return x == r[0] || x == r[1] || x == r[2]; };
        if (inroot(u) && inroot(v)) continue;
        int x = T.ccw_next(v, u);  // face (v,u,x)
        if (T.degree(u) <= 3 || T.degree(v) <= 3 || T.adjacent(w, x) || w == x) continue;
        std::size_t k2 = faces.size();
        for (std::size_t q = 0; q < faces.size(); ++q) {
            const auto& g = faces[q];
            for (int t = 0; t < 3; ++t)
                if (g[t] == v && g[(t + 1) % 3] == u && g[(t + 2) % 3] == x) k2 = q;
        }
        if (k2 == faces.size() || is_root(faces[k2])) continue;
        faces[k] = {w, u, x};
        faces[k2] = {x, v, w};
        T = Triangulation::from_faces(faces, r);
        --flips;
    }
    return T;
}

}  // namespace homothet
