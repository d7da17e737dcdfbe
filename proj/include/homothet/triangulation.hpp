#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace homothet {

struct TriangulationError : std::runtime_error {
    enum class Kind { Loop, MultiEdge, NonManifold, Disconnected, Euler, RootNotFace, Orientation, Input };
    Kind kind;
    TriangulationError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

using Face = std::array<int, 3>;

// Oriented sphere triangulation.
//
// Faces are stored counterclockwise as seen in the plane after the root face
// is sent to infinity.  The root triple (a,b,c) is counterclockwise as a planar
// triangle, so as a 2-cell of the sphere it is the clockwise face; it appears in
// the face list as (a,c,b).  "x,y,z is a clockwise triangle" means (x,z,y) is a
// stored face.
class Triangulation {
public:
    static Triangulation from_faces(std::vector<Face> faces, std::array<int, 3> root);

    int vertex_count() const { return n_; }
    int edge_count() const { return edges_; }
    int face_count() const { return static_cast<int>(faces_.size()); }
    const std::vector<Face>& faces() const { return faces_; }
    std::array<int, 3> root() const { return root_; }
    int a() const { return root_[0]; }
    int b() const { return root_[1]; }
    int c() const { return root_[2]; }

    // neighbors of v in counterclockwise order
    const std::vector<int>& rotation(int v) const { return rot_[v]; }
    int degree(int v) const { return static_cast<int>(rot_[v].size()); }
    bool adjacent(int u, int v) const;
    // position of w in rotation(v), or -1
    int rotation_index(int v, int w) const;
    int ccw_next(int v, int w) const;  // neighbor following w counterclockwise around v
    int cw_next(int v, int w) const;

    bool has_face(int u, int v, int w) const;  // oriented, any cyclic shift
    bool is_clockwise_triangle(int u, int v, int w) const { return has_face(u, w, v); }

    std::vector<std::pair<int, int>> edges() const;

private:
    int n_ = 0;
    int edges_ = 0;
    std::vector<Face> faces_;
    std::array<int, 3> root_{};
    std::vector<std::vector<int>> rot_;
};

bool is_face_triangle_lookup(const Triangulation& T, int u, int v, int w);
bool is_face_triangle_separation(const Triangulation& T, int u, int v, int w);
// Both methods; throws std::logic_error if they disagree.
bool is_face_triangle(const Triangulation& T, int u, int v, int w);

// Cone new_vertex over a cell bounded by `cycle`.  The cycle is given in the
// counterclockwise order of the cell; for an existing face that is its stored order.
Triangulation split_cell(const Triangulation& T, const std::vector<int>& cycle, int new_vertex);

// Cone construction used while building complexes: the cycle (ccw around the
// empty cell) must have every consecutive directed edge (v_{k+1}, v_k) present in
// `faces` and no edge (v_k, v_{k+1}).  Returns the new faces.
std::vector<Face> cone_faces(const std::vector<int>& cycle, int apex);

// Oriented polygonal complex of the sphere under construction: cells are vertex
// cycles stored counterclockwise, every directed edge used once.  Cells are split
// until all are triangles.
class CellComplex {
public:
    CellComplex() = default;
    explicit CellComplex(std::vector<std::vector<int>> cells);
    const std::vector<std::vector<int>>& cells() const { return cells_; }
    int vertex_count() const { return n_; }
    int add_vertex() { return n_++; }
    // index of the cell equal to `cycle` up to cyclic shift, or -1
    int find_cell(const std::vector<int>& cycle) const;
    // cone new_vertex over the cell
    void split_cell(const std::vector<int>& cycle, int new_vertex);
    // replace the cell by a list of triangles whose boundary is the cell
    void replace_cell(const std::vector<int>& cycle, const std::vector<Face>& faces);
    Triangulation to_triangulation(std::array<int, 3> root) const;

private:
    int n_ = 0;
    std::vector<std::vector<int>> cells_;
};

Triangulation tetrahedron();
Triangulation octahedron();
// Repeated random face splits of the tetrahedron until n vertices.
Triangulation random_triangulation(int n, std::mt19937_64& rng);

}  // namespace homothet
