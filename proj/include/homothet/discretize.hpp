#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "homothet/geometry.hpp"
#include "homothet/triangulation.hpp"

namespace homothet {

class DiscretizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Multiply connected polygonal domain G: inside `outer` (counterclockwise),
// outside every hole.  The marks z1, z2, z3 lie on the outer curve in
// counterclockwise order.
struct Domain {
    std::vector<Vec2> outer;
    std::vector<std::vector<Vec2>> holes;
    std::array<Vec2, 3> marks;

    // outer with the marks inserted as vertices, and their indices
    std::vector<Vec2> marked_outer(std::array<int, 3>* splits) const;
    bool contains(Vec2 p) const;
    double boundary_distance(Vec2 p) const;
    double diameter() const;
    // throws DiscretizeError on orientation, simplicity or nesting problems
    void check() const;
};

double polygon_area(const std::vector<Vec2>& ccw);
bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly);
double segment_distance(Vec2 p, Vec2 a, Vec2 b);
double polyline_distance(Vec2 p, const std::vector<Vec2>& pts, bool closed);

// Equal circles of diameter eps on the triangular lattice through the seed.
struct HexDiscretization {
    enum class Kind { Inner, Boundary };
    struct Circle {
        int i = 0, j = 0;
        Vec2 center;
        Kind kind = Kind::Inner;
        std::array<int, 6> nbr{-1, -1, -1, -1, -1, -1};  // counterclockwise from +x; -1 outside Q
    };
    double eps = 0;
    Vec2 origin;
    std::vector<Circle> circles;  // inner and boundary circles
    int seed = 0;                 // index of C_0
    int inner_count = 0;
    int boundary_count = 0;
    int outside_count = 0;        // lattice circles examined and rejected

    Vec2 lattice_point(int i, int j) const;
    bool inner(int k) const { return circles[k].kind == Kind::Inner; }
};

// Inner circles: flower hull inside G, connected to the seed circle.
HexDiscretization hexify(const Domain& domain, double eps, Vec2 seed);

// Nerve complex: lattice triangles of Q with at least one inner corner.
std::vector<Face> nerve_faces(const HexDiscretization& d);
// triangles with three inner corners
std::vector<Face> inner_faces(const HexDiscretization& d);

struct BoundaryCycles {
    std::vector<int> R;               // outer cycle, counterclockwise
    std::vector<std::vector<int>> S;  // S[j] around hole j, clockwise
    std::vector<double> hausdorff;    // distance of S[j] to hole j (and R to outer, last)
};
BoundaryCycles boundary_cycles(const HexDiscretization& d, const Domain& domain);

// R split at the circles nearest the marks into R_1 (z1..z2), R_2 (z2..z3),
// R_3 (z3..z1); consecutive paths share their end circle.
std::array<std::vector<int>, 3> split_outer_cycle(const HexDiscretization& d, const Domain& domain,
                                                  const std::vector<int>& R);

struct AugmentedTriangulation {
    Triangulation T;
    int nerve_count = 0;             // vertices 0..nerve_count-1 are circles
    std::vector<int> hole_vertex;    // v_j
    std::array<int, 3> outer_vertex; // a_1, a_2, a_3 = root
    BoundaryCycles cycles;
    std::array<std::vector<int>, 3> split;
};

AugmentedTriangulation augment(const HexDiscretization& d, const BoundaryCycles& cycles,
                               const std::array<std::vector<int>, 3>& split);
// boundary_cycles + split + augment
AugmentedTriangulation augmented_triangulation(const HexDiscretization& d, const Domain& domain);

}  // namespace homothet
