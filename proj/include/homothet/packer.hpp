#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "homothet/geometry.hpp"
#include "homothet/order.hpp"
#include "homothet/triangulation.hpp"

namespace homothet {

class PackerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// p -> homothety class at p.
using ShapeField = std::function<ShapePtr(Vec2)>;

struct Prescription {
    ShapePtr shape;
    ShapeField field;  // takes precedence over `shape` when set
    std::string name;

    static Prescription of(ShapePtr s) {
        Prescription p;
        p.name = s->name();
        p.shape = std::move(s);
        return p;
    }
    static Prescription of(ShapeField f, std::string name) {
        Prescription p;
        p.field = std::move(f);
        p.name = std::move(name);
        return p;
    }
    bool defined() const { return shape || field; }
    ShapePtr at(Vec2 p) const { return field ? field(p) : shape; }
};

// The three boundary pieces P_a, P_b, P_c of the region W, with the contact
// points z1 = P_a∩P_c, z2 = P_a∩P_b, z3 = P_b∩P_c.
//
//   Polyline:        a closed polyline counterclockwise around W, split at
//                    three vertices; each arc is a Curve running against W's
//                    orientation so that W lies to its right.
//   TangentCircles:  three mutually tangent disks; W is the curvilinear
//                    triangle between them.
//   Bodies:          P_a is the outside of a circle, P_b and P_c are bodies.
struct JordanBoundary {
    enum class Mode { Polyline, TangentCircles, Bodies } mode = Mode::Polyline;
    std::array<Host, 3> P;
    Vec2 z1, z2, z3;
    std::vector<Vec2> polyline;
    std::array<int, 3> splits{};

    static JordanBoundary from_polyline(std::vector<Vec2> closed_ccw, std::array<int, 3> splits);
    static JordanBoundary from_tangent_circles(std::array<Vec2, 3> centers, std::array<double, 3> radii);
    static JordanBoundary from_bodies(ExteriorCircle outer, Body pb, Body pc);

    bool arc_mode() const { return mode != Mode::Bodies; }
    double diameter() const;
    // interior angle of W at z1, z2, z3 (0 for cusps)
    std::array<double, 3> corner_angles() const;
};

// Parent/godparent/heir data the chain needs, from a dfs tree or a spiral.
struct ChainOrder {
    std::vector<int> parent, godparent, heir, sequence, depth;
    std::vector<std::vector<int>> children;

    static ChainOrder from_tree(const RootedOrder& R);
    // spiral v_1..v_s: parent v_{j-1}; godparent v_{j-2}; heir the first
    // h >= j adjacent to v_{j-2}
    static ChainOrder from_spiral(const Triangulation& T, const std::vector<int>& seq);
    bool le(int u, int v) const;
    std::vector<int> path(int u, int v) const;
    std::vector<int> subtree(int v) const;  // v and its descendants in sequence order
};

struct Tolerances {
    // all relative to the scene diameter
    double geom = 1e-9;
    double contact = 1e-6;
    double x = 1e-10;
    int sweeps = 500;
    int restarts = 8;
    int newton_iterations = 60;
};

struct MonsterConfig {
    Triangulation T;
    ChainOrder order;
    JordanBoundary boundary;
    std::vector<Prescription> prescription;  // indexed by vertex; a,b,c unused
    Tolerances tol;
    double scene = 1;  // scene diameter
    // inaccessible parameter runs [t0,t1] of the child of c (arc modes)
    std::vector<std::pair<double, double>> inaccessible;

    static MonsterConfig make(const Triangulation& T, const ChainOrder& order, JordanBoundary boundary,
                              std::vector<Prescription> prescription, Tolerances tol = {});
    static MonsterConfig make(const Triangulation& T, JordanBoundary boundary,
                              std::vector<Prescription> prescription, Tolerances tol = {});
    int a() const { return T.a(); }
    int b() const { return T.b(); }
    int c() const { return T.c(); }
    int d() const { return order.children[T.c()].front(); }
    bool free(int v) const { return v != a() && v != b() && v != c(); }
    double eps_geom() const { return tol.geom * scene; }
    double eps_contact() const { return tol.contact * scene; }
};

// Cube point, indexed by vertex id; the entries of a, b, c are ignored.
using CubePoint = std::vector<double>;

struct ChainState {
    std::vector<Host> m;          // m_v; a, b, c are the boundary pieces
    std::vector<Vec2> p;          // base p_v (p_a unused)
    std::vector<double> f_base;   // fraction of p_v on m_v
    std::vector<double> link_x;   // fraction from p_{v-1} to p_v on m_{v-1}
    std::vector<char> collapsed;  // m_v is a point
    std::vector<std::string> shape_name;

    const Body& body(int v) const { return m[v].body; }
};

ChainState evaluate_chain(const MonsterConfig& cfg, const CubePoint& x);
// recompute v and everything below it, assuming the ancestors are current
void update_subtree(const MonsterConfig& cfg, const CubePoint& x, ChainState& s, int v);
// recompute only the path from v down to w
void update_path(const MonsterConfig& cfg, const CubePoint& x, ChainState& s, int v, int w);

// Violations of M3-M7 (and the base-collapse rule), one line each.
std::vector<std::string> audit_chain(const MonsterConfig& cfg, const CubePoint& x, const ChainState& s);

// Maximal homothet tangent to P_c at its parameter t (0 at z1, 1 at z3) that
// avoids P_a∪P_b; inaccessible parameters take the body of their run's ends.
struct PermissibleBody {
    Body body;
    Vec2 base;
    bool accessible = true;
    bool collapsed = false;
};
PermissibleBody permissible_disk(const MonsterConfig& cfg, double t);
PermissibleBody permissible_body(const MonsterConfig& cfg, const ShapePtr& shape, double t);

struct Residual {
    double value = 0;  // > 0 inside K_i, < 0 outside, 0 at tangency boundaries
    bool inside = false;
    double ls_distance = 0;
};
Residual k_residual(const MonsterConfig& cfg, const CubePoint& x, const ChainState& s, int i);
Residual k_residual(const MonsterConfig& cfg, const CubePoint& x, int i);

enum class Classification { Valid, DegenerateConforming, Invalid };
const char* to_string(Classification c);

struct EdgeGap {
    int u, v;
    double gap;
};

struct ValidationReport {
    Classification status = Classification::Invalid;
    std::vector<EdgeGap> edges;   // every T-edge not inside {a,b,c}
    std::vector<EdgeGap> extra;   // non-edges closer than eps_contact
    double worst_edge = 0;        // max |gap| over T-edges
    double worst_overlap = 0;     // most negative gap over all pairs
    std::vector<int> points;      // collapsed bodies
    std::string message;
};

struct SolverStats {
    int sweeps = 0;
    int restarts = 0;
    int newton_iterations = 0;
    double sweep_update = 0;
    double residual = 0;  // max |tangency gap| after polishing
    bool sweeps_converged = false;
    bool newton_converged = false;
    std::string method;  // "sweeps" or "continuation"
};

struct PackingResult {
    std::vector<Body> body;  // interior placements (a, b, c left empty)
    std::vector<std::string> shape_name;
    CubePoint x;
    ValidationReport report;
    SolverStats stats;
    std::string diagnostics;
};

ValidationReport validate_packing(const MonsterConfig& cfg, const std::vector<Body>& bodies);

struct SolveOptions {
    bool sweeps = true;  // run the monster sweeps before polishing
    bool polish = true;
    bool continuation = true;  // fall back when the sweeps do not validate
    std::uint64_t seed = 1;
};
PackingResult solve(const MonsterConfig& cfg, const SolveOptions& opt = {});

// Tangency Newton iteration for the nerve of cfg.T starting from `bodies`.
// Shapes are held fixed; `reshape` (optional) re-evaluates shape fields between
// outer rounds.
struct PolishResult {
    std::vector<Body> body;
    int iterations = 0;
    double residual = 0;
    bool converged = false;
};
PolishResult polish_packing(const MonsterConfig& cfg, std::vector<Body> bodies, int max_iterations, bool reshape = true);

// A fixed boundary circle; `inside` marks a circle whose interior holds W.
struct BoundaryCircle {
    Vec2 center;
    double radius = 1;
    bool inside = false;
};
struct CirclePacking {
    std::vector<Vec2> center;
    std::vector<double> radius;
    int iterations = 0;
};

// Tangency system for the nerve of T with the boundary sets of a, b, c given
// as hosts.  Unknowns: translation and log scale of every other body; one
// equation gap = 0 per edge.
struct TangencyProblem {
    const Triangulation* T = nullptr;
    std::array<Host, 3> hosts;  // for a, b, c in root order
    // shape of v given its contact with `parent[v]`; null keeps the shapes
    std::function<ShapePtr(int v, Vec2 base)> shape;
    std::vector<int> parent;
    double scene = 1;
};
PolishResult tangency_newton(const TangencyProblem& P, std::vector<Body> bodies, int max_iterations, int rounds = 6);
ValidationReport classify_packing(const Triangulation& T, const std::array<Host, 3>& hosts,
                                  const std::vector<Body>& bodies, double eps_contact, double eps_geom);

// Disk packing with three fixed boundary circles, by Newton's method on the
// angle sums in log-radius.
CirclePacking disk_seed(const Triangulation& T, const std::array<BoundaryCircle, 3>& boundary);

// Path from a disk (s = 0) to `target` (s = 1) through convex shapes.
Shape blend_shape(const Shape& target, double s);

// Continuation: a disk packing among three circles, deformed into the
// prescribed boundary and shapes while tracking the tangency system.
PackingResult continuation_solve(const MonsterConfig& cfg);

// Circles C_4..C_s for a counterclockwise spiral with Q1 the outside of a
// circle and Q2, Q3 disks, all mutually tangent.
PackingResult spiral_solve(const Triangulation& T, const std::vector<int>& spiral, ExteriorCircle Q1, Body Q2, Body Q3,
                           const SolveOptions& opt = {}, Tolerances tol = {});
MonsterConfig spiral_config(const Triangulation& T, const std::vector<int>& spiral, ExteriorCircle Q1, Body Q2,
                            Body Q3, Tolerances tol = {});

// Independent angle-sum relaxation for all-disk instances.  The boundary
// vertices are fixed circles.
CirclePacking circle_pack_oracle(const Triangulation& T, const std::array<BoundaryCircle, 3>& boundary,
                                 int max_iterations = 100000, double tol = 1e-14);

}  // namespace homothet
