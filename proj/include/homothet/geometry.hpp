#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace homothet {

struct Vec2 {
    double x = 0, y = 0;
    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x, y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x, y -= o.y; return *this; }
    bool operator==(const Vec2&) const = default;
};
inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }  // counterclockwise quarter turn
inline Vec2 unit(Vec2 a) {
    double n = norm(a);
    return n > 0 ? a / n : Vec2{1, 0};
}
inline Vec2 polar(double th) { return {std::cos(th), std::sin(th)}; }

// 2x2 matrix, row major.
struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;
    Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 transpose() const { return {a, c, b, d}; }
    double det() const { return a * d - b * c; }
    Mat2 inverse() const {
        double D = det();
        return {d / D, -b / D, -c / D, a / D};
    }
    static Mat2 rotation(double th) {
        double c = std::cos(th), s = std::sin(th);
        return {c, -s, s, c};
    }
};

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A convex prototype: either a convex polygon thickened by a disk of radius
// `rounding` (a disk is a one-vertex polygon, a segment a two-vertex one), or
// an ellipse L * (unit disk).
//
// The boundary carries a counterclockwise parameter s in [0, param_length()).
// It is arclength, except that a sharp polygon corner gets a small virtual
// length so that the outward normal turns continuously with s.
class Shape {
public:
    enum class Kind { Rounded, Ellipse };

    static Shape disk(double radius = 1.0);
    static Shape polygon(std::vector<Vec2> ccw_vertices, double rounding = 0.0);
    static Shape segment(Vec2 p, Vec2 q, double rounding = 0.0);
    static Shape ellipse(double semi_a, double semi_b, double angle);
    static Shape ellipse(const Mat2& L);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    Shape& set_name(std::string n) { name_ = std::move(n); return *this; }
    const std::vector<Vec2>& vertices() const { return verts_; }
    double rounding() const { return rho_; }
    const Mat2& ellipse_matrix() const { return L_; }

    bool is_disk() const { return kind_ == Kind::Rounded && verts_.size() == 1; }
    // no interior: a bare segment or a bare point
    bool is_degenerate() const { return kind_ == Kind::Rounded && rho_ == 0.0 && verts_.size() <= 2; }

    double support(Vec2 u) const;
    // argmax of <s,u>; ties along a flat side resolve to the side's midpoint
    Vec2 support_point(Vec2 u) const;
    double diameter() const { return diam_; }
    double area() const;
    double perimeter() const;  // true perimeter (virtual corner lengths excluded)

    double param_length() const { return total_; }
    Vec2 point_at(double s) const;
    Vec2 normal_at(double s) const;
    // parameter of the boundary point nearest to q
    double param_of(Vec2 q) const;
    // boundary samples, counterclockwise
    std::vector<Vec2> outline(int n) const;

private:
    struct Piece {
        int kind;  // 0 edge, 1 corner arc
        double s0, len;
        Vec2 p, q;        // edge endpoints, or arc center for corners (p)
        double th0, dth;  // corner arc start angle and sweep
        double radius;    // corner arc radius (0 for sharp corners)
    };
    void build();
    Kind kind_ = Kind::Rounded;
    std::string name_;
    std::vector<Vec2> verts_;
    double rho_ = 0;
    Mat2 L_;
    double diam_ = 0, total_ = 0;
    std::vector<Piece> pieces_;
    std::vector<double> ell_s_;  // cumulative arclength table for ellipses
};

using ShapePtr = std::shared_ptr<const Shape>;
inline ShapePtr make_shape(Shape s) { return std::make_shared<const Shape>(std::move(s)); }

// t + alpha * S; alpha == 0 is the point {t}.
struct Body {
    ShapePtr shape;
    Vec2 t;
    double alpha = 0;

    bool is_point() const { return alpha <= 0 || !shape; }
    double support(Vec2 u) const { return dot(t, u) + (is_point() ? 0.0 : alpha * shape->support(u)); }
    Vec2 support_point(Vec2 u) const { return is_point() ? t : t + shape->support_point(u) * alpha; }
    // boundary by fraction f in [0,1) of the parameter length, counterclockwise
    Vec2 point_at(double f) const;
    Vec2 normal_at(double f) const;
    double fraction_of(Vec2 q) const;
    double perimeter() const { return is_point() ? 0.0 : alpha * shape->perimeter(); }
    std::vector<Vec2> outline(int n) const;
    Vec2 center() const;
    double diameter() const { return is_point() ? 0.0 : alpha * shape->diameter(); }
};

Body point_body(Vec2 p);
Body segment_body(Vec2 p, Vec2 q);

// Signed gap between two closed sets.  Positive: separation distance.
// Negative: penetration depth.  `u` is the unit direction from the first set
// towards the second at the witness points `pa`, `pb`.
struct Gap {
    double value = 0;
    Vec2 u{1, 0};
    Vec2 pa, pb;
};

Gap signed_distance(const Body& A, const Body& B);

// Complement of an open disk: the closed region |z - o| >= R (plus infinity).
struct ExteriorCircle {
    Vec2 o;
    double R = 1;
};
Gap signed_distance(const Body& A, const ExteriorCircle& E);

// Bodies sharing a common homothety h(z) = s*z + w.
Body apply_homothety(const Body& B, double s, Vec2 w);

// Homothets of S touching a support line at p from the side `n` points to.
struct TangentFamily {
    ShapePtr shape;
    Vec2 p, n;   // n: unit normal pointing into the side the bodies occupy
    Vec2 s_star; // prototype point that lands on p (support point towards -n)
    Body at(double alpha) const { return Body{shape, p - s_star * alpha, alpha}; }
};
TangentFamily tangent_family(ShapePtr prototype, Vec2 p, Vec2 n);

// An obstacle for max_scale: a body or the outside of a circle.
struct Obstacle {
    enum class Kind { Body, Exterior } kind = Kind::Body;
    Body body;
    ExteriorCircle ext;
    int tag = -1;  // caller's id (vertex, boundary arc, ...)
    static Obstacle of(Body b, int tag = -1) { return {Kind::Body, std::move(b), {}, tag}; }
    static Obstacle outside(ExteriorCircle e, int tag = -1) { return {Kind::Exterior, {}, e, tag}; }
};
Gap obstacle_gap(const Body& K, const Obstacle& o);

struct ScaleResult {
    enum class Status { Contact, Degenerate, NoContact } status = Status::Contact;
    double alpha = 0;
    int hit = -1;  // index into the obstacle list
};

// Largest alpha in (0, alpha_max] keeping the family's interior off every
// obstacle, to relative precision ~1e-14.  Degenerate if p itself lies within
// eps of an obstacle; NoContact if alpha_max is reached first.
ScaleResult max_scale(const TangentFamily& fam, const std::vector<Obstacle>& obstacles, double alpha_max, double eps);

// Point at counterclockwise boundary fraction t from `base`.
Vec2 boundary_point(const Body& B, Vec2 base, double t, double tol = 1e-7);

// Counterclockwise fraction interval [f0, f0 + len] on a closed boundary; len in [0,1].
struct FracArc {
    double f0 = 0, len = 0;
    bool contains(double f, double slack = 0) const;
};

// Open polyline; the fraction parameter runs along `pts` by arclength.
struct Curve {
    std::vector<Vec2> pts;
    std::vector<double> cum;  // cumulative length, cum[0] = 0
    std::vector<Body> segs;

    static Curve from(std::vector<Vec2> pts);
    double length() const { return cum.empty() ? 0.0 : cum.back(); }
    Vec2 point_at(double f) const;
    Vec2 tangent_at(double f) const;  // unit; averaged at interior vertices
    double fraction_of(Vec2 q) const;
    Curve sub(double f0, double f1) const;
    Gap gap(const Body& K) const;  // K first, curve second
};

// A member of a chain: a body, a piece of a Jordan boundary, or the outside of
// a circle.  Fractions run counterclockwise around the host set; for a curve
// that is the curve's own direction (the region W lies to its right).
struct Host {
    enum class Kind { Body, Curve, Exterior } kind = Kind::Body;
    Body body;
    Curve curve;
    ExteriorCircle ext;

    static Host of(Body b);
    static Host of(Curve c);
    static Host of(ExteriorCircle e);
    bool is_point() const { return kind == Kind::Body && body.is_point(); }
    Gap gap(const Body& K) const;  // K first
    Vec2 point_at(double f) const;
    double fraction_of(Vec2 q) const;
    Vec2 outward_normal(double f) const;
    std::vector<Obstacle> obstacles(int tag) const;
};

// Part of a host boundary (an arc), the whole boundary, or a single point.
struct BoundaryArc {
    enum class Kind { Arc, Whole, Point } kind = Kind::Point;
    const Host* host = nullptr;
    FracArc arc;
    Vec2 start, end;

    double length() const;
    std::vector<Vec2> samples(int n) const;
    // distance from K to the arc; negative if K overlaps the host near it
    double distance(const Body& K) const;
    // distance from K to the rest of the host boundary
    double complement_distance(const Body& K) const;
};

// One link m_k of a tree path m_j, ..., m_i: the host, the fraction of its own
// base p_k on itself, and x = counterclockwise distance (as a fraction of the
// previous link's boundary) from p_{k-1} to p_k.
struct ChainLink {
    const Host* host = nullptr;
    double f_base = 0;
    double x = 0;
};
enum class Side { Left, Right };

// LS_j^i (Side::Left) or RS_j^i along a tree path given as links j..i.  The
// left piece on m_{k-1} runs clockwise from p_{k-1} to p_k; point links give
// a single point; if `from_root` the whole boundary of the first link is used.
std::vector<BoundaryArc> chain_side_arc(const std::vector<ChainLink>& path, Side side, bool from_root);

// Minimal enclosing circle (center, radius) of a point set.
std::pair<Vec2, double> enclosing_circle(const std::vector<Vec2>& pts);

// Polygonal approximation of the intersection of all radius-r disks
// containing `body`; n boundary samples.
Shape strictify(const Shape& body, double r, int n);

// Convex hull, counterclockwise, collinear points removed.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

}  // namespace homothet
