#include "homothet/packer.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace homothet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap01(double f) {
    f = std::fmod(f, 1.0);
    if (f < 0) f += 1.0;
    if (f >= 1.0) f = 0.0;
    return f;
}

double signed_area(const std::vector<Vec2>& P) {
    double A = 0;
    for (std::size_t i = 0; i < P.size(); ++i) A += cross(P[i], P[(i + 1) % P.size()]);
    return 0.5 * A;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
        double v = cross(q - p, r - p);
        return (v > 0) - (v < 0);
    };
    auto on_seg = [](Vec2 p, Vec2 q, Vec2 r) {
        return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
               r.y <= std::max(p.y, q.y);
    };
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_seg(a, b, c)) return true;
    if (o2 == 0 && on_seg(a, b, d)) return true;
    if (o3 == 0 && on_seg(c, d, a)) return true;
    if (o4 == 0 && on_seg(c, d, b)) return true;
    return false;
}

Vec2 gap_midpoint(const Gap& g) { return (g.pa + g.pb) * 0.5; }


}  // namespace

// ---------------------------------------------------------------- boundary

JordanBoundary JordanBoundary::from_polyline(std::vector<Vec2> pts, std::array<int, 3> splits) {
    if (pts.size() >= 2 && pts.front() == pts.back()) pts.pop_back();
    int n = static_cast<int>(pts.size());
    if (n < 3) throw PackerError("boundary: polyline needs at least 3 vertices");
    for (int s : splits)
        if (s < 0 || s >= n) throw PackerError("boundary: split index out of range");
    if (splits[0] == splits[1] || splits[1] == splits[2] || splits[0] == splits[2])
        throw PackerError("boundary: split points must be distinct");
    if (signed_area(pts) <= 0) throw PackerError("boundary: polyline must be counterclockwise");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]))
                throw PackerError("boundary: polyline is not simple");
        }
    // the splits must be in counterclockwise (increasing cyclic) order
    auto ahead = [&](int from, int to) { return (to - from + n) % n; };
    if (ahead(splits[0], splits[1]) + ahead(splits[1], splits[2]) + ahead(splits[2], splits[0]) != n)
        throw PackerError("boundary: split points are not in counterclockwise order");
    auto walk = [&](int i, int j) {
        std::vector<Vec2> out;
        for (int k = i;; k = (k + 1) % n) {
            out.push_back(pts[k]);
            if (k == j) break;
        }
        std::reverse(out.begin(), out.end());
        return out;
    };
    JordanBoundary B;
    B.mode = Mode::Polyline;
    B.polyline = pts;
    B.splits = splits;
    B.P[0] = Host::of(Curve::from(walk(splits[0], splits[1])));
    B.P[1] = Host::of(Curve::from(walk(splits[1], splits[2])));
    B.P[2] = Host::of(Curve::from(walk(splits[2], splits[0])));
    B.z1 = pts[splits[0]];
    B.z2 = pts[splits[1]];
    B.z3 = pts[splits[2]];
    return B;
}

JordanBoundary JordanBoundary::from_tangent_circles(std::array<Vec2, 3> c, std::array<double, 3> r) {
    for (double x : r)
        if (!(x > 0)) throw PackerError("boundary: circle radii must be positive");
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double d = norm(c[i] - c[j]);
            if (std::abs(d - r[i] - r[j]) > 1e-9 * (r[i] + r[j]))
                throw PackerError("boundary: circles are not mutually tangent");
        }
    if (cross(c[1] - c[0], c[2] - c[0]) <= 0) throw PackerError("boundary: circles a,b,c must be counterclockwise");
    JordanBoundary B;
    B.mode = Mode::TangentCircles;
    auto disk = make_shape(Shape::disk(1));
    for (int i = 0; i < 3; ++i) B.P[i] = Host::of(Body{disk, c[i], r[i]});
    auto contact = [&](int i, int j) { return c[i] + unit(c[j] - c[i]) * r[i]; };
    B.z1 = contact(0, 2);
    B.z2 = contact(0, 1);
    B.z3 = contact(1, 2);
    return B;
}

JordanBoundary JordanBoundary::from_bodies(ExteriorCircle outer, Body pb, Body pc) {
    JordanBoundary B;
    B.mode = Mode::Bodies;
    B.P[0] = Host::of(outer);
    B.P[1] = Host::of(pb);
    B.P[2] = Host::of(pc);
    double tol = 1e-9 * 2 * outer.R;
    Gap ab = signed_distance(pb, outer), bc = signed_distance(pb, pc), ac = signed_distance(pc, outer);
    if (std::abs(ab.value) > tol || std::abs(bc.value) > tol || std::abs(ac.value) > tol)
        throw PackerError("boundary: P_a, P_b, P_c are not mutually touching");
    B.z2 = gap_midpoint(ab);
    B.z3 = gap_midpoint(bc);
    B.z1 = gap_midpoint(ac);
    return B;
}

double JordanBoundary::diameter() const {
    switch (mode) {
        case Mode::Polyline: {
            double d = 0;
            for (auto& p : polyline)
                for (auto& q : polyline) d = std::max(d, norm(p - q));
            return d;
        }
        case Mode::TangentCircles:
            return std::max({norm(z1 - z2), norm(z2 - z3), norm(z3 - z1)});
        default:
            return 2 * P[0].ext.R;
    }
}

std::array<double, 3> JordanBoundary::corner_angles() const {
    std::array<double, 3> out{0, 0, 0};
    if (mode != Mode::Polyline) return out;
    int n = static_cast<int>(polyline.size());
    for (int k = 0; k < 3; ++k) {
        int i = splits[k];
        Vec2 prev = polyline[(i + n - 1) % n], cur = polyline[i], next = polyline[(i + 1) % n];
        Vec2 u = prev - cur, w = next - cur;
        double ang = std::atan2(cross(w, u), dot(w, u));
        if (ang < 0) ang += kTwoPi;
        out[k] = ang;
    }
    return out;
}

// ---------------------------------------------------------------- orders

ChainOrder ChainOrder::from_tree(const RootedOrder& R) {
    const auto& T = R.triangulation();
    int n = T.vertex_count();
    ChainOrder O;
    O.parent.resize(n);
    O.godparent.resize(n);
    O.heir.resize(n);
    O.depth.resize(n);
    O.children.resize(n);
    for (int v = 0; v < n; ++v) {
        O.parent[v] = R.parent(v);
        O.godparent[v] = R.godparent(v);
        O.heir[v] = R.heir(v);
        O.depth[v] = R.depth(v);
        O.children[v] = R.children(v);
    }
    O.sequence = R.birth_order();
    return O;
}

ChainOrder ChainOrder::from_spiral(const Triangulation& T, const std::vector<int>& seq) {
    if (!is_counterclockwise_spiral(T, seq)) throw PackerError("spiral: sequence is not a counterclockwise spiral");
    if (seq.size() < 4 || seq[0] != T.a() || seq[1] != T.b() || seq[2] != T.c())
        throw PackerError("spiral: must start with the root triple a, b, c");
    int n = T.vertex_count();
    ChainOrder O;
    O.parent.assign(n, -1);
    O.godparent.assign(n, -1);
    O.heir.assign(n, -1);
    O.depth.assign(n, 0);
    O.children.assign(n, {});
    O.sequence = seq;
    for (int k = 1; k < n; ++k) {
        O.parent[seq[k]] = seq[k - 1];
        O.depth[seq[k]] = k;
        O.children[seq[k - 1]].push_back(seq[k]);
    }
    for (int k = 3; k < n; ++k) {
        int g = seq[k - 2];
        O.godparent[seq[k]] = g;
        for (int h = k; h < n; ++h)
            if (T.adjacent(g, seq[h])) {
                O.heir[seq[k]] = seq[h];
                break;
            }
        if (O.heir[seq[k]] < 0) throw PackerError("spiral: no heir for vertex " + std::to_string(seq[k]));
    }
    return O;
}

bool ChainOrder::le(int u, int v) const {
    while (depth[v] > depth[u]) v = parent[v];
    return u == v;
}

std::vector<int> ChainOrder::path(int u, int v) const {
    if (!le(u, v)) throw PackerError("path: not an ancestor");
    std::vector<int> out;
    for (int w = v; w != u; w = parent[w]) out.push_back(w);
    out.push_back(u);
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<int> ChainOrder::subtree(int v) const {
    std::vector<int> out;
    for (int w : sequence)
        if (le(v, w)) out.push_back(w);
    return out;
}

// ---------------------------------------------------------------- config

namespace {

struct RawPermissible {
    Body body;
    Vec2 q;
    int hit = -1;  // 0: P_a, 1: P_b, 2: P_c
    bool collapsed = false;
};

double alpha_cap(const MonsterConfig& cfg, const ShapePtr& s) { return 100.0 * cfg.scene / s->diameter(); }

// point of P_c at parameter t and the normal into W
std::pair<Vec2, Vec2> pc_point(const MonsterConfig& cfg, double t) {
    const JordanBoundary& B = cfg.boundary;
    if (B.mode == JordanBoundary::Mode::Polyline) {
        const Host& h = B.P[2];
        return {h.curve.point_at(t), h.outward_normal(t)};
    }
    const Body& C = B.P[2].body;
    double f1 = C.fraction_of(B.z1), f3 = C.fraction_of(B.z3);
    double delta = wrap01(f3 - f1);
    double f = f1 + t * delta;
    if (t == 0.0) return {B.z1, C.normal_at(f1)};
    if (t == 1.0) return {B.z3, C.normal_at(f3)};
    return {C.point_at(wrap01(f)), C.normal_at(wrap01(f))};
}

RawPermissible raw_permissible(const MonsterConfig& cfg, const ShapePtr& shape, double t) {
    const JordanBoundary& B = cfg.boundary;
    RawPermissible R;
    auto [q, n] = pc_point(cfg, t);
    R.q = q;
    std::vector<Obstacle> obs;
    for (int k = 0; k < 2; ++k)
        for (auto& o : B.P[k].obstacles(k)) obs.push_back(o);
    if (B.mode == JordanBoundary::Mode::Polyline) {
        double near = 1e-12 * cfg.scene;
        for (const Body& s : B.P[2].curve.segs)
            if (signed_distance(point_body(q), s).value > near) obs.push_back(Obstacle::of(s, 2));
    }
    TangentFamily fam;
    try {
        fam = tangent_family(shape, q, n);
    } catch (const GeometryError&) {
        R.body = point_body(q);
        R.collapsed = true;
        return R;
    }
    auto res = max_scale(fam, obs, alpha_cap(cfg, shape), cfg.eps_geom());
    if (res.status == ScaleResult::Status::Degenerate) {
        R.body = point_body(q);
        R.collapsed = true;
        R.hit = obs[res.hit].tag;
        return R;
    }
    if (res.status == ScaleResult::Status::NoContact) throw PackerError("permissible body: unbounded region");
    R.body = fam.at(res.alpha);
    R.hit = obs[res.hit].tag;
    return R;
}

bool accessible(const RawPermissible& R) { return R.collapsed || R.hit == 0 || R.hit == 1; }

}  // namespace

MonsterConfig MonsterConfig::make(const Triangulation& T, const ChainOrder& order, JordanBoundary boundary,
                                  std::vector<Prescription> prescription, Tolerances tol) {
    MonsterConfig cfg;
    cfg.T = T;
    cfg.order = order;
    cfg.boundary = std::move(boundary);
    cfg.tol = tol;
    int n = T.vertex_count();
    if (static_cast<int>(prescription.size()) != n)
        throw PackerError("config: prescription list must have one entry per vertex");
    for (int v = 0; v < n; ++v)
        if (cfg.free(v) && !prescription[v].defined())
            throw PackerError("config: missing prescription for vertex " + std::to_string(v));
    cfg.prescription = std::move(prescription);
    cfg.scene = cfg.boundary.diameter();
    if (cfg.order.children[T.c()].size() != 1) throw PackerError("config: c must have exactly one child");
    if (cfg.boundary.mode == JordanBoundary::Mode::Polyline) {
        // locate the inaccessible runs of the child of c
        int d = cfg.d();
        const int N = 512;
        std::vector<char> acc(N + 1);
        auto probe = [&](double t) {
            auto [q, nrm] = pc_point(cfg, t);
            (void)nrm;
            return accessible(raw_permissible(cfg, cfg.prescription[d].at(q), t));
        };
        for (int k = 0; k <= N; ++k) acc[k] = probe(static_cast<double>(k) / N);
        for (int k = 1; k < N;) {
            if (acc[k]) {
                ++k;
                continue;
            }
            int e = k;
            while (e < N && !acc[e]) ++e;
            double lo0 = static_cast<double>(k - 1) / N, hi0 = static_cast<double>(k) / N;
            for (int it = 0; it < 45; ++it) {
                double m = 0.5 * (lo0 + hi0);
                (probe(m) ? lo0 : hi0) = m;
            }
            double lo1 = static_cast<double>(e - 1) / N, hi1 = static_cast<double>(e) / N;
            for (int it = 0; it < 45; ++it) {
                double m = 0.5 * (lo1 + hi1);
                (probe(m) ? hi1 : lo1) = m;
            }
            cfg.inaccessible.push_back({lo0, hi1});
            k = e;
        }
    }
    return cfg;
}

MonsterConfig MonsterConfig::make(const Triangulation& T, JordanBoundary boundary,
                                  std::vector<Prescription> prescription, Tolerances tol) {
    return make(T, ChainOrder::from_tree(RootedOrder::build(T)), std::move(boundary), std::move(prescription), tol);
}

PermissibleBody permissible_body(const MonsterConfig& cfg, const ShapePtr& shape, double t) {
    if (!cfg.boundary.arc_mode()) throw PackerError("permissible body: only defined for arc boundaries");
    if (t < 0 || t > 1) throw PackerError("permissible body: parameter outside [0,1]");
    PermissibleBody P;
    for (auto [t0, t1] : cfg.inaccessible) {
        if (t <= t0 || t >= t1) continue;
        auto R0 = raw_permissible(cfg, shape, t0), R1 = raw_permissible(cfg, shape, t1);
        double s = (t - t0) / (t1 - t0);
        Body D{R0.body.shape, R0.body.t + (R1.body.t - R0.body.t) * s,
               R0.body.alpha + (R1.body.alpha - R0.body.alpha) * s};
        // the base runs along D between its two contacts with P_c, away from P_a∪P_b
        Gap ga = cfg.boundary.P[0].gap(D), gb = cfg.boundary.P[1].gap(D);
        Vec2 other = (ga.value < gb.value ? ga.pa : gb.pa);
        double f0 = D.fraction_of(R0.q), f1 = D.fraction_of(R1.q), fo = D.fraction_of(other);
        double ccw = wrap01(f1 - f0);
        double f = wrap01(fo - f0) < ccw ? f0 - s * (1 - ccw) : f0 + s * ccw;
        P.body = D;
        P.base = D.point_at(wrap01(f));
        P.accessible = false;
        return P;
    }
    auto R = raw_permissible(cfg, shape, t);
    P.body = R.body;
    P.base = R.q;
    P.collapsed = R.collapsed;
    return P;
}

PermissibleBody permissible_disk(const MonsterConfig& cfg, double t) {
    static const ShapePtr disk = make_shape(Shape::disk(1));
    return permissible_body(cfg, disk, t);
}

// ---------------------------------------------------------------- chain

namespace {

void set_point(ChainState& s, int v, Vec2 p) {
    s.m[v] = Host::of(point_body(p));
    s.p[v] = p;
    s.f_base[v] = 0;
    s.collapsed[v] = 1;
}

void evaluate_vertex(const MonsterConfig& cfg, const CubePoint& x, ChainState& s, int v) {
    const JordanBoundary& B = cfg.boundary;
    int a = cfg.a(), b = cfg.b(), c = cfg.c();
    if (v == a) {
        s.m[v] = B.P[0];
        s.p[v] = B.z2;
        s.f_base[v] = B.P[0].fraction_of(B.z2);
        s.link_x[v] = 0;
        return;
    }
    if (v == b) {
        s.m[v] = B.P[1];
        s.p[v] = B.z2;
        s.f_base[v] = B.P[1].fraction_of(B.z2);
        s.link_x[v] = 0;
        return;
    }
    if (v == c) {
        s.m[v] = B.P[2];
        s.p[v] = B.z3;
        s.f_base[v] = B.P[2].fraction_of(B.z3);
        s.link_x[v] = B.mode == JordanBoundary::Mode::Polyline ? 0.0
                                                                 : wrap01(B.P[1].fraction_of(B.z3) - s.f_base[b]);
        return;
    }
    double xv = x[v];
    if (!(xv >= 0 && xv <= 1)) throw PackerError("cube point coordinate outside [0,1] at vertex " + std::to_string(v));
    s.collapsed[v] = 0;
    s.link_x[v] = xv;
    int u = cfg.order.parent[v];
    if (v == cfg.d() && B.arc_mode()) {
        auto [q, nrm] = pc_point(cfg, xv);
        (void)nrm;
        ShapePtr shape = cfg.prescription[v].at(q);
        s.shape_name[v] = shape->name();
        auto P = permissible_body(cfg, shape, xv);
        if (B.mode == JordanBoundary::Mode::TangentCircles) {
            const Body& C = B.P[2].body;
            double delta = wrap01(C.fraction_of(B.z3) - C.fraction_of(B.z1));
            s.link_x[v] = 1 - (1 - xv) * delta;
        }
        if (P.collapsed) {
            set_point(s, v, P.base);
            return;
        }
        s.m[v] = Host::of(P.body);
        s.p[v] = P.base;
        s.f_base[v] = P.body.fraction_of(P.base);
        return;
    }
    if (s.collapsed[u]) {
        set_point(s, v, s.p[u]);
        return;
    }
    const Host& hu = s.m[u];
    double f = s.f_base[u] + xv;
    Vec2 pv = (xv == 0.0 || xv == 1.0) ? s.p[u] : hu.point_at(hu.kind == Host::Kind::Curve ? f : wrap01(f));
    Vec2 n = hu.outward_normal(hu.kind == Host::Kind::Curve ? f : wrap01(f));
    ShapePtr shape = cfg.prescription[v].at(pv);
    s.shape_name[v] = shape->name();
    std::vector<Obstacle> obs;
    for (int w = cfg.order.parent[u]; w >= 0; w = cfg.order.parent[w])
        for (auto& o : s.m[w].obstacles(w)) obs.push_back(o);
    TangentFamily fam;
    try {
        fam = tangent_family(shape, pv, n);
    } catch (const GeometryError&) {
        set_point(s, v, pv);
        return;
    }
    ScaleResult res;
    try {
        res = max_scale(fam, obs, alpha_cap(cfg, shape), cfg.eps_geom());
    } catch (const GeometryError& e) {
        throw PackerError("max_scale failed at vertex " + std::to_string(v) + ": " + e.what());
    }
    if (res.status == ScaleResult::Status::Degenerate) {
        set_point(s, v, pv);
        return;
    }
    if (res.status == ScaleResult::Status::NoContact)
        throw PackerError("max_scale found no contact at vertex " + std::to_string(v));
    Body K = fam.at(res.alpha);
    s.m[v] = Host::of(K);
    s.p[v] = pv;
    s.f_base[v] = K.fraction_of(pv);
}

}  // namespace

ChainState evaluate_chain(const MonsterConfig& cfg, const CubePoint& x) {
    int n = cfg.T.vertex_count();
    if (static_cast<int>(x.size()) != n) throw PackerError("cube point has the wrong dimension");
    ChainState s;
    s.m.resize(n);
    s.p.resize(n);
    s.f_base.assign(n, 0);
    s.link_x.assign(n, 0);
    s.collapsed.assign(n, 0);
    s.shape_name.assign(n, "");
    for (int v : cfg.order.sequence) evaluate_vertex(cfg, x, s, v);
    return s;
}

void update_subtree(const MonsterConfig& cfg, const CubePoint& x, ChainState& s, int v) {
    for (int w : cfg.order.subtree(v)) evaluate_vertex(cfg, x, s, w);
}

void update_path(const MonsterConfig& cfg, const CubePoint& x, ChainState& s, int v, int w) {
    for (int k : cfg.order.path(v, w)) evaluate_vertex(cfg, x, s, k);
}

std::vector<std::string> audit_chain(const MonsterConfig& cfg, const CubePoint& x, const ChainState& s) {
    std::vector<std::string> out;
    const double eps = cfg.eps_geom();
    int a = cfg.a(), b = cfg.b(), c = cfg.c();
    auto is_boundary = [&](int v) { return v == a || v == b || v == c; };
    auto pointlike = [&](int v) { return s.collapsed[v] || (!is_boundary(v) && s.body(v).diameter() <= eps); };
    auto gap = [&](int i, int j) {
        // the host of the larger-index set measures the other
        if (is_boundary(j)) return s.m[j].gap(s.m[i].body).value;
        if (is_boundary(i)) return s.m[i].gap(s.m[j].body).value;
        return signed_distance(s.body(i), s.body(j)).value;
    };
    auto say = [&](const std::string& what, int v) {
        std::ostringstream os;
        os << what << " at vertex " << v;
        out.push_back(os.str());
    };
    bool inacc_d = false;
    if (cfg.boundary.arc_mode())
        for (auto [t0, t1] : cfg.inaccessible)
            if (x[cfg.d()] > t0 && x[cfg.d()] < t1) inacc_d = true;
    for (int v : cfg.order.sequence) {
        if (is_boundary(v)) continue;
        int u = cfg.order.parent[v];
        std::vector<int> anc;
        for (int w = u; w >= 0; w = cfg.order.parent[w]) anc.push_back(w);
        // M3
        for (int j : anc)
            if (!s.collapsed[v] && gap(v, j) < -eps) say("M3 overlap with " + std::to_string(j), v);
        // M4
        bool skip_m4 = v == cfg.d() && inacc_d;
        if (!skip_m4) {
            if (std::abs(s.m[v].gap(point_body(s.p[v])).value) > eps) say("M4 base off m_v", v);
            if (std::abs(s.m[u].gap(point_body(s.p[v])).value) > eps) say("M4 base off m_parent", v);
        }
        // M5
        double touch = kInf;
        for (std::size_t k = 1; k < anc.size(); ++k) touch = std::min(touch, gap(v, anc[k]));
        if (touch > eps) say("M5 no contact with an earlier set", v);
        // M6; a distinct base is resolved relative to the size of m_u
        double base_gap = norm(s.p[v] - s.p[u]);
        double local = cfg.tol.geom * (is_boundary(u) ? cfg.scene : s.body(u).diameter());
        bool cond;
        if (v == cfg.d() && cfg.boundary.arc_mode()) {
            cond = x[v] == 1.0;
            bool at_z1 = norm(s.p[v] - cfg.boundary.z1) <= eps;
            if (at_z1 != (x[v] == 0.0)) say("M6 base at z1 iff t = 0 fails", v);
        } else {
            cond = x[v] == 0.0 || x[v] == 1.0 || s.collapsed[u];
        }
        if (cond ? base_gap > eps : base_gap <= local) say("M6 base collapse rule fails", v);
        // M7 on chains j < k < v
        if (pointlike(v)) continue;
        for (std::size_t k = 0; k < anc.size(); ++k) {
            int j = anc[k];
            if (pointlike(j) || gap(v, j) > eps) continue;
            for (std::size_t l = k + 1; l < anc.size(); ++l) {
                int i = anc[l];
                if (pointlike(i) || gap(v, i) > eps || gap(j, i) > eps) continue;
                if (is_boundary(i) && is_boundary(j)) {
                    // both boundary pieces: they meet only at a z point
                    Vec2 z = (i == a && j == b) || (i == b && j == a) ? cfg.boundary.z2
                             : (i == b && j == c) || (i == c && j == b) ? cfg.boundary.z3
                                                                        : cfg.boundary.z1;
                    if (s.m[v].gap(point_body(z)).value <= eps) say("M7 three sets share a point", v);
                    continue;
                }
                // common point: the v-j contact also on m_i
                Gap g = is_boundary(j) ? s.m[j].gap(s.body(v)) : signed_distance(s.body(v), s.body(j));
                Vec2 w = gap_midpoint(g);
                double di = is_boundary(i) ? s.m[i].gap(point_body(w)).value
                                           : signed_distance(point_body(w), s.body(i)).value;
                if (di <= eps) say("M7 three sets share a point", v);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- residual

namespace {

std::vector<ChainLink> links_of(const MonsterConfig& cfg, const ChainState& s, const std::vector<int>& path) {
    (void)cfg;
    std::vector<ChainLink> L;
    for (int k : path) L.push_back({&s.m[k], s.f_base[k], s.link_x[k]});
    return L;
}

}  // namespace

Residual k_residual(const MonsterConfig& cfg, const CubePoint& x, const ChainState& s, int i) {
    if (!cfg.free(i)) throw PackerError("k_residual: vertex is not in J");
    int g = cfg.order.godparent[i], h = cfg.order.heir[i], u = cfg.order.parent[i];
    if (g < 0 || h < 0) throw PackerError("k_residual: godparent/heir undefined");
    auto gp = cfg.order.path(g, u);
    if (gp.size() < 2) throw PackerError("k_residual: godparent must be below the parent");
    auto links = links_of(cfg, s, gp);
    auto LS = chain_side_arc(links, Side::Left, g == cfg.a());
    auto sub = cfg.order.path(i, h);
    double dls = kInf;
    for (int k : sub)
        for (const auto& A : LS) dls = std::min(dls, A.distance(s.m[k].body));
    Residual r;
    r.ls_distance = dls;
    double touch = 10 * cfg.eps_geom();
    if (x[i] <= 0.0) {
        r.value = -std::max(dls, touch);
        return r;
    }
    if (dls > touch) {
        r.value = -dls;
        return r;
    }
    auto RS = chain_side_arc(links, Side::Right, false);
    double drs = kInf;
    for (int k : sub)
        for (const auto& A : RS) drs = std::min(drs, A.distance(s.m[k].body));
    r.inside = true;
    r.value = std::max(0.0, drs);
    return r;
}

Residual k_residual(const MonsterConfig& cfg, const CubePoint& x, int i) {
    return k_residual(cfg, x, evaluate_chain(cfg, x), i);
}

// ---------------------------------------------------------------- validation

const char* to_string(Classification c) {
    switch (c) {
        case Classification::Valid: return "VALID";
        case Classification::DegenerateConforming: return "DEGENERATE-CONFORMING";
        default: return "INVALID";
    }
}

// ---------------------------------------------------------------- solve

namespace {

struct SweepOutcome {
    CubePoint x;
    ChainState state;
    int sweeps = 0;
    double update = 0;
    bool converged = false;
};

// One Gauss-Seidel sweep: each coordinate moves to the boundary of its K_i.
class Sweeper {
public:
    Sweeper(const MonsterConfig& cfg, CubePoint x) : cfg_(cfg), x_(std::move(x)), s_(evaluate_chain(cfg, x_)) {
        for (int v : cfg.order.sequence)
            if (cfg.free(v)) coords_.push_back(v);
    }
    const CubePoint& x() const { return x_; }
    const ChainState& state() const { return s_; }
    const std::vector<int>& coords() const { return coords_; }
    void reset(const CubePoint& x) {
        x_ = x;
        s_ = evaluate_chain(cfg_, x_);
    }
    // returns the largest coordinate change
    double sweep(double tol, double guess_width) {
        double maxdx = 0;
        for (int i : coords_) {
            double old = x_[i];
            double hi = solve_coordinate(i, old, guess_width, tol);
            x_[i] = hi;
            maxdx = std::max(maxdx, std::abs(hi - old));
            update_subtree(cfg_, x_, s_, i);
        }
        return maxdx;
    }

private:
    bool inside(int i, double xi) {
        if (xi <= 0) return false;
        x_[i] = xi;
        update_path(cfg_, x_, s_, i, cfg_.order.heir[i]);
        return k_residual(cfg_, x_, s_, i).inside;
    }
    // bracket the sign change by expanding around the guess, then bisect
    double solve_coordinate(int i, double guess, double w, double tol) {
        double lo = std::max(0.0, guess - w), hi = std::min(1.0, guess + w);
        while (lo > 0 && inside(i, lo)) {
            hi = lo;
            w *= 4;
            lo = std::max(0.0, guess - w);
        }
        while (hi < 1 && !inside(i, hi)) {
            lo = hi;
            w *= 4;
            hi = std::min(1.0, guess + w);
        }
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            (inside(i, mid) ? hi : lo) = mid;
        }
        return hi;
    }

    const MonsterConfig& cfg_;
    CubePoint x_;
    ChainState s_;
    std::vector<int> coords_;
};

SweepOutcome run_sweeps(const MonsterConfig& cfg, CubePoint x) {
    SweepOutcome out;
    Sweeper S(cfg, std::move(x));
    const double ex = cfg.tol.x;
    double best = kInf;
    CubePoint best_x = S.x();
    double width = 0.5;
    int since_best = 0;
    for (int sweep = 0; sweep < cfg.tol.sweeps; ++sweep) {
        CubePoint before = S.x();
        double dx = S.sweep(ex, width);
        width = std::max(1e-7, 2 * dx);
        out.sweeps = sweep + 1;
        if (dx < best) {
            best = dx;
            best_x = before;
            since_best = 0;
        } else if (++since_best > 8) {
            break;  // the sweeps are moving away from the fixed point
        }
        if (dx <= ex) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged) {
        // report the sweep that came closest to a fixed point
        S.reset(best_x);
        S.sweep(ex, 0.5);
    }
    out.update = best;
    out.x = S.x();
    out.state = S.state();
    return out;
}

std::vector<Body> bodies_of(const MonsterConfig& cfg, const ChainState& s) {
    int n = cfg.T.vertex_count();
    std::vector<Body> B(n);
    for (int v = 0; v < n; ++v)
        if (cfg.free(v)) B[v] = s.m[v].body;
    return B;
}

int rank(Classification c) { return c == Classification::Valid ? 2 : c == Classification::DegenerateConforming ? 1 : 0; }

}  // namespace

PackingResult solve(const MonsterConfig& cfg, const SolveOptions& opt) {
    int n = cfg.T.vertex_count();
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    PackingResult best;
    bool have = false;
    std::ostringstream diag;
    int restarts = std::max(1, cfg.tol.restarts);
    for (int r = 0; r < restarts; ++r) {
        CubePoint x(n, 0.5);
        if (r > 0)
            for (int v = 0; v < n; ++v) x[v] = U(rng);
        PackingResult cur;
        cur.stats.restarts = r;
        cur.stats.method = "sweeps";
        std::vector<Body> bodies;
        if (opt.sweeps) {
            SweepOutcome sw;
            try {
                sw = run_sweeps(cfg, x);
            } catch (const PackerError& e) {
                diag << "restart " << r << ": " << e.what() << "; ";
                continue;
            }
            cur.x = sw.x;
            cur.stats.sweeps = sw.sweeps;
            cur.stats.sweep_update = sw.update;
            cur.stats.sweeps_converged = sw.converged;
            bodies = bodies_of(cfg, sw.state);
            cur.shape_name = sw.state.shape_name;
            if (!sw.converged) diag << "restart " << r << ": sweeps stopped at update " << sw.update << "; ";
        } else {
            ChainState s = evaluate_chain(cfg, x);
            cur.x = x;
            bodies = bodies_of(cfg, s);
            cur.shape_name = s.shape_name;
        }
        ValidationReport rep = validate_packing(cfg, bodies);
        if (opt.polish) {
            PolishResult P;
            try {
                P = polish_packing(cfg, bodies, cfg.tol.newton_iterations);
            } catch (const PackerError& e) {
                diag << "restart " << r << ": polish skipped: " << e.what() << "; ";
                P.residual = std::numeric_limits<double>::infinity();
            }
            cur.stats.newton_iterations = P.iterations;
            cur.stats.newton_converged = P.converged;
            cur.stats.residual = P.residual;
            auto prep = P.converged ? validate_packing(cfg, P.body) : ValidationReport{};
            if (P.converged && rank(prep.status) >= rank(rep.status)) {
                bodies = std::move(P.body);
                rep = prep;
            } else if (std::isfinite(P.residual)) {
                diag << "restart " << r << ": polish did not improve (residual " << P.residual << "); ";
            }
        }
        cur.body = std::move(bodies);
        for (int v = 0; v < n; ++v)
            if (cfg.free(v) && cur.body[v].shape) cur.shape_name[v] = cur.body[v].shape->name();
        cur.report = rep;
        if (!have || rank(rep.status) > rank(best.report.status) ||
            (rank(rep.status) == rank(best.report.status) && rep.worst_edge < best.report.worst_edge)) {
            best = std::move(cur);
            have = true;
        }
        if (best.report.status == Classification::Valid) break;
    }
    if (best.report.status != Classification::Valid && opt.continuation) {
        try {
            auto C = continuation_solve(cfg);
            if (!have || rank(C.report.status) > rank(best.report.status)) {
                diag << "sweeps gave " << (have ? to_string(best.report.status) : "nothing")
                     << "; continuation used; " << C.diagnostics;
                C.stats.restarts = have ? best.stats.restarts : restarts;
                best = std::move(C);
                have = true;
            } else {
                diag << "continuation gave " << to_string(C.report.status) << "; ";
            }
        } catch (const PackerError& e) {
            diag << e.what() << "; ";
        }
    }
    if (!have) throw PackerError("solve: every restart failed: " + diag.str());
    best.diagnostics = diag.str();
    return best;
}

// ---------------------------------------------------------------- spiral

MonsterConfig spiral_config(const Triangulation& T, const std::vector<int>& spiral, ExteriorCircle Q1, Body Q2,
                            Body Q3, Tolerances tol) {
    auto order = ChainOrder::from_spiral(T, spiral);
    auto B = JordanBoundary::from_bodies(Q1, std::move(Q2), std::move(Q3));
    std::vector<Prescription> pr(T.vertex_count());
    auto disk = make_shape(Shape::disk(1));
    for (std::size_t k = 3; k < spiral.size(); ++k) pr[spiral[k]] = Prescription::of(disk);
    return MonsterConfig::make(T, order, std::move(B), std::move(pr), tol);
}

PackingResult spiral_solve(const Triangulation& T, const std::vector<int>& spiral, ExteriorCircle Q1, Body Q2, Body Q3,
                           const SolveOptions& opt, Tolerances tol) {
    return solve(spiral_config(T, spiral, Q1, std::move(Q2), std::move(Q3), tol), opt);
}

// ---------------------------------------------------------------- oracle

CirclePacking circle_pack_oracle(const Triangulation& T, const std::array<BoundaryCircle, 3>& bc, int max_iterations,
                                 double tol) {
    int n = T.vertex_count();
    std::array<int, 3> root = T.root();
    std::vector<int> bidx(n, -1);
    for (int k = 0; k < 3; ++k) bidx[root[k]] = k;
    double scale = 0;
    for (auto& c : bc) scale = std::max(scale, c.radius);
    std::vector<double> r(n, 0.1 * scale);
    for (int k = 0; k < 3; ++k) r[root[k]] = bc[k].radius;
    auto dist = [&](int u, int v) {
        int bu = bidx[u], bv = bidx[v];
        if (bu >= 0 && bv >= 0) return norm(bc[bu].center - bc[bv].center);
        if (bu >= 0) std::swap(u, v), std::swap(bu, bv);
        if (bv >= 0) return bc[bv].inside ? bc[bv].radius - r[u] : bc[bv].radius + r[u];
        return r[u] + r[v];
    };
    auto angle_at = [&](int v, int u, int w) {
        double a = dist(v, u), b = dist(v, w), c = dist(u, w);
        if (a <= 0 || b <= 0) return 0.0;
        double cs = (a * a + b * b - c * c) / (2 * a * b);
        return std::acos(std::clamp(cs, -1.0, 1.0));
    };
    auto theta = [&](int v) {
        const auto& rot = T.rotation(v);
        double s = 0;
        for (std::size_t k = 0; k < rot.size(); ++k) s += angle_at(v, rot[k], rot[(k + 1) % rot.size()]);
        return s;
    };
    CirclePacking out;
    for (int it = 0; it < max_iterations; ++it) {
        double change = 0;
        for (int v = 0; v < n; ++v) {
            if (bidx[v] >= 0) continue;
            double r0 = r[v];
            // angle sum decreases with r: bracket, then bisect on log r
            double lo = r0, hi = r0;
            r[v] = lo;
            while (theta(v) < kTwoPi) lo *= 0.5, r[v] = lo;
            r[v] = hi;
            while (theta(v) > kTwoPi) {
                hi *= 2;
                r[v] = hi;
                for (int k = 0; k < 3; ++k)
                    if (bc[k].inside && hi >= bc[k].radius) hi = bc[k].radius * (1 - 1e-15), r[v] = hi;
                if (hi >= scale * 1e6) break;
            }
            for (int k = 0; k < 200 && hi / lo - 1 > 1e-16; ++k) {
                double mid = std::sqrt(lo * hi);
                r[v] = mid;
                (theta(v) > kTwoPi ? lo : hi) = mid;
            }
            r[v] = std::sqrt(lo * hi);
            change = std::max(change, std::abs(r[v] / r0 - 1));
        }
        out.iterations = it + 1;
        if (change < tol) break;
        if (it + 1 == max_iterations) throw PackerError("circle_pack_oracle: relaxation did not converge");
    }
    // layout from the face on the far side of edge ab
    std::vector<Vec2> c(n);
    std::vector<char> placed(n, 0);
    for (int k = 0; k < 3; ++k) c[root[k]] = bc[k].center, placed[root[k]] = 1;
    auto place = [&](int u, int v, int w) {
        // w to the left of u -> v
        double duv = norm(c[v] - c[u]);
        double a = dist(u, w), bb = dist(v, w);
        if (duv <= 1e-15 * scale) throw PackerError("circle_pack_oracle: coincident centers in layout");
        double ang = std::acos(std::clamp((a * a + duv * duv - bb * bb) / (2 * a * duv), -1.0, 1.0));
        Vec2 e = (c[v] - c[u]) / duv;
        c[w] = c[u] + Vec2{e.x * std::cos(ang) - e.y * std::sin(ang), e.x * std::sin(ang) + e.y * std::cos(ang)} * a;
        placed[w] = 1;
    };
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& f : T.faces()) {
            for (int s = 0; s < 3; ++s) {
                int u = f[s], v = f[(s + 1) % 3], w = f[(s + 2) % 3];
                if (placed[u] && placed[v] && !placed[w]) {
                    place(u, v, w);
                    progress = true;
                }
            }
        }
    }
    for (int v = 0; v < n; ++v)
        if (!placed[v]) throw PackerError("circle_pack_oracle: layout did not reach every vertex");
    out.center = c;
    out.radius = r;
    return out;
}

}  // namespace homothet
