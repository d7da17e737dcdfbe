#include "homothet/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>

namespace homothet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
// virtual radius of a sharp corner, relative to the diameter
constexpr double kCornerWeight = 1e-4;
constexpr int kEllipseTable = 1024;

double wrap01(double f) {
    f = std::fmod(f, 1.0);
    if (f < 0) f += 1.0;
    if (f >= 1.0) f = 0.0;
    return f;
}

double angle_of(Vec2 v) {
    double a = std::atan2(v.y, v.x);
    return a < 0 ? a + kTwoPi : a;
}

Vec2 closest_on_segment(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double L2 = dot(d, d);
    if (L2 == 0) return a;
    double s = std::clamp(dot(p - a, d) / L2, 0.0, 1.0);
    return a + d * s;
}

// Maximize f over the circle of directions, given its derivative g: a coarse scan, then regula falsi on g
// inside the bracket of each of the two best samples.  Falls back to golden
// section when g does not change sign there.
template <class F, class G>
double maximize_angle_smooth(F f, G g, int scan = 16) {
    double v[64];
    for (int k = 0; k < scan; ++k) v[k] = f(kTwoPi * k / scan);
    int p0 = -1, p1 = -1;
    for (int k = 0; k < scan; ++k) {
        if (v[k] < v[(k + scan - 1) % scan] || v[k] < v[(k + 1) % scan]) continue;
        if (p0 < 0 || v[k] > v[p0]) p1 = p0, p0 = k;
        else if (p1 < 0 || v[k] > v[p1]) p1 = k;
    }
    double best_th = 0, best = -kInf;
    for (int k : {p0, p1}) {
        if (k < 0) continue;
        double lo = kTwoPi * (k - 1) / scan, hi = kTwoPi * (k + 1) / scan;
        double glo = g(lo), ghi = g(hi);
        double th;
        if (glo >= 0 && ghi <= 0) {
            int side = 0;
            for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
                double m = glo - ghi > 0 ? lo + (hi - lo) * glo / (glo - ghi) : 0.5 * (lo + hi);
                if (!(m > lo && m < hi)) m = 0.5 * (lo + hi);
                double gm = g(m);
                if (gm == 0) {
                    lo = hi = m;
                    break;
                }
                if (gm > 0) {
                    lo = m, glo = gm;
                    if (side == 1) ghi *= 0.5;
                    side = 1;
                } else {
                    hi = m, ghi = gm;
                    if (side == -1) glo *= 0.5;
                    side = -1;
                }
            }
            th = 0.5 * (lo + hi);
        } else {
            const double gr = (std::sqrt(5.0) - 1) / 2;
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = f(x1), f2 = f(x2);
            for (int it = 0; it < 90 && hi - lo > 1e-15; ++it) {
                if (f1 < f2) {
                    lo = x1, x1 = x2, f1 = f2;
                    x2 = lo + gr * (hi - lo), f2 = f(x2);
                } else {
                    hi = x2, x2 = x1, f2 = f1;
                    x1 = hi - gr * (hi - lo), f1 = f(x1);
                }
            }
            th = 0.5 * (lo + hi);
        }
        double val = f(th);
        if (val > best) best = val, best_th = th;
    }
    return best_th;
}

// Vertices of t + alpha * V.
std::vector<Vec2> placed_vertices(const Body& B) {
    if (B.is_point()) return {B.t};
    std::vector<Vec2> out;
    out.reserve(B.shape->vertices().size());
    for (Vec2 v : B.shape->vertices()) out.push_back(B.t + v * B.alpha);
    return out;
}

double placed_radius(const Body& B) { return B.is_point() ? 0.0 : B.alpha * B.shape->rounding(); }

bool is_rounded(const Body& B) { return B.is_point() || B.shape->kind() == Shape::Kind::Rounded; }

// Minkowski sum of convex polygons (1 and 2 vertices allowed), counterclockwise.
std::vector<Vec2> minkowski_sum(const std::vector<Vec2>& P, const std::vector<Vec2>& Q) {
    auto lowest = [](const std::vector<Vec2>& A) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < A.size(); ++i)
            if (A[i].y < A[k].y || (A[i].y == A[k].y && A[i].x < A[k].x)) k = i;
        return k;
    };
    auto edges = [](const std::vector<Vec2>& A, std::size_t s) {
        std::vector<std::pair<double, Vec2>> e;
        std::size_t m = A.size();
        if (m < 2) return e;
        for (std::size_t i = 0; i < m; ++i) {
            Vec2 d = A[(s + i + 1) % m] - A[(s + i) % m];
            if (d.x == 0 && d.y == 0) continue;
            e.push_back({angle_of(d), d});
        }
        // starting at the lowest vertex the angles increase; keep the first
        // edge at angle 0 when it is horizontal
        return e;
    };
    std::size_t sp = lowest(P), sq = lowest(Q);
    auto ep = edges(P, sp), eq = edges(Q, sq);
    std::vector<Vec2> out;
    out.reserve(ep.size() + eq.size() + 1);
    Vec2 cur = P[sp] + Q[sq];
    out.push_back(cur);
    std::size_t i = 0, j = 0;
    while (i < ep.size() || j < eq.size()) {
        bool take_p = j >= eq.size() || (i < ep.size() && ep[i].first <= eq[j].first);
        cur += take_p ? ep[i++].second : eq[j++].second;
        out.push_back(cur);
    }
    out.pop_back();  // back at the start
    if (out.empty()) out.push_back(P[sp] + Q[sq]);
    return out;
}

struct PolyDist {
    double d;    // signed: negative inside
    Vec2 w;      // minimizer direction of the support function (see below)
};

// Signed distance from the origin to a convex polygon D, and the unit w
// minimizing h_D(w): -q/|q| outside, the nearest edge's outward normal inside.
PolyDist origin_to_polygon(const std::vector<Vec2>& D) {
    std::size_t m = D.size();
    if (m == 1) {
        double n = norm(D[0]);
        return {n, n > 0 ? -(D[0] / n) : Vec2{1, 0}};
    }
    double best = kInf;
    Vec2 bestq;
    std::size_t beste = 0;
    bool inside = m >= 3;
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 a = D[i], b = D[(i + 1) % m];
        if (m == 2 && i == 1) break;
        Vec2 q = closest_on_segment({0, 0}, a, b);
        double dq = norm(q);
        if (dq < best) best = dq, bestq = q, beste = i;
        if (m >= 3 && cross(b - a, -a) < 0) inside = false;
    }
    if (!inside) {
        if (best > 0) return {best, -(bestq / best)};
        Vec2 e = D[(beste + 1) % m] - D[beste];
        return {0.0, unit(Vec2{e.y, -e.x})};
    }
    // inside: nearest edge line
    double dmin = kInf;
    Vec2 nmin;
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 a = D[i], b = D[(i + 1) % m];
        Vec2 e = b - a;
        double L = norm(e);
        if (L == 0) continue;
        Vec2 nrm{e.y / L, -e.x / L};  // outward for counterclockwise
        double d = dot(a, nrm);  // distance from the origin to the line, >= 0
        if (d < dmin) dmin = d, nmin = nrm;
    }
    return {-dmin, nmin};
}

// Support face of a placed polygon in direction u: endpoints (equal if a vertex).
std::pair<Vec2, Vec2> support_face(const std::vector<Vec2>& V, Vec2 u, double tol) {
    std::size_t m = V.size();
    std::size_t k = 0;
    double best = -kInf;
    for (std::size_t i = 0; i < m; ++i) {
        double h = dot(V[i], u);
        if (h > best) best = h, k = i;
    }
    if (m >= 2) {
        std::size_t nx = (k + 1) % m, pv = (k + m - 1) % m;
        if (best - dot(V[nx], u) <= tol) return {V[k], V[nx]};
        if (best - dot(V[pv], u) <= tol) return {V[pv], V[k]};
    }
    return {V[k], V[k]};
}

// Witness points of two rounded bodies separated along u (from A to B).
void rounded_witnesses(const Body& A, const Body& B, const std::vector<Vec2>& VA, const std::vector<Vec2>& VB,
                       Gap& g) {
    double scale = 1e-12 * (1.0 + A.diameter() + B.diameter() + norm(A.t) + norm(B.t));
    auto fa = support_face(VA, g.u, scale);
    auto fb = support_face(VB, -g.u, scale);
    Vec2 tau = perp(g.u);
    double a0 = dot(fa.first, tau), a1 = dot(fa.second, tau);
    double b0 = dot(fb.first, tau), b1 = dot(fb.second, tau);
    if (a0 > a1) std::swap(a0, a1), std::swap(fa.first, fa.second);
    if (b0 > b1) std::swap(b0, b1), std::swap(fb.first, fb.second);
    double lo = std::max(a0, b0), hi = std::min(a1, b1);
    double mid = 0.5 * (lo + hi);
    auto at = [&](std::pair<Vec2, Vec2> f, double s0, double s1) {
        if (s1 - s0 <= 0) return f.first;
        double w = std::clamp((mid - s0) / (s1 - s0), 0.0, 1.0);
        return f.first + (f.second - f.first) * w;
    };
    g.pa = at(fa, a0, a1) + g.u * placed_radius(A);
    g.pb = at(fb, b0, b1) - g.u * placed_radius(B);
}

// Capsule fast path: both polygons have at most two vertices.
bool capsule_distance(const std::vector<Vec2>& VA, const std::vector<Vec2>& VB, double rA, double rB, Gap& g) {
    Vec2 a0 = VA[0], a1 = VA.back(), b0 = VB[0], b1 = VB.back();
    std::array<std::pair<Vec2, Vec2>, 4> cand = {
        std::pair{closest_on_segment(b0, a0, a1), b0}, std::pair{closest_on_segment(b1, a0, a1), b1},
        std::pair{a0, closest_on_segment(a0, b0, b1)}, std::pair{a1, closest_on_segment(a1, b0, b1)}};
    double best = kInf;
    std::pair<Vec2, Vec2> bp;
    for (auto& c : cand) {
        double d = norm(c.second - c.first);
        if (d < best) best = d, bp = c;
    }
    bool both_segments = VA.size() == 2 && VB.size() == 2;
    if (both_segments) {
        // proper crossing of two segments: not a capsule-distance situation
        double s1 = cross(a1 - a0, b0 - a0), s2 = cross(a1 - a0, b1 - a0);
        double s3 = cross(b1 - b0, a0 - b0), s4 = cross(b1 - b0, a1 - b0);
        if (((s1 > 0 && s2 < 0) || (s1 < 0 && s2 > 0)) && ((s3 > 0 && s4 < 0) || (s3 < 0 && s4 > 0))) return false;
    }
    if (best <= 0) return false;
    g.u = (bp.second - bp.first) / best;
    g.value = best - rA - rB;
    g.pa = bp.first + g.u * rA;
    g.pb = bp.second - g.u * rB;
    return true;
}

}  // namespace

// ---------------------------------------------------------------- Shape

Shape Shape::disk(double radius) {
    if (!(radius > 0)) throw GeometryError("disk radius must be positive");
    Shape s;
    s.verts_ = {{0, 0}};
    s.rho_ = radius;
    s.name_ = "disk";
    s.build();
    return s;
}

Shape Shape::polygon(std::vector<Vec2> v, double rounding) {
    if (v.empty()) throw GeometryError("polygon: no vertices");
    if (rounding < 0) throw GeometryError("polygon: negative rounding");
    if (v.size() >= 3) {
        double diam = 0;
        for (auto& p : v)
            for (auto& q : v) diam = std::max(diam, norm(p - q));
        double tol = 1e-12 * diam * diam;
        std::size_t m = v.size();
        for (std::size_t i = 0; i < m; ++i) {
            double c = cross(v[(i + 1) % m] - v[i], v[(i + 2) % m] - v[(i + 1) % m]);
            if (c <= tol) throw GeometryError("polygon: vertices are not strictly convex and counterclockwise");
        }
        // convex position: total turning exactly one revolution
        double turn = 0;
        for (std::size_t i = 0; i < m; ++i) {
            Vec2 e0 = v[(i + 1) % m] - v[i], e1 = v[(i + 2) % m] - v[(i + 1) % m];
            turn += std::atan2(cross(e0, e1), dot(e0, e1));
        }
        if (std::abs(turn - kTwoPi) > 1e-6) throw GeometryError("polygon: vertices wind more than once");
    }
    if (v.size() == 2 && v[0] == v[1]) v.pop_back();
    if (v.size() == 1 && rounding == 0) throw GeometryError("polygon: a bare point is not a prototype");
    Shape s;
    s.verts_ = std::move(v);
    s.rho_ = rounding;
    s.name_ = s.verts_.size() == 2 ? "segment" : "polygon";
    s.build();
    return s;
}

Shape Shape::segment(Vec2 p, Vec2 q, double rounding) {
    if (p == q) throw GeometryError("segment: endpoints coincide");
    return polygon({p, q}, rounding);
}

Shape Shape::ellipse(double semi_a, double semi_b, double angle) {
    if (!(semi_a > 0 && semi_b > 0)) throw GeometryError("ellipse: semi-axes must be positive");
    Mat2 R = Mat2::rotation(angle);
    Mat2 S{semi_a, 0, 0, semi_b};
    return ellipse(R * S);
}

Shape Shape::ellipse(const Mat2& L) {
    if (!(L.det() > 0)) throw GeometryError("ellipse: matrix must have positive determinant");
    Shape s;
    s.kind_ = Kind::Ellipse;
    s.L_ = L;
    s.name_ = "ellipse";
    s.build();
    return s;
}

void Shape::build() {
    pieces_.clear();
    if (kind_ == Kind::Ellipse) {
        // singular values of L
        double p = L_.a * L_.a + L_.b * L_.b + L_.c * L_.c + L_.d * L_.d;
        double q = L_.det();
        double smax = std::sqrt(0.5 * (p + std::sqrt(std::max(0.0, p * p - 4 * q * q))));
        diam_ = 2 * smax;
        ell_s_.assign(kEllipseTable + 1, 0.0);
        Vec2 prev = L_ * Vec2{1, 0};
        for (int k = 1; k <= kEllipseTable; ++k) {
            Vec2 cur = L_ * polar(kTwoPi * k / kEllipseTable);
            ell_s_[k] = ell_s_[k - 1] + norm(cur - prev);
            prev = cur;
        }
        total_ = ell_s_.back();
        return;
    }
    std::size_t m = verts_.size();
    double d = 0;
    for (auto& p : verts_)
        for (auto& q : verts_) d = std::max(d, norm(p - q));
    diam_ = d + 2 * rho_;
    double rc = rho_ > 0 ? rho_ : kCornerWeight * diam_;
    if (m == 1) {
        pieces_.push_back({1, 0.0, kTwoPi * rc, verts_[0], {}, 0.0, kTwoPi, rho_});
        total_ = kTwoPi * rc;
        return;
    }
    std::vector<Vec2> nrm(m);
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 e = unit(verts_[(i + 1) % m] - verts_[i]);
        nrm[i] = {e.y, -e.x};
    }
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 a = verts_[i] + nrm[i] * rho_, b = verts_[(i + 1) % m] + nrm[i] * rho_;
        double L = norm(b - a);
        pieces_.push_back({0, s, L, a, b, 0, 0, 0});
        s += L;
        std::size_t j = (i + 1) % m;
        double th0 = angle_of(nrm[i]);
        double dth = std::atan2(cross(nrm[i], nrm[j]), dot(nrm[i], nrm[j]));
        if (dth <= 0) dth += kTwoPi;  // a segment end turns by pi
        if (m == 2) dth = kPi;
        pieces_.push_back({1, s, dth * rc, verts_[j], {}, th0, dth, rho_});
        s += dth * rc;
    }
    total_ = s;
}

double Shape::support(Vec2 u) const {
    if (kind_ == Kind::Ellipse) return norm(L_.transpose() * u);
    double best = -kInf;
    for (Vec2 v : verts_) best = std::max(best, dot(v, u));
    return best + rho_ * norm(u);
}

Vec2 Shape::support_point(Vec2 u) const {
    if (kind_ == Kind::Ellipse) {
        Vec2 w = L_.transpose() * u;
        double n = norm(w);
        return L_ * (n > 0 ? w / n : Vec2{1, 0});
    }
    auto f = support_face(verts_, u, 1e-12 * (1.0 + diam_));
    return (f.first + f.second) * 0.5 + unit(u) * rho_;
}

double Shape::area() const {
    if (kind_ == Kind::Ellipse) return kPi * L_.det();
    double A = 0, P = 0;
    std::size_t m = verts_.size();
    for (std::size_t i = 0; i < m; ++i) {
        A += 0.5 * cross(verts_[i], verts_[(i + 1) % m]);
        if (m >= 2 && !(m == 2 && i == 1)) P += norm(verts_[(i + 1) % m] - verts_[i]);
    }
    if (m == 2) P *= 2;
    return A + P * rho_ + kPi * rho_ * rho_;
}

double Shape::perimeter() const {
    if (kind_ == Kind::Ellipse) return total_;
    double P = 0;
    for (auto& pc : pieces_) P += pc.kind == 0 ? pc.len : pc.dth * pc.radius;
    return P;
}

Vec2 Shape::point_at(double s) const {
    if (kind_ == Kind::Ellipse) {
        s = wrap01(s / total_) * total_;
        auto it = std::upper_bound(ell_s_.begin(), ell_s_.end(), s);
        int k = std::clamp(static_cast<int>(it - ell_s_.begin()) - 1, 0, kEllipseTable - 1);
        double w = (s - ell_s_[k]) / (ell_s_[k + 1] - ell_s_[k]);
        return L_ * polar(kTwoPi * (k + w) / kEllipseTable);
    }
    s = wrap01(s / total_) * total_;
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), s, [](double v, const Piece& p) { return v < p.s0; });
    const Piece& pc = *(it == pieces_.begin() ? it : it - 1);
    double w = pc.len > 0 ? (s - pc.s0) / pc.len : 0.0;
    if (pc.kind == 0) return pc.p + (pc.q - pc.p) * w;
    return pc.p + polar(pc.th0 + pc.dth * w) * pc.radius;
}

Vec2 Shape::normal_at(double s) const {
    if (kind_ == Kind::Ellipse) {
        s = wrap01(s / total_) * total_;
        auto it = std::upper_bound(ell_s_.begin(), ell_s_.end(), s);
        int k = std::clamp(static_cast<int>(it - ell_s_.begin()) - 1, 0, kEllipseTable - 1);
        double w = (s - ell_s_[k]) / (ell_s_[k + 1] - ell_s_[k]);
        return unit(L_.inverse().transpose() * polar(kTwoPi * (k + w) / kEllipseTable));
    }
    s = wrap01(s / total_) * total_;
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), s, [](double v, const Piece& p) { return v < p.s0; });
    const Piece& pc = *(it == pieces_.begin() ? it : it - 1);
    if (pc.kind == 0) {
        Vec2 e = unit(pc.q - pc.p);
        return {e.y, -e.x};
    }
    double w = pc.len > 0 ? (s - pc.s0) / pc.len : 0.0;
    return polar(pc.th0 + pc.dth * w);
}

double Shape::param_of(Vec2 q) const {
    if (kind_ == Kind::Ellipse) {
        Vec2 z = L_.inverse() * q;
        double phi = angle_of(z);
        double k = phi / kTwoPi * kEllipseTable;
        int i = std::clamp(static_cast<int>(k), 0, kEllipseTable - 1);
        double w = k - i;
        return ell_s_[i] + w * (ell_s_[i + 1] - ell_s_[i]);
    }
    double best = kInf, best_s = 0;
    double tie = 1e-12 * (1.0 + diam_);
    for (const auto& pc : pieces_) {
        double d, s;
        if (pc.kind == 0) {
            Vec2 c = closest_on_segment(q, pc.p, pc.q);
            d = norm(q - c);
            s = pc.s0 + (pc.len > 0 ? norm(c - pc.p) : 0.0);
        } else if (pc.radius == 0) {
            d = norm(q - pc.p);
            s = pc.s0 + 0.5 * pc.len;
            d -= tie;  // prefer the corner over its adjacent edge endpoints
        } else {
            Vec2 r = q - pc.p;
            double a = angle_of(r) - pc.th0;
            a = std::fmod(a + 2 * kTwoPi, kTwoPi);
            if (a > pc.dth) a = (a - pc.dth < kTwoPi - a) ? pc.dth : 0.0;
            Vec2 c = pc.p + polar(pc.th0 + a) * pc.radius;
            d = norm(q - c);
            s = pc.s0 + pc.len * (pc.dth > 0 ? a / pc.dth : 0.0);
        }
        if (d < best) best = d, best_s = s;
    }
    return best_s;
}

std::vector<Vec2> Shape::outline(int n) const {
    std::vector<Vec2> out;
    if (kind_ == Kind::Ellipse) {
        for (int k = 0; k < n; ++k) out.push_back(L_ * polar(kTwoPi * k / n));
        return out;
    }
    double arc_total = 0;
    for (auto& pc : pieces_)
        if (pc.kind == 1 && pc.radius > 0) arc_total += pc.dth;
    for (const auto& pc : pieces_) {
        if (pc.kind == 0) {
            out.push_back(pc.p);
        } else if (pc.radius == 0) {
            if (out.empty() || !(out.back() == pc.p)) out.push_back(pc.p);
        } else {
            int k = std::max(1, static_cast<int>(std::ceil(n * pc.dth / std::max(arc_total, 1e-300))));
            for (int i = 0; i <= k; ++i) out.push_back(pc.p + polar(pc.th0 + pc.dth * i / k) * pc.radius);
        }
    }
    return out;
}

// ---------------------------------------------------------------- Body

Vec2 Body::point_at(double f) const {
    if (is_point()) return t;
    return t + shape->point_at(f * shape->param_length()) * alpha;
}

Vec2 Body::normal_at(double f) const {
    if (is_point()) return {1, 0};
    return shape->normal_at(f * shape->param_length());
}

double Body::fraction_of(Vec2 q) const {
    if (is_point()) return 0.0;
    return wrap01(shape->param_of((q - t) / alpha) / shape->param_length());
}

std::vector<Vec2> Body::outline(int n) const {
    if (is_point()) return {t};
    auto v = shape->outline(n);
    for (auto& p : v) p = t + p * alpha;
    return v;
}

Vec2 Body::center() const {
    if (is_point()) return t;
    if (shape->kind() == Shape::Kind::Ellipse) return t;
    Vec2 c;
    for (Vec2 v : shape->vertices()) c += v;
    return t + c / static_cast<double>(shape->vertices().size()) * alpha;
}

Body point_body(Vec2 p) { return Body{nullptr, p, 0.0}; }

Body segment_body(Vec2 p, Vec2 q) {
    if (p == q) return point_body(p);
    return Body{make_shape(Shape::segment({0, 0}, q - p)), p, 1.0};
}

Body apply_homothety(const Body& B, double s, Vec2 w) {
    if (!(s > 0)) throw GeometryError("homothety coefficient must be positive");
    return Body{B.shape, B.t * s + w, B.alpha * s};
}

// ---------------------------------------------------------------- distances

Gap signed_distance(const Body& A, const Body& B) {
    Gap g;
    if (is_rounded(A) && is_rounded(B)) {
        auto VA = placed_vertices(A), VB = placed_vertices(B);
        double rA = placed_radius(A), rB = placed_radius(B);
        if (VA.size() <= 2 && VB.size() <= 2 && capsule_distance(VA, VB, rA, rB, g)) return g;
        std::vector<Vec2> negA(VA.size());
        for (std::size_t i = 0; i < VA.size(); ++i) negA[i] = -VA[i];
        auto D = minkowski_sum(VB, negA);
        auto pd = origin_to_polygon(D);
        g.value = pd.d - rA - rB;
        g.u = -pd.w;
        rounded_witnesses(A, B, VA, VB, g);
        return g;
    }
    auto f = [&](double th) {
        Vec2 u = polar(th);
        return -A.support(u) - B.support(-u);
    };
    auto df = [&](double th) {
        Vec2 u = polar(th);
        return dot(B.support_point(-u) - A.support_point(u), perp(u));
    };
    double th = maximize_angle_smooth(f, df);
    g.u = polar(th);
    g.value = f(th);
    g.pa = A.support_point(g.u);
    g.pb = B.support_point(-g.u);
    return g;
}

Gap signed_distance(const Body& A, const ExteriorCircle& E) {
    Gap g;
    if (is_rounded(A)) {
        auto VA = placed_vertices(A);
        double best = -kInf;
        Vec2 far;
        for (Vec2 v : VA) {
            double d = norm(v - E.o);
            if (d > best) best = d, far = v;
        }
        g.u = best > 0 ? (far - E.o) / best : Vec2{1, 0};
        double r = placed_radius(A);
        g.value = E.R - best - r;
        g.pa = far + g.u * r;
        g.pb = E.o + g.u * E.R;
        return g;
    }
    auto f = [&](double th) {
        Vec2 u = polar(th);
        return A.support(u) - dot(E.o, u);
    };
    auto df = [&](double th) {
        Vec2 u = polar(th);
        return dot(A.support_point(u) - E.o, perp(u));
    };
    double th = maximize_angle_smooth(f, df);
    g.u = polar(th);
    g.value = E.R - f(th);
    g.pa = A.support_point(g.u);
    g.pb = E.o + g.u * E.R;
    return g;
}

Gap obstacle_gap(const Body& K, const Obstacle& o) {
    return o.kind == Obstacle::Kind::Body ? signed_distance(K, o.body) : signed_distance(K, o.ext);
}

// ---------------------------------------------------------------- families

TangentFamily tangent_family(ShapePtr prototype, Vec2 p, Vec2 n) {
    if (!prototype) throw GeometryError("tangent_family: no prototype");
    n = unit(n);
    if (prototype->is_degenerate() && prototype->vertices().size() == 2) {
        Vec2 e = prototype->vertices()[1] - prototype->vertices()[0];
        if (std::abs(dot(unit(e), n)) < 1e-12)
            throw GeometryError("tangent_family: segment prototype parallel to the support line");
    }
    TangentFamily F;
    F.shape = std::move(prototype);
    F.p = p;
    F.n = n;
    F.s_star = F.shape->support_point(-n);
    return F;
}

namespace {

// Closed forms for a disk family: center p + R n, radius R.
double disk_family_contact(const TangentFamily& F, const Obstacle& o) {
    double rho = F.shape->rounding();
    if (o.kind == Obstacle::Kind::Exterior) {
        Vec2 d = F.p - o.ext.o;
        double den = 2 * (dot(F.n, d) + o.ext.R);
        if (den <= 0) return kInf;
        double R = (o.ext.R * o.ext.R - dot(d, d)) / den;
        return R > 0 ? R / rho : 0.0;
    }
    const Body& B = o.body;
    if (!B.is_point() && !(B.shape->is_disk())) return -1;  // no closed form
    Vec2 c = B.is_point() ? B.t : B.t + B.shape->vertices()[0] * B.alpha;
    double r = placed_radius(B);
    Vec2 d = F.p - c;
    double den = 2 * (dot(F.n, d) - r);
    if (den >= 0) return kInf;
    double R = (r * r - dot(d, d)) / den;
    return R > 0 ? R / rho : 0.0;
}

}  // namespace

ScaleResult max_scale(const TangentFamily& fam, const std::vector<Obstacle>& obstacles, double alpha_max,
                      double eps) {
    ScaleResult res;
    std::size_t n = obstacles.size();
    Body pt = point_body(fam.p);
    std::vector<double> g0(n);
    for (std::size_t k = 0; k < n; ++k) {
        g0[k] = obstacle_gap(pt, obstacles[k]).value;
        if (g0[k] <= eps) {
            res.status = ScaleResult::Status::Degenerate;
            res.alpha = 0;
            res.hit = static_cast<int>(k);
            return res;
        }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return g0[x] < g0[y]; });
    const bool disk = fam.shape->is_disk();
    const double diam = fam.shape->diameter();
    double best = alpha_max;
    int hit = -1;
    for (std::size_t k : order) {
        if (g0[k] > best * diam) continue;  // body(best) lies within best*diam of p
        if (disk) {
            double a = disk_family_contact(fam, obstacles[k]);
            if (a >= 0) {
                if (a < best) best = a, hit = static_cast<int>(k);
                continue;
            }
        }
        auto gap = [&](double a) { return obstacle_gap(fam.at(a), obstacles[k]).value; };
        double ghi = gap(best);
        if (ghi >= 0) continue;
        double lo = g0[k] / std::max(diam, 1e-300), hi = best;
        lo = std::min(lo, 0.5 * hi);
        double glo = gap(lo);
        if (glo < 0) lo = 0, glo = g0[k];
        // Illinois regula falsi with bisection safeguard
        int side = 0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            double m = (glo * hi - ghi * lo) / (glo - ghi);
            if (!(m > lo && m < hi) || it % 4 == 3) m = 0.5 * (lo + hi);
            double gm = gap(m);
            if (gm >= 0) {
                lo = m, glo = gm;
                if (side == -1) ghi *= 0.5;
                side = -1;
            } else {
                hi = m, ghi = gm;
                if (side == 1) glo *= 0.5;
                side = 1;
            }
        }
        best = lo;
        hit = static_cast<int>(k);
    }
    res.alpha = best;
    res.hit = hit;
    res.status = hit < 0 ? ScaleResult::Status::NoContact : ScaleResult::Status::Contact;
    return res;
}

Vec2 boundary_point(const Body& B, Vec2 base, double t, double tol) {
    if (B.is_point()) return B.t;
    double f0 = B.fraction_of(base);
    if (norm(B.point_at(f0) - base) > tol * std::max(1.0, B.diameter()))
        throw GeometryError("boundary_point: base is not on the boundary");
    if (t == 0.0 || t == 1.0) return base;
    return B.point_at(wrap01(f0 + t));
}

// ---------------------------------------------------------------- arcs

bool FracArc::contains(double f, double slack) const {
    double d = wrap01(f - f0);
    return d <= len + slack || d >= 1.0 - slack;
}

Curve Curve::from(std::vector<Vec2> pts) {
    if (pts.empty()) throw GeometryError("curve: no points");
    Curve c;
    c.pts.push_back(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (!(pts[i] == c.pts.back())) c.pts.push_back(pts[i]);
    c.cum.assign(c.pts.size(), 0.0);
    for (std::size_t i = 1; i < c.pts.size(); ++i) c.cum[i] = c.cum[i - 1] + norm(c.pts[i] - c.pts[i - 1]);
    if (c.pts.size() == 1) c.segs.push_back(point_body(c.pts[0]));
    for (std::size_t i = 0; i + 1 < c.pts.size(); ++i) c.segs.push_back(segment_body(c.pts[i], c.pts[i + 1]));
    return c;
}

Vec2 Curve::point_at(double f) const {
    if (pts.size() == 1) return pts[0];
    double s = std::clamp(f, 0.0, 1.0) * length();
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t i = std::clamp<std::size_t>(it - cum.begin(), 1, pts.size() - 1) - 1;
    double L = cum[i + 1] - cum[i];
    double w = L > 0 ? (s - cum[i]) / L : 0.0;
    return pts[i] + (pts[i + 1] - pts[i]) * w;
}

Vec2 Curve::tangent_at(double f) const {
    if (pts.size() == 1) return {1, 0};
    double s = std::clamp(f, 0.0, 1.0) * length();
    std::size_t m = pts.size();
    for (std::size_t i = 1; i + 1 < m; ++i)
        if (std::abs(s - cum[i]) <= 1e-12 * (1.0 + length()))
            return unit(unit(pts[i] - pts[i - 1]) + unit(pts[i + 1] - pts[i]));
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    std::size_t i = std::clamp<std::size_t>(it - cum.begin(), 1, m - 1) - 1;
    return unit(pts[i + 1] - pts[i]);
}

double Curve::fraction_of(Vec2 q) const {
    if (pts.size() == 1 || length() == 0) return 0.0;
    double best = kInf, bs = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        Vec2 c = closest_on_segment(q, pts[i], pts[i + 1]);
        double d = norm(q - c);
        if (d < best) best = d, bs = cum[i] + norm(c - pts[i]);
    }
    return bs / length();
}

Curve Curve::sub(double f0, double f1) const {
    f0 = std::clamp(f0, 0.0, 1.0), f1 = std::clamp(f1, 0.0, 1.0);
    if (f1 < f0) std::swap(f0, f1);
    std::vector<Vec2> out{point_at(f0)};
    double s0 = f0 * length(), s1 = f1 * length();
    for (std::size_t i = 1; i + 1 < pts.size(); ++i)
        if (cum[i] > s0 && cum[i] < s1) out.push_back(pts[i]);
    out.push_back(point_at(f1));
    return Curve::from(out);
}

Gap Curve::gap(const Body& K) const {
    Gap best;
    best.value = kInf;
    Vec2 c = K.center();
    double reach = K.diameter();
    // segments by a lower bound on their gap, nearest first
    std::vector<std::pair<double, int>> order;
    order.reserve(segs.size());
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const Body& s = segs[k];
        Vec2 a = s.t, b = s.is_point() ? s.t : s.t + s.shape->vertices()[1] * s.alpha;
        order.push_back({norm(closest_on_segment(c, a, b) - c) - reach, static_cast<int>(k)});
    }
    std::sort(order.begin(), order.end());
    for (auto [lb, k] : order) {
        if (lb > best.value) break;
        Gap g = signed_distance(K, segs[k]);
        if (g.value < best.value) best = g;
    }
    return best;
}

Host Host::of(Body b) {
    Host h;
    h.kind = Kind::Body;
    h.body = std::move(b);
    return h;
}
Host Host::of(Curve c) {
    Host h;
    h.kind = Kind::Curve;
    h.curve = std::move(c);
    return h;
}
Host Host::of(ExteriorCircle e) {
    Host h;
    h.kind = Kind::Exterior;
    h.ext = e;
    return h;
}

Gap Host::gap(const Body& K) const {
    switch (kind) {
        case Kind::Body: return signed_distance(K, body);
        case Kind::Curve: return curve.gap(K);
        default: return signed_distance(K, ext);
    }
}

Vec2 Host::point_at(double f) const {
    switch (kind) {
        case Kind::Body: return body.point_at(wrap01(f));
        case Kind::Curve: return curve.point_at(f);
        default: return ext.o + polar(-kTwoPi * f) * ext.R;
    }
}

double Host::fraction_of(Vec2 q) const {
    switch (kind) {
        case Kind::Body: return body.fraction_of(q);
        case Kind::Curve: return curve.fraction_of(q);
        default: return wrap01(-angle_of(q - ext.o) / kTwoPi);
    }
}

Vec2 Host::outward_normal(double f) const {
    switch (kind) {
        case Kind::Body: return body.normal_at(wrap01(f));
        case Kind::Curve: {
            Vec2 t = curve.tangent_at(f);
            return {t.y, -t.x};
        }
        default: return -polar(-kTwoPi * f);
    }
}

std::vector<Obstacle> Host::obstacles(int tag) const {
    switch (kind) {
        case Kind::Body: return {Obstacle::of(body, tag)};
        case Kind::Curve: {
            std::vector<Obstacle> out;
            for (const Body& s : curve.segs) out.push_back(Obstacle::of(s, tag));
            return out;
        }
        default: return {Obstacle::outside(ext, tag)};
    }
}

namespace {

double arc_distance(const Host& h, FracArc arc, Vec2 start, Vec2 end, const Body& K) {
    if (h.kind == Host::Kind::Curve) {
        double a = arc.f0, b = arc.f0 + arc.len;
        double best;
        if (a >= 1.0) a -= 1.0, b -= 1.0;
        if (b <= 1.0) {
            best = h.curve.sub(a, b).gap(K).value;
        } else {
            best = std::min(h.curve.sub(a, 1.0).gap(K).value, h.curve.sub(0.0, b - 1.0).gap(K).value);
        }
        return best;
    }
    Gap g = h.gap(K);
    if (arc.len >= 1.0 || arc.contains(h.fraction_of(g.pb), 1e-12)) return g.value;
    return std::min(signed_distance(K, point_body(start)).value, signed_distance(K, point_body(end)).value);
}

}  // namespace

double BoundaryArc::length() const {
    switch (kind) {
        case Kind::Point: return 0.0;
        case Kind::Whole:
            if (host->kind == Host::Kind::Body) return host->body.perimeter();
            if (host->kind == Host::Kind::Curve) return host->curve.length();
            return kTwoPi * host->ext.R;
        default: {
            auto s = samples(512);
            double L = 0;
            for (std::size_t i = 1; i < s.size(); ++i) L += norm(s[i] - s[i - 1]);
            return L;
        }
    }
}

std::vector<Vec2> BoundaryArc::samples(int n) const {
    if (kind == Kind::Point) return {start};
    double f0 = kind == Kind::Whole ? 0.0 : arc.f0;
    double len = kind == Kind::Whole ? 1.0 : arc.len;
    std::vector<Vec2> out;
    for (int k = 0; k <= n; ++k) {
        double f = f0 + len * k / n;
        if (host->kind == Host::Kind::Curve) {
            if (f > 1.0) f -= 1.0;
            out.push_back(host->curve.point_at(f));
        } else {
            out.push_back(host->point_at(wrap01(f)));
        }
    }
    return out;
}

double BoundaryArc::distance(const Body& K) const {
    switch (kind) {
        case Kind::Point: return signed_distance(K, point_body(start)).value;
        case Kind::Whole: return host->gap(K).value;
        default: return arc_distance(*host, arc, start, end, K);
    }
}

double BoundaryArc::complement_distance(const Body& K) const {
    if (kind != Kind::Arc || arc.len >= 1.0) return kInf;
    FracArc c{arc.f0 + arc.len, 1.0 - arc.len};
    if (host->kind != Host::Kind::Curve) c.f0 = wrap01(c.f0);
    return arc_distance(*host, c, end, start, K);
}

std::vector<BoundaryArc> chain_side_arc(const std::vector<ChainLink>& path, Side side, bool from_root) {
    if (path.size() < 2) throw GeometryError("chain_side_arc: need at least two links");
    std::vector<BoundaryArc> out;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const ChainLink& prev = path[k - 1];
        const ChainLink& cur = path[k];
        if (!prev.host) throw GeometryError("chain_side_arc: missing host");
        BoundaryArc A;
        A.host = prev.host;
        if (prev.host->is_point()) {
            A.kind = BoundaryArc::Kind::Point;
            A.start = A.end = prev.host->body.t;
        } else if (k == 1 && from_root) {
            A.kind = BoundaryArc::Kind::Whole;
            A.start = A.end = prev.host->point_at(0.0);
        } else {
            A.kind = BoundaryArc::Kind::Arc;
            double x = std::clamp(cur.x, 0.0, 1.0);
            if (side == Side::Left)
                A.arc = {prev.f_base + x, 1.0 - x};
            else
                A.arc = {prev.f_base, x};
            if (prev.host->kind != Host::Kind::Curve) A.arc.f0 = wrap01(A.arc.f0);
            auto at = [&](double f) {
                if (prev.host->kind == Host::Kind::Curve) return prev.host->curve.point_at(f > 1.0 ? f - 1.0 : f);
                return prev.host->point_at(wrap01(f));
            };
            A.start = at(A.arc.f0);
            A.end = at(A.arc.f0 + A.arc.len);
        }
        out.push_back(A);
    }
    return out;
}

// ---------------------------------------------------------------- hulls

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

std::pair<Vec2, double> enclosing_circle(const std::vector<Vec2>& pts) {
    if (pts.empty()) throw GeometryError("enclosing_circle: no points");
    auto inside = [](Vec2 c, double r, Vec2 p) { return norm(p - c) <= r * (1 + 1e-12) + 1e-15; };
    auto circum = [](Vec2 a, Vec2 b, Vec2 c) -> std::pair<Vec2, double> {
        Vec2 B = b - a, C = c - a;
        double D = 2 * cross(B, C);
        if (std::abs(D) < 1e-300) {
            // collinear: diameter of the farthest pair
            std::array<Vec2, 3> q{a, b, c};
            double best = -1;
            std::pair<Vec2, double> out;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    if (norm(q[i] - q[j]) > best) best = norm(q[i] - q[j]), out = {(q[i] + q[j]) * 0.5, best / 2};
            return out;
        }
        Vec2 o{(C.y * dot(B, B) - B.y * dot(C, C)) / D, (B.x * dot(C, C) - C.x * dot(B, B)) / D};
        return {a + o, norm(o)};
    };
    Vec2 c = pts[0];
    double r = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (inside(c, r, pts[i])) continue;
        c = pts[i], r = 0;
        for (std::size_t j = 0; j < i; ++j) {
            if (inside(c, r, pts[j])) continue;
            c = (pts[i] + pts[j]) * 0.5, r = norm(pts[i] - pts[j]) / 2;
            for (std::size_t k = 0; k < j; ++k) {
                if (inside(c, r, pts[k])) continue;
                std::tie(c, r) = circum(pts[i], pts[j], pts[k]);
            }
        }
    }
    return {c, r};
}

Shape strictify(const Shape& body, double r, int n) {
    if (n < 16) throw GeometryError("strictify: need at least 16 samples");
    if (body.kind() == Shape::Kind::Ellipse) return body;
    double rho = body.rounding();
    double rr = r - rho;
    const auto& V = body.vertices();
    auto [cc, R] = enclosing_circle(V);
    if (!(rr > 0) || R > rr * (1 + 1e-12)) throw GeometryError("strictify: radius smaller than the circumradius");
    if (V.size() == 1) return body;
    // extreme vertices of the radius-rr ball hull (Graham-like scan)
    auto arc_center = [&](Vec2 u, Vec2 w) {
        Vec2 d = w - u;
        double h = std::sqrt(std::max(0.0, rr * rr - dot(d, d) / 4));
        return (u + w) * 0.5 + perp(unit(d)) * h;
    };
    std::vector<Vec2> E;
    if (V.size() == 2) {
        E = V;
    } else {
        std::size_t m = V.size();
        std::vector<Vec2> st;
        for (std::size_t i = 0; i < 2 * m; ++i) {
            Vec2 w = V[i % m];
            while (st.size() >= 2) {
                Vec2 u = st[st.size() - 2], v = st.back();
                if (norm(v - arc_center(u, w)) <= rr * (1 + 1e-12))
                    st.pop_back();
                else
                    break;
            }
            if (i >= m && !st.empty() && st.front() == w) break;
            st.push_back(w);
        }
        // the closing pass may leave the first vertex duplicated at the end
        if (st.size() > 1 && st.front() == st.back()) st.pop_back();
        // keep one lap
        std::vector<Vec2> lap;
        for (Vec2 p : st)
            if (std::find(lap.begin(), lap.end(), p) == lap.end()) lap.push_back(p);
        E = lap;
    }
    std::size_t k = E.size();
    std::vector<double> ang(k);
    double total = 0;
    for (std::size_t i = 0; i < k; ++i) {
        double c = norm(E[(i + 1) % k] - E[i]);
        ang[i] = 2 * std::asin(std::min(1.0, c / (2 * rr)));
        total += ang[i];
    }
    std::vector<Vec2> pts(V.begin(), V.end());
    int budget = std::max(0, n - static_cast<int>(k));
    for (std::size_t i = 0; i < k; ++i) {
        Vec2 u = E[i], w = E[(i + 1) % k];
        Vec2 c = arc_center(u, w);
        int cnt = total > 0 ? static_cast<int>(std::round(budget * ang[i] / total)) : 0;
        double a0 = angle_of(u - c);
        double sweep = std::atan2(cross(u - c, w - c), dot(u - c, w - c));
        for (int j = 1; j <= cnt; ++j) pts.push_back(c + polar(a0 + sweep * j / (cnt + 1)) * rr);
    }
    auto hull = convex_hull(pts);
    // drop nearly collinear vertices so the polygon validates
    Shape out = [&] {
        for (int attempt = 0; attempt < 4; ++attempt) {
            try {
                return Shape::polygon(hull, rho);
            } catch (const GeometryError&) {
                double diam = body.diameter();
                std::vector<Vec2> h2;
                std::size_t m = hull.size();
                for (std::size_t i = 0; i < m; ++i) {
                    Vec2 a = hull[(i + m - 1) % m], b = hull[i], c = hull[(i + 1) % m];
                    if (cross(b - a, c - b) > 1e-11 * diam * diam) h2.push_back(b);
                }
                hull = h2;
            }
        }
        return Shape::polygon(hull, rho);
    }();
    out.set_name(body.name() + "-strict");
    return out;
}

}  // namespace homothet
