#include "homothet/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace homothet {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

// lattice steps in (i, j), counterclockwise starting along +x
constexpr int kStep[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};

bool proper_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
    double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
    auto on = [](Vec2 p, Vec2 q, Vec2 r, double o) {
        return o == 0 && std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
               r.y <= std::max(p.y, q.y);
    };
    return on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4);
}

bool simple(const std::vector<Vec2>& P) {
    int n = static_cast<int>(P.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (proper_cross(P[i], P[(i + 1) % n], P[j], P[(j + 1) % n])) return false;
        }
    return true;
}

bool polygons_cross(const std::vector<Vec2>& A, const std::vector<Vec2>& B) {
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < B.size(); ++j)
            if (proper_cross(A[i], A[(i + 1) % A.size()], B[j], B[(j + 1) % B.size()])) return true;
    return false;
}

long long key(int i, int j) { return (static_cast<long long>(i) << 32) ^ static_cast<unsigned int>(j); }

std::vector<Vec2> closed_samples(const std::vector<Vec2>& P, double h) {
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < P.size(); ++k) {
        Vec2 a = P[k], b = P[(k + 1) % P.size()];
        int m = std::max(1, static_cast<int>(std::ceil(norm(b - a) / h)));
        for (int s = 0; s < m; ++s) out.push_back(a + (b - a) * (static_cast<double>(s) / m));
    }
    return out;
}

double hausdorff(const std::vector<Vec2>& cycle, const std::vector<Vec2>& poly, double h) {
    double d = 0;
    for (Vec2 p : cycle) d = std::max(d, polyline_distance(p, poly, true));
    for (Vec2 q : closed_samples(poly, h)) d = std::max(d, polyline_distance(q, cycle, true));
    return d;
}

}  // namespace

// ---------------------------------------------------------------- polygons

double polygon_area(const std::vector<Vec2>& P) {
    double s = 0;
    for (std::size_t k = 0; k < P.size(); ++k) s += cross(P[k], P[(k + 1) % P.size()]);
    return s / 2;
}

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& P) {
    bool in = false;
    for (std::size_t k = 0, m = P.size(); k < m; ++k) {
        Vec2 a = P[k], b = P[(k + 1) % m];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) in = !in;
        }
    }
    return in;
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double L = dot(d, d);
    double t = L > 0 ? std::clamp(dot(p - a, d) / L, 0.0, 1.0) : 0.0;
    return norm(p - (a + d * t));
}

double polyline_distance(Vec2 p, const std::vector<Vec2>& P, bool closed) {
    double d = std::numeric_limits<double>::infinity();
    if (P.size() == 1) return norm(p - P[0]);
    std::size_t m = closed ? P.size() : P.size() - 1;
    for (std::size_t k = 0; k < m; ++k) d = std::min(d, segment_distance(p, P[k], P[(k + 1) % P.size()]));
    return d;
}

// ---------------------------------------------------------------- domain

void Domain::check() const {
    if (outer.size() < 3) throw DiscretizeError("domain: outer curve needs at least 3 vertices");
    if (polygon_area(outer) <= 0) throw DiscretizeError("domain: outer curve must be counterclockwise");
    if (!simple(outer)) throw DiscretizeError("domain: outer curve is not simple");
    for (std::size_t j = 0; j < holes.size(); ++j) {
        const auto& F = holes[j];
        if (F.size() < 3 || std::abs(polygon_area(F)) <= 0)
            throw DiscretizeError("domain: hole " + std::to_string(j) + " is degenerate");
        if (!simple(F)) throw DiscretizeError("domain: hole " + std::to_string(j) + " is not simple");
        for (Vec2 p : F)
            if (!point_in_polygon(p, outer))
                throw DiscretizeError("domain: hole " + std::to_string(j) + " is not inside the outer curve");
        if (polygons_cross(F, outer))
            throw DiscretizeError("domain: hole " + std::to_string(j) + " meets the outer curve");
        for (std::size_t k = 0; k < j; ++k)
            if (polygons_cross(F, holes[k]) || point_in_polygon(F[0], holes[k]) || point_in_polygon(holes[k][0], F))
                throw DiscretizeError("domain: holes " + std::to_string(k) + " and " + std::to_string(j) +
                                      " are not disjoint");
    }
}

bool Domain::contains(Vec2 p) const {
    if (!point_in_polygon(p, outer)) return false;
    for (const auto& F : holes)
        if (point_in_polygon(p, F)) return false;
    return true;
}

double Domain::boundary_distance(Vec2 p) const {
    double d = polyline_distance(p, outer, true);
    for (const auto& F : holes) d = std::min(d, polyline_distance(p, F, true));
    return d;
}

double Domain::diameter() const {
    double d = 0;
    for (Vec2 p : outer)
        for (Vec2 q : outer) d = std::max(d, norm(p - q));
    return d;
}

std::vector<Vec2> Domain::marked_outer(std::array<int, 3>* splits) const {
    double tol = 1e-9 * std::max(1.0, diameter());
    std::vector<Vec2> pts = outer;
    std::array<int, 3> idx{};
    for (int k = 0; k < 3; ++k) {
        Vec2 z = marks[k];
        int hit = -1;
        for (std::size_t v = 0; v < pts.size(); ++v)
            if (norm(pts[v] - z) <= tol) hit = static_cast<int>(v);
        if (hit < 0) {
            std::size_t best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < pts.size(); ++s) {
                double d = segment_distance(z, pts[s], pts[(s + 1) % pts.size()]);
                if (d < bd) bd = d, best = s;
            }
            if (bd > 1e-6 * std::max(1.0, diameter()))
                throw DiscretizeError("domain: mark " + std::to_string(k + 1) + " is not on the outer curve");
            pts.insert(pts.begin() + static_cast<long>(best) + 1, z);
            hit = static_cast<int>(best) + 1;
            for (int q = 0; q < k; ++q)
                if (idx[q] >= hit) ++idx[q];
        }
        idx[k] = hit;
    }
    if (splits) *splits = idx;
    return pts;
}

// ---------------------------------------------------------------- hexify

Vec2 HexDiscretization::lattice_point(int i, int j) const {
    return origin + Vec2{(i + 0.5 * j) * eps, j * eps * kSqrt3 / 2};
}

HexDiscretization hexify(const Domain& domain, double eps, Vec2 seed) {
    domain.check();
    if (!(eps > 0)) throw DiscretizeError("hexify: eps must be positive");
    if (!domain.contains(seed)) throw DiscretizeError("hexify: seed point is outside the domain");
    if (domain.boundary_distance(seed) < 2 * eps)
        throw DiscretizeError("hexify: seed point is closer than 2*eps to the boundary (eps too large)");

    HexDiscretization d;
    d.eps = eps;
    d.origin = seed;

    std::vector<std::pair<Vec2, Vec2>> segs;
    auto add = [&](const std::vector<Vec2>& P) {
        for (std::size_t k = 0; k < P.size(); ++k) segs.push_back({P[k], P[(k + 1) % P.size()]});
    };
    add(domain.outer);
    for (const auto& F : domain.holes) add(F);

    std::vector<Vec2> hex;
    for (int k = 0; k < 6; ++k) hex.push_back(polar(k * std::numbers::pi / 3) * eps);
    ShapePtr hull = make_shape(Shape::polygon(hex, eps / 2));
    double clear = 1e-9 * eps;
    auto flower_in = [&](Vec2 c) {
        if (!domain.contains(c)) return false;
        Body H{hull, c, 1.0};
        for (auto [a, b] : segs) {
            if (segment_distance(c, a, b) > 1.5 * eps + clear) continue;
            if (signed_distance(H, segment_body(a, b)).value <= clear) return false;
        }
        return true;
    };

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (Vec2 p : domain.outer) {
        xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
    }
    double h = eps * kSqrt3 / 2;
    int j0 = static_cast<int>(std::floor((ymin - seed.y) / h)) - 1;
    int j1 = static_cast<int>(std::ceil((ymax - seed.y) / h)) + 1;
    auto in_box = [&](int i, int j) {
        Vec2 p = d.lattice_point(i, j);
        return j >= j0 && j <= j1 && p.x >= xmin - eps && p.x <= xmax + eps;
    };

    if (!flower_in(seed)) throw DiscretizeError("hexify: no admissible seed circle (eps too large)");
    std::unordered_map<long long, int> index;  // -1: examined, not inner
    std::vector<std::pair<int, int>> inner;
    std::deque<std::pair<int, int>> queue{{0, 0}};
    index[key(0, 0)] = 0;
    inner.push_back({0, 0});
    while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop_front();
        for (auto& s : kStep) {
            int a = i + s[0], b = j + s[1];
            if (index.count(key(a, b)) || !in_box(a, b)) continue;
            if (flower_in(d.lattice_point(a, b))) {
                index[key(a, b)] = static_cast<int>(inner.size());
                inner.push_back({a, b});
                queue.push_back({a, b});
            } else {
                index[key(a, b)] = -1;
            }
        }
    }
    for (auto [i, j] : inner) {
        HexDiscretization::Circle C;
        C.i = i, C.j = j;
        C.center = d.lattice_point(i, j);
        d.circles.push_back(C);
    }
    d.inner_count = static_cast<int>(inner.size());
    // boundary circles: non-inner neighbors of inner ones, in discovery order
    for (int k = 0; k < d.inner_count; ++k)
        for (auto& s : kStep) {
            int a = inner[k].first + s[0], b = inner[k].second + s[1];
            auto it = index.find(key(a, b));
            if (it != index.end() && it->second >= 0) continue;
            index[key(a, b)] = static_cast<int>(d.circles.size());
            HexDiscretization::Circle C;
            C.i = a, C.j = b;
            C.center = d.lattice_point(a, b);
            C.kind = HexDiscretization::Kind::Boundary;
            d.circles.push_back(C);
        }
    d.boundary_count = static_cast<int>(d.circles.size()) - d.inner_count;
    for (auto& C : d.circles)
        for (int k = 0; k < 6; ++k) {
            auto it = index.find(key(C.i + kStep[k][0], C.j + kStep[k][1]));
            C.nbr[k] = it == index.end() ? -1 : it->second;
        }
    long long total = 0;
    for (int j = j0; j <= j1; ++j) {
        double x0 = seed.x + 0.5 * j * eps;
        total += static_cast<long long>(std::floor((xmax + eps - x0) / eps) - std::ceil((xmin - eps - x0) / eps) + 1);
    }
    d.outside_count = static_cast<int>(std::max<long long>(0, total - static_cast<long long>(d.circles.size())));
    d.seed = 0;
    return d;
}

// ---------------------------------------------------------------- nerve

std::vector<Face> nerve_faces(const HexDiscretization& d) {
    std::vector<Face> out;
    int n = static_cast<int>(d.circles.size());
    for (int u = 0; u < n; ++u)
        for (int k = 0; k < 6; ++k) {
            int v = d.circles[u].nbr[k], w = d.circles[u].nbr[(k + 1) % 6];
            if (v < 0 || w < 0 || v < u || w < u) continue;
            if (d.inner(u) || d.inner(v) || d.inner(w)) out.push_back({u, v, w});
        }
    return out;
}

std::vector<Face> inner_faces(const HexDiscretization& d) {
    std::vector<Face> out;
    for (const Face& f : nerve_faces(d))
        if (d.inner(f[0]) && d.inner(f[1]) && d.inner(f[2])) out.push_back(f);
    return out;
}

BoundaryCycles boundary_cycles(const HexDiscretization& d, const Domain& domain) {
    auto faces = nerve_faces(d);
    std::unordered_map<long long, int> directed;
    for (const Face& f : faces)
        for (int s = 0; s < 3; ++s) directed[key(f[s], f[(s + 1) % 3])] = 1;
    int n = static_cast<int>(d.circles.size());
    std::vector<int> next(n, -1);
    for (const Face& f : faces)
        for (int s = 0; s < 3; ++s) {
            int u = f[s], v = f[(s + 1) % 3];
            if (directed.count(key(v, u))) continue;
            if (next[u] >= 0) {
                std::ostringstream m;
                m << "boundary_cycles: the nerve is pinched at circle " << u << " (eps too large)";
                throw DiscretizeError(m.str());
            }
            next[u] = v;
        }
    std::vector<std::vector<int>> cycles;
    std::vector<char> seen(n, 0);
    for (int u = 0; u < n; ++u) {
        if (next[u] < 0 || seen[u]) continue;
        std::vector<int> c;
        for (int v = u; !seen[v]; v = next[v]) {
            seen[v] = 1;
            c.push_back(v);
            if (next[v] < 0) throw DiscretizeError("boundary_cycles: open boundary path");
        }
        cycles.push_back(std::move(c));
    }
    std::size_t expected = domain.holes.size() + 1;
    if (cycles.size() != expected) {
        std::ostringstream m;
        m << "boundary_cycles: found " << cycles.size() << " boundary cycles, expected " << expected
          << " (eps too large)";
        throw DiscretizeError(m.str());
    }
    auto centers = [&](const std::vector<int>& c) {
        std::vector<Vec2> p;
        for (int v : c) p.push_back(d.circles[v].center);
        return p;
    };
    BoundaryCycles out;
    std::vector<int> holes_of;
    for (std::size_t k = 0; k < cycles.size(); ++k) {
        if (polygon_area(centers(cycles[k])) > 0) {
            if (!out.R.empty()) throw DiscretizeError("boundary_cycles: more than one outer cycle (eps too large)");
            out.R = cycles[k];
        } else {
            holes_of.push_back(static_cast<int>(k));
        }
    }
    if (out.R.empty()) throw DiscretizeError("boundary_cycles: no outer cycle");
    std::size_t nh = domain.holes.size();
    out.S.assign(nh, {});
    out.hausdorff.assign(nh + 1, 0);
    std::vector<std::vector<double>> H(holes_of.size(), std::vector<double>(nh));
    for (std::size_t c = 0; c < holes_of.size(); ++c)
        for (std::size_t j = 0; j < nh; ++j) H[c][j] = hausdorff(centers(cycles[holes_of[c]]), domain.holes[j], d.eps / 2);
    std::vector<int> taken(holes_of.size(), -1);
    for (std::size_t j = 0; j < nh; ++j) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < holes_of.size(); ++c)
            if (H[c][j] < H[best][j]) best = c;
        if (taken[best] >= 0) throw DiscretizeError("boundary_cycles: ambiguous cycle-to-hole matching (eps too large)");
        taken[best] = static_cast<int>(j);
        out.S[j] = cycles[holes_of[best]];
        out.hausdorff[j] = H[best][j];
    }
    out.hausdorff[nh] = hausdorff(centers(out.R), domain.outer, d.eps / 2);
    return out;
}

std::array<std::vector<int>, 3> split_outer_cycle(const HexDiscretization& d, const Domain& domain,
                                                  const std::vector<int>& R) {
    int m = static_cast<int>(R.size());
    std::array<int, 3> splits;
    auto pts = domain.marked_outer(&splits);
    std::array<int, 3> s{};
    for (int k = 0; k < 3; ++k) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            double dd = norm(d.circles[R[i]].center - domain.marks[k]);
            if (dd < best) best = dd, s[k] = i;
        }
    }
    auto ahead = [&](int from, int to) { return (to - from + m) % m; };
    if (s[0] == s[1] || s[1] == s[2] || s[0] == s[2] ||
        ahead(s[0], s[1]) + ahead(s[1], s[2]) + ahead(s[2], s[0]) != m)
        throw DiscretizeError("split_outer_cycle: marks do not separate the outer cycle (eps too large)");
    int np = static_cast<int>(pts.size());
    std::array<std::vector<int>, 3> out;
    for (int k = 0; k < 3; ++k) {
        std::vector<Vec2> arc;
        for (int v = splits[k];; v = (v + 1) % np) {
            arc.push_back(pts[v]);
            if (v == splits[(k + 1) % 3]) break;
        }
        for (int i = s[k];; i = (i + 1) % m) {
            out[k].push_back(R[i]);
            double dist = polyline_distance(d.circles[R[i]].center, arc, false) - d.eps / 2;
            if (dist > 2 * d.eps + 1e-12) {
                std::ostringstream msg;
                msg << "split_outer_cycle: circle " << R[i] << " is " << dist << " from arc " << k + 1
                    << ", more than 2*eps (eps too large)";
                throw DiscretizeError(msg.str());
            }
            if (i == s[(k + 1) % 3]) break;
        }
    }
    return out;
}

// ---------------------------------------------------------------- augment

AugmentedTriangulation augment(const HexDiscretization& d, const BoundaryCycles& cycles,
                               const std::array<std::vector<int>, 3>& split) {
    AugmentedTriangulation A;
    int N = static_cast<int>(d.circles.size());
    int nh = static_cast<int>(cycles.S.size());
    A.nerve_count = N;
    for (int j = 0; j < nh; ++j) A.hole_vertex.push_back(N + j);
    for (int k = 0; k < 3; ++k) A.outer_vertex[k] = N + nh + k;
    auto faces = nerve_faces(d);
    for (int j = 0; j < nh; ++j) {
        const auto& S = cycles.S[j];
        for (std::size_t i = 0; i < S.size(); ++i) faces.push_back({S[(i + 1) % S.size()], S[i], N + j});
    }
    for (int k = 0; k < 3; ++k) {
        const auto& P = split[k];
        if (P.size() < 2) throw DiscretizeError("augment: outer path " + std::to_string(k + 1) + " is too short");
        int ak = A.outer_vertex[k];
        for (std::size_t i = 0; i + 1 < P.size(); ++i) faces.push_back({P[i + 1], P[i], ak});
        faces.push_back({P.back(), ak, A.outer_vertex[(k + 1) % 3]});
    }
    auto [a1, a2, a3] = A.outer_vertex;
    faces.push_back({a1, a3, a2});
    A.T = Triangulation::from_faces(std::move(faces), {a1, a2, a3});
    A.cycles = cycles;
    A.split = split;
    return A;
}

AugmentedTriangulation augmented_triangulation(const HexDiscretization& d, const Domain& domain) {
    auto cycles = boundary_cycles(d, domain);
    auto split = split_outer_cycle(d, domain, cycles.R);
    return augment(d, cycles, split);
}

}  // namespace homothet
