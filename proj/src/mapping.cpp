#include "homothet/mapping.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace homothet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// index and weight of x on a sorted axis, clamped
std::pair<int, double> locate(const std::vector<double>& a, double x) {
    if (a.size() <= 1 || x <= a.front()) return {0, 0.0};
    if (x >= a.back()) return {static_cast<int>(a.size()) - 2, 1.0};
    int i = static_cast<int>(std::upper_bound(a.begin(), a.end(), x) - a.begin()) - 1;
    return {i, (x - a[i]) / (a[i + 1] - a[i])};
}

Mat2 from_columns(Vec2 c0, Vec2 c1) { return {c0.x, c1.x, c0.y, c1.y}; }

bool in_triangle(Vec2 p, const std::array<Vec2, 3>& t) {
    double s = cross(t[1] - t[0], t[2] - t[0]);
    for (int k = 0; k < 3; ++k) {
        double c = cross(t[(k + 1) % 3] - t[k], p - t[k]);
        if (c * s < 0) return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------- ellipses

Mat2 beltrami_matrix(Complex mu) { return {1 + mu.real(), mu.imag(), mu.imag(), 1 - mu.real()}; }

Shape ellipse_of_mu(Complex mu) {
    if (!(std::abs(mu) < 1)) throw PackerError("ellipse field: |mu| must be below 1");
    Shape s = Shape::ellipse(beltrami_matrix(mu).inverse());
    s.set_name("ellipse");
    return s;
}

double dilatation(const Mat2& M) {
    double E = (M.a + M.d) / 2, F = (M.a - M.d) / 2, G = (M.c + M.b) / 2, H = (M.c - M.b) / 2;
    double Q = std::hypot(E, H), R = std::hypot(F, G);
    double lo = std::abs(Q - R);
    return lo > 0 ? (Q + R) / lo : kInf;
}

EllipseField EllipseField::constant(Complex mu) {
    EllipseField f;
    f.mu = {mu};
    f.check();
    return f;
}

void EllipseField::check() const {
    std::size_t n = 1;
    for (const auto* axes : {&z_axes, &w_axes})
        for (const auto& a : *axes) {
            if (a.empty()) throw PackerError("ellipse field: empty grid axis");
            for (std::size_t k = 1; k < a.size(); ++k)
                if (!(a[k] > a[k - 1])) throw PackerError("ellipse field: grid axes must increase");
            n *= a.size();
        }
    if (mu.size() != n) throw PackerError("ellipse field: mu has the wrong number of values");
    if (!(max_abs() < 1)) throw PackerError("ellipse field: |mu| must be below 1");
}

double EllipseField::max_abs() const {
    double m = 0;
    for (Complex c : mu) m = std::max(m, std::abs(c));
    return m;
}

Complex EllipseField::at(Vec2 z, Vec2 w) const {
    std::array<std::pair<int, double>, 4> loc{locate(z_axes[0], z.x), locate(z_axes[1], z.y),
                                              locate(w_axes[0], w.x), locate(w_axes[1], w.y)};
    std::array<int, 4> size{static_cast<int>(z_axes[0].size()), static_cast<int>(z_axes[1].size()),
                            static_cast<int>(w_axes[0].size()), static_cast<int>(w_axes[1].size())};
    Complex out{};
    for (int corner = 0; corner < 16; ++corner) {
        double wt = 1;
        int idx = 0;
        bool skip = false;
        for (int a = 0; a < 4; ++a) {
            int bit = (corner >> a) & 1;
            if (size[a] == 1 && bit) {
                skip = true;
                break;
            }
            wt *= bit ? loc[a].second : 1 - loc[a].second;
            idx = idx * size[a] + loc[a].first + bit;
        }
        if (!skip && wt != 0) out += wt * mu[idx];
    }
    return out;
}

// ---------------------------------------------------------------- foliations

ShapeField foliation_field(DirectionField dir, double length) {
    if (!(length > 0)) throw PackerError("foliation: segment length must be positive");
    return [dir = std::move(dir), length](Vec2 p) {
        Vec2 d = unit(dir(p)) * (length / 2);
        Shape s = Shape::segment(-d, d);
        s.set_name("slot");
        return make_shape(std::move(s));
    };
}

double direction_jump(const DirectionField& dir, Vec2 lo, Vec2 hi, int n) {
    std::vector<Vec2> g(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec2 p{lo.x + (hi.x - lo.x) * i / (n - 1.0), lo.y + (hi.y - lo.y) * j / (n - 1.0)};
            g[i * n + j] = unit(dir(p));
        }
    double worst = 0;
    auto angle = [](Vec2 a, Vec2 b) { return std::acos(std::clamp(std::abs(dot(a, b)), 0.0, 1.0)); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i + 1 < n) worst = std::max(worst, angle(g[i * n + j], g[(i + 1) * n + j]));
            if (j + 1 < n) worst = std::max(worst, angle(g[i * n + j], g[i * n + j + 1]));
        }
    return worst;
}

// ---------------------------------------------------------------- maps

AffinePiece affine_piece(const std::array<Vec2, 3>& src, const std::array<Vec2, 3>& dst) {
    AffinePiece P;
    P.src = src;
    P.dst = dst;
    Mat2 S = from_columns(src[1] - src[0], src[2] - src[0]);
    Mat2 D = from_columns(dst[1] - dst[0], dst[2] - dst[0]);
    if (S.det() == 0) throw PackerError("build_map: degenerate source triangle");
    P.A = D * S.inverse();
    P.b = dst[0] - P.A * src[0];
    P.positive = P.A.det() * S.det() > 0 && S.det() > 0;
    P.dilatation = dilatation(P.A);
    return P;
}

Vec2 PiecewiseAffineMap::apply(Vec2 p) const {
    const AffinePiece* best = nullptr;
    double bd = kInf;
    for (const auto& P : pieces) {
        if (in_triangle(p, P.src)) return P.A * p + P.b;
        double d = norm((P.src[0] + P.src[1] + P.src[2]) / 3.0 - p);
        if (d < bd) bd = d, best = &P;
    }
    if (!best) throw PackerError("map: no pieces");
    return best->A * p + best->b;
}

PiecewiseAffineMap build_map(const HexDiscretization& d, const std::vector<Body>& bodies, MapMode mode) {
    PiecewiseAffineMap f;
    auto faces = inner_faces(d);
    auto src = [&](int v) { return d.circles[v].center; };
    auto dst = [&](int v) { return bodies[v].center(); };
    auto add = [&](const std::array<Vec2, 3>& s, const std::array<Vec2, 3>& t) {
        f.pieces.push_back(affine_piece(s, t));
        if (!f.pieces.back().positive) ++f.flipped;
    };
    if (mode == MapMode::Centers) {
        for (const Face& t : faces) add({src(t[0]), src(t[1]), src(t[2])}, {dst(t[0]), dst(t[1]), dst(t[2])});
        return f;
    }
    std::map<std::pair<int, int>, Vec2> contact;
    auto c_src = [&](int u, int v) { return (src(u) + src(v)) * 0.5; };
    auto c_dst = [&](int u, int v) {
        auto key = std::minmax(u, v);
        auto it = contact.find(key);
        if (it != contact.end()) return it->second;
        Gap g = signed_distance(bodies[key.first], bodies[key.second]);
        return contact[key] = (g.pa + g.pb) * 0.5;
    };
    for (const Face& t : faces) {
        int u = t[0], v = t[1], w = t[2];
        add({src(u), c_src(u, v), c_src(w, u)}, {dst(u), c_dst(u, v), c_dst(w, u)});
        add({src(v), c_src(v, w), c_src(u, v)}, {dst(v), c_dst(v, w), c_dst(u, v)});
        add({src(w), c_src(w, u), c_src(v, w)}, {dst(w), c_dst(w, u), c_dst(v, w)});
        add({c_src(u, v), c_src(v, w), c_src(w, u)}, {c_dst(u, v), c_dst(v, w), c_dst(w, u)});
    }
    return f;
}

PiecewiseAffineMap compose(const PiecewiseAffineMap& f, const Mat2& M) {
    PiecewiseAffineMap g;
    for (const auto& P : f.pieces) {
        std::array<Vec2, 3> dst{M * P.dst[0], M * P.dst[1], M * P.dst[2]};
        g.pieces.push_back(affine_piece(P.src, dst));
        if (!g.pieces.back().positive) ++g.flipped;
    }
    return g;
}

DilatationStats dilatation_report(const PiecewiseAffineMap& f, const Region& core) {
    DilatationStats s;
    s.max = 0;
    double sum = 0;
    for (const auto& P : f.pieces) {
        Vec2 c = (P.src[0] + P.src[1] + P.src[2]) / 3.0;
        if (!core(c)) continue;
        s.max = std::max(s.max, P.dilatation);
        sum += P.dilatation;
        ++s.pieces;
    }
    if (s.pieces == 0) throw PackerError("dilatation_report: the core misses the map's domain");
    s.mean = sum / s.pieces;
    return s;
}

RingReport resolution_and_ring_report(const HexDiscretization& d, const std::vector<Body>& bodies) {
    RingReport R;
    int n = static_cast<int>(d.circles.size());
    for (int v = 0; v < n; ++v) R.max_diameter = std::max(R.max_diameter, bodies[v].diameter());
    for (int v = 0; v < n; ++v) {
        if (!d.inner(v)) continue;
        double r = bodies[v].diameter();
        for (int u : d.circles[v].nbr)
            if (u >= 0 && r > 0) R.min_flower_ratio = std::min(R.min_flower_ratio, bodies[u].diameter() / r);
    }
    return R;
}

double body_hausdorff(const Body& A, const Body& B, int samples) {
    auto pa = A.outline(samples), pb = B.outline(samples);
    double d = 0;
    for (Vec2 p : pa) d = std::max(d, polyline_distance(p, pb, true));
    for (Vec2 q : pb) d = std::max(d, polyline_distance(q, pa, true));
    return d;
}

// ---------------------------------------------------------------- target packing

PackingResult target_packing(const AugmentedTriangulation& A, const HexDiscretization& d, const TargetSpec& spec) {
    int V = A.T.vertex_count();
    if (spec.holes.size() != A.hole_vertex.size())
        throw PackerError("target_packing: need one prescription per hole");
    std::vector<Prescription> pr(V);
    ShapePtr disk = make_shape(Shape::disk(1));
    std::map<std::pair<double, double>, ShapePtr> fixed;
    for (int v = 0; v < A.nerve_count; ++v) {
        if (!spec.mu) {
            pr[v] = Prescription::of(disk);
            continue;
        }
        Vec2 z = d.circles[v].center;
        if (!spec.mu->depends_on_w()) {
            Complex m = spec.mu->at(z, z);
            auto& s = fixed[{m.real(), m.imag()}];
            if (!s) s = make_shape(ellipse_of_mu(m));
            pr[v] = Prescription::of(s);
        } else {
            const EllipseField* mu = &*spec.mu;
            pr[v] = Prescription::of([mu, z](Vec2 w) { return make_shape(ellipse_of_mu(mu->at(z, w))); },
                                     "ellipse");
        }
    }
    for (std::size_t j = 0; j < spec.holes.size(); ++j) {
        if (!spec.holes[j].defined()) throw PackerError("target_packing: hole " + std::to_string(j) + " has no prescription");
        pr[A.hole_vertex[j]] = spec.holes[j];
    }
    auto cfg = MonsterConfig::make(A.T, spec.boundary, std::move(pr), spec.tol);
    return continuation_solve(cfg);
}

// ---------------------------------------------------------------- pipeline

Vec2 default_seed(const Domain& D) {
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (Vec2 p : D.outer) {
        xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
    }
    Vec2 best = D.outer.front();
    double bd = -1;
    const int n = 64;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec2 p{xmin + (xmax - xmin) * (i + 0.5) / n, ymin + (ymax - ymin) * (j + 0.5) / n};
            if (!D.contains(p)) continue;
            double d = D.boundary_distance(p);
            if (d > bd) bd = d, best = p;
        }
    return best;
}

Region erosion(const Domain& D, double r) {
    return [&D, r](Vec2 p) { return D.contains(p) && D.boundary_distance(p) >= r; };
}

double auto_core_radius(const Domain& D, Vec2 seed, double eps_max, int min_pieces) {
    double r = 5 * eps_max;
    HexDiscretization h;
    try {
        h = hexify(D, eps_max, seed);
    } catch (const DiscretizeError&) {
        return r;
    }
    auto faces = inner_faces(h);
    for (int it = 0; it < 30; ++it, r /= 2) {
        auto core = erosion(D, r);
        int count = 0;
        for (const Face& f : faces)
            if (core((h.circles[f[0]].center + h.circles[f[1]].center + h.circles[f[2]].center) / 3.0)) ++count;
        if (count >= min_pieces) return r;
    }
    return r;
}

namespace {

LevelReport run_level(const PipelineInput& in, double eps, const Region& core) {
    LevelReport L;
    L.eps = eps;
    auto t0 = std::chrono::steady_clock::now();
    try {
        L.disc = hexify(in.source, eps, in.seed);
        L.inner = L.disc.inner_count;
        L.boundary = L.disc.boundary_count;
        L.aug = augmented_triangulation(L.disc, in.source);
        L.vertices = L.aug.T.vertex_count();
        L.cycles = 1 + static_cast<int>(L.aug.cycles.S.size());
        L.packing = target_packing(L.aug, L.disc, in.target);
        L.status = L.packing.report.status;
        L.method = L.packing.stats.method;
        L.residual = L.packing.stats.residual;
        if (L.status == Classification::Invalid)
            throw PackerError("target packing is INVALID: " + L.packing.report.message + L.packing.diagnostics);
        L.map = build_map(L.disc, L.packing.body, in.target.mu ? MapMode::Refined : MapMode::Centers);
        L.flipped = L.map.flipped;
        L.dil = dilatation_report(L.map, core);
        L.ring = resolution_and_ring_report(L.disc, L.packing.body);
        for (int v : L.aug.hole_vertex) L.holes.push_back(L.packing.body[v]);
        if (L.flipped > 0) throw PackerError(std::to_string(L.flipped) + " flipped target triangles");
        L.ok = true;
    } catch (const std::exception& e) {
        std::ostringstream m;
        m << "eps " << eps << ": " << e.what();
        L.error = m.str();
    }
    L.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!in.keep_artifacts) {
        L.disc = {};
        L.aug = {};
        L.packing = {};
        L.map = {};
    }
    return L;
}

}  // namespace

PipelineReport run_pipeline(const PipelineInput& in) {
    if (in.ladder.empty()) throw PackerError("pipeline: empty eps ladder");
    for (std::size_t k = 1; k < in.ladder.size(); ++k)
        if (!(in.ladder[k] < in.ladder[k - 1])) throw PackerError("pipeline: the eps ladder must decrease strictly");
    if (in.target.mu) in.target.mu->check();
    in.source.check();
    PipelineReport R;
    R.core_radius = in.core_radius >= 0 ? in.core_radius : auto_core_radius(in.source, in.seed, in.ladder.front());
    R.target_diameter = in.target.boundary.diameter();
    Region core = erosion(in.source, R.core_radius);
    std::size_t n = in.ladder.size();
    R.levels.resize(n);
    int threads = std::clamp(in.threads, 1, static_cast<int>(n));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next++) < n;) R.levels[k] = run_level(in, in.ladder[k], core);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    const LevelReport* prev = nullptr;
    for (const auto& L : R.levels) {
        if (!L.ok) continue;
        if (prev)
            for (std::size_t j = 0; j < L.holes.size(); ++j) {
                PipelineReport::Drift d;
                d.eps0 = prev->eps, d.eps1 = L.eps;
                d.hole = static_cast<int>(j);
                d.center = norm(L.holes[j].center() - prev->holes[j].center());
                d.radius = std::abs(L.holes[j].diameter() - prev->holes[j].diameter()) / 2;
                d.hausdorff = body_hausdorff(L.holes[j], prev->holes[j]);
                d.hole_radius = L.holes[j].diameter() / 2;
                R.drift.push_back(d);
            }
        prev = &L;
    }
    return R;
}

}  // namespace homothet
