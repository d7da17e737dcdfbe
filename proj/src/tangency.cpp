#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "homothet/packer.hpp"

namespace homothet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int host_index(const Triangulation& T, int v) { return v == T.a() ? 0 : v == T.b() ? 1 : v == T.c() ? 2 : -1; }

}  // namespace

// ---------------------------------------------------------------- validation

ValidationReport classify_packing(const Triangulation& T, const std::array<Host, 3>& hosts,
                                  const std::vector<Body>& bodies, double eps, double eps_geom) {
    ValidationReport R;
    int n = T.vertex_count();
    auto is_boundary = [&](int v) { return host_index(T, v) >= 0; };
    auto pair_gap = [&](int u, int v) {
        if (is_boundary(u)) return hosts[host_index(T, u)].gap(bodies[v]).value;
        if (is_boundary(v)) return hosts[host_index(T, v)].gap(bodies[u]).value;
        return signed_distance(bodies[u], bodies[v]).value;
    };
    bool invalid = false, degenerate = false;
    std::ostringstream msg;
    for (int v = 0; v < n; ++v) {
        if (is_boundary(v)) continue;
        if (!bodies[v].shape && bodies[v].alpha > 0) throw PackerError("validate: body without a shape");
        if (bodies[v].is_point() || bodies[v].diameter() <= eps_geom || bodies[v].shape->is_degenerate()) {
            R.points.push_back(v);
            degenerate = true;
        }
    }
    for (auto [u, v] : T.edges()) {
        if (is_boundary(u) && is_boundary(v)) continue;
        double g = pair_gap(u, v);
        R.edges.push_back({u, v, g});
        R.worst_edge = std::max(R.worst_edge, std::abs(g));
        R.worst_overlap = std::min(R.worst_overlap, g);
        if (std::abs(g) > eps && !invalid) {
            if (g > 0)
                msg << "missing contact " << u << "-" << v << " (gap " << g << "); ";
            else
                msg << "overlap " << u << "-" << v << " (depth " << -g << "); ";
            invalid = true;
        }
    }
    // non-edges, pruned by bounding circles
    std::vector<int> ids;
    std::vector<Vec2> cen(n);
    std::vector<double> rad(n, 0);
    for (int v = 0; v < n; ++v) {
        if (is_boundary(v)) continue;
        ids.push_back(v);
        const Body& B = bodies[v];
        cen[v] = B.center();
        double r = 0;
        if (!B.is_point())
            for (Vec2 p : B.outline(64)) r = std::max(r, norm(p - cen[v]));
        rad[v] = r * 1.01 + B.diameter() * 0.02;
    }
    auto check = [&](int u, int v) {
        if (T.adjacent(u, v)) return;
        double g = pair_gap(u, v);
        R.worst_overlap = std::min(R.worst_overlap, g);
        if (g < -eps) {
            if (!invalid) msg << "overlap " << u << "-" << v << " (depth " << -g << "); ";
            invalid = true;
        } else if (g < eps) {
            R.extra.push_back({u, v, g});
            degenerate = true;
        }
    };
    std::sort(ids.begin(), ids.end(), [&](int p, int q) { return cen[p].x - rad[p] < cen[q].x - rad[q]; });
    for (std::size_t i = 0; i < ids.size(); ++i) {
        int u = ids[i];
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            int v = ids[j];
            if (cen[v].x - rad[v] > cen[u].x + rad[u] + eps) break;
            if (norm(cen[u] - cen[v]) > rad[u] + rad[v] + eps) continue;
            check(u, v);
        }
        for (int h : {T.a(), T.b(), T.c()}) check(h, u);
    }
    if (invalid)
        R.status = Classification::Invalid;
    else if (degenerate)
        R.status = Classification::DegenerateConforming;
    else
        R.status = Classification::Valid;
    if (!R.points.empty()) msg << R.points.size() << " degenerate bodies; ";
    if (!R.extra.empty()) msg << R.extra.size() << " extra contacts; ";
    R.message = msg.str();
    return R;
}

ValidationReport validate_packing(const MonsterConfig& cfg, const std::vector<Body>& bodies) {
    return classify_packing(cfg.T, cfg.boundary.P, bodies, cfg.eps_contact(), cfg.eps_geom());
}

// ---------------------------------------------------------------- Newton

PolishResult tangency_newton(const TangencyProblem& P, std::vector<Body> bodies, int max_iterations, int rounds) {
    const Triangulation& T = *P.T;
    int n = T.vertex_count();
    auto hidx = [&](int v) { return host_index(T, v); };
    std::vector<int> col(n, -1);
    int m = 0;
    for (int v = 0; v < n; ++v)
        if (hidx(v) < 0) col[v] = 3 * m++;
    std::vector<std::pair<int, int>> E;
    for (auto e : T.edges())
        if (!(hidx(e.first) >= 0 && hidx(e.second) >= 0)) E.push_back(e);
    if (static_cast<int>(E.size()) != 3 * m) throw PackerError("tangency: equation count does not match unknowns");
    for (int v = 0; v < n; ++v) {
        if (col[v] < 0) continue;
        Body& B = bodies[v];
        if (!B.shape) {
            if (!P.shape) throw PackerError("tangency: body without a shape");
            B.shape = P.shape(v, B.t);
        }
        if (!(B.alpha > 0)) B.alpha = 1e-3 * P.scene / B.shape->diameter();
    }
    const double target = 1e-13 * P.scene;
    auto residual = [&](const std::vector<Body>& Bs, Eigen::VectorXd& F) {
        F.resize(static_cast<Eigen::Index>(E.size()));
        for (std::size_t k = 0; k < E.size(); ++k) {
            auto [u, v] = E[k];
            double g;
            if (hidx(u) >= 0)
                g = P.hosts[hidx(u)].gap(Bs[v]).value;
            else if (hidx(v) >= 0)
                g = P.hosts[hidx(v)].gap(Bs[u]).value;
            else
                g = signed_distance(Bs[u], Bs[v]).value;
            F[static_cast<Eigen::Index>(k)] = g;
        }
    };
    // shape fields follow the contact with the parent
    auto refresh_shapes = [&](std::vector<Body>& Bs) {
        bool changed = false;
        for (int v = 0; v < n; ++v) {
            if (col[v] < 0) continue;
            int u = v < static_cast<int>(P.parent.size()) ? P.parent[v] : -1;
            Vec2 base = Bs[v].center();
            if (u >= 0) base = hidx(u) >= 0 ? P.hosts[hidx(u)].gap(Bs[v]).pa : signed_distance(Bs[v], Bs[u]).pa;
            ShapePtr s = P.shape(v, base);
            if (s != Bs[v].shape) {
                Vec2 c0 = Bs[v].center();
                Bs[v].shape = s;
                Bs[v].t = Bs[v].t + (c0 - Bs[v].center());
                changed = true;
            }
        }
        return changed;
    };
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    Eigen::VectorXd F;
    int it_total = 0;
    if (!P.shape) rounds = 1;
    for (int round = 0; round < rounds; ++round) {
        if (round > 0 && !refresh_shapes(bodies)) break;
        residual(bodies, F);
        double fn = F.norm();
        for (int it = 0; it < max_iterations; ++it) {
            if (F.lpNorm<Eigen::Infinity>() < target) break;
            ++it_total;
            std::vector<Eigen::Triplet<double>> trip;
            trip.reserve(E.size() * 6);
            for (std::size_t k = 0; k < E.size(); ++k) {
                auto [u, v] = E[k];
                int row = static_cast<int>(k);
                if (hidx(u) >= 0) std::swap(u, v);
                if (hidx(v) >= 0) {
                    Gap g = P.hosts[hidx(v)].gap(bodies[u]);
                    int c0 = col[u];
                    trip.push_back({row, c0, -g.u.x});
                    trip.push_back({row, c0 + 1, -g.u.y});
                    trip.push_back({row, c0 + 2, -dot(g.u, g.pa - bodies[u].t)});
                    continue;
                }
                Gap g = signed_distance(bodies[u], bodies[v]);
                int cu = col[u], cv = col[v];
                trip.push_back({row, cu, -g.u.x});
                trip.push_back({row, cu + 1, -g.u.y});
                trip.push_back({row, cu + 2, -dot(g.u, g.pa - bodies[u].t)});
                trip.push_back({row, cv, g.u.x});
                trip.push_back({row, cv + 1, g.u.y});
                trip.push_back({row, cv + 2, dot(g.u, g.pb - bodies[v].t)});
            }
            Eigen::SparseMatrix<double> J(static_cast<Eigen::Index>(E.size()), 3 * m);
            J.setFromTriplets(trip.begin(), trip.end());
            J.makeCompressed();
            Eigen::VectorXd step;
            if (!analyzed) {
                lu.analyzePattern(J);
                analyzed = true;
            }
            lu.factorize(J);
            bool ok = lu.info() == Eigen::Success;
            if (ok) {
                step = lu.solve(-F);
                ok = lu.info() == Eigen::Success && step.allFinite();
            }
            if (!ok) {
                // Levenberg-Marquardt step
                Eigen::SparseMatrix<double> A = J.transpose() * J;
                double lam = 1e-6 * (A.diagonal().maxCoeff() + 1e-300);
                for (int k = 0; k < A.rows(); ++k) A.coeffRef(k, k) += lam;
                Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
                step = ldlt.solve(-(J.transpose() * F));
                if (!step.allFinite()) break;
            }
            double s = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 30; ++ls, s *= 0.5) {
                std::vector<Body> trial = bodies;
                for (int v = 0; v < n; ++v) {
                    if (col[v] < 0) continue;
                    trial[v].t += Vec2{step[col[v]], step[col[v] + 1]} * s;
                    trial[v].alpha *= std::exp(std::clamp(step[col[v] + 2] * s, -2.0, 2.0));
                }
                Eigen::VectorXd Ft;
                residual(trial, Ft);
                double ftn = Ft.norm();
                if (ftn < fn * (1 - 1e-4 * s) || ftn < target) {
                    bodies = std::move(trial);
                    F = Ft;
                    fn = ftn;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
    }
    residual(bodies, F);
    PolishResult out;
    out.body = std::move(bodies);
    out.iterations = it_total;
    out.residual = F.size() ? F.lpNorm<Eigen::Infinity>() : 0.0;
    out.converged = out.residual < 1e-9 * P.scene;
    return out;
}

PolishResult polish_packing(const MonsterConfig& cfg, std::vector<Body> bodies, int max_iterations, bool reshape) {
    TangencyProblem P;
    P.T = &cfg.T;
    P.hosts = cfg.boundary.P;
    P.parent = cfg.order.parent;
    P.scene = cfg.scene;
    bool fields = false;
    for (int v = 0; v < cfg.T.vertex_count(); ++v)
        if (cfg.free(v) && cfg.prescription[v].field) fields = true;
    if (fields || std::any_of(bodies.begin(), bodies.end(), [](const Body& B) { return B.alpha > 0 && !B.shape; }))
        P.shape = [&cfg](int v, Vec2 p) { return cfg.prescription[v].at(p); };
    return tangency_newton(P, std::move(bodies), max_iterations, reshape ? 6 : 1);
}

// ---------------------------------------------------------------- disk seed

CirclePacking disk_seed(const Triangulation& T, const std::array<BoundaryCircle, 3>& bc) {
    int n = T.vertex_count();
    std::vector<int> bidx(n, -1), idx(n, -1);
    for (int k = 0; k < 3; ++k) bidx[T.root()[k]] = k;
    std::vector<int> I;
    for (int v = 0; v < n; ++v)
        if (bidx[v] < 0) idx[v] = static_cast<int>(I.size()), I.push_back(v);
    double small = kTwoPi;
    for (auto& c : bc) small = std::min(small, c.radius);
    std::vector<double> r(n, 0.05 * small);
    for (int k = 0; k < 3; ++k) r[T.root()[k]] = bc[k].radius;
    auto len = [&](int u, int v) {
        int bu = bidx[u], bv = bidx[v];
        if (bu >= 0 && bv >= 0) return norm(bc[bu].center - bc[bv].center);
        if (bu >= 0) std::swap(u, v), std::swap(bu, bv);
        if (bv >= 0) return bc[bv].inside ? bc[bv].radius - r[u] : bc[bv].radius + r[u];
        return r[u] + r[v];
    };
    auto theta = [&](int v) {
        const auto& rot = T.rotation(v);
        double s = 0;
        for (std::size_t k = 0; k < rot.size(); ++k) {
            int u = rot[k], w = rot[(k + 1) % rot.size()];
            double p = len(v, u), q = len(v, w), o = len(u, w);
            if (p <= 0 || q <= 0) continue;
            s += std::acos(std::clamp((p * p + q * q - o * o) / (2 * p * q), -1.0, 1.0));
        }
        return s;
    };
    int m = static_cast<int>(I.size());
    auto residual = [&](Eigen::VectorXd& F) {
        F.resize(m);
        for (int k = 0; k < m; ++k) F[k] = theta(I[k]) - kTwoPi;
    };
    Eigen::VectorXd F;
    residual(F);
    CirclePacking out;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    for (int it = 0; it < 200 && F.lpNorm<Eigen::Infinity>() > 1e-13; ++it) {
        out.iterations = it + 1;
        std::vector<Eigen::Triplet<double>> trip;
        const double h = 1e-7;
        for (int k = 0; k < m; ++k) {
            int w = I[k];
            double r0 = r[w];
            std::vector<std::pair<int, double>> before;
            before.push_back({w, theta(w)});
            for (int x : T.rotation(w))
                if (idx[x] >= 0) before.push_back({x, theta(x)});
            r[w] = r0 * std::exp(h);
            for (auto [x, t0] : before) trip.push_back({idx[x], k, (theta(x) - t0) / h});
            r[w] = r0;
        }
        Eigen::SparseMatrix<double> J(m, m);
        J.setFromTriplets(trip.begin(), trip.end());
        lu.compute(J);
        if (lu.info() != Eigen::Success) throw PackerError("disk seed: singular angle Jacobian");
        Eigen::VectorXd du = lu.solve(-F);
        double fn = F.norm(), s = 1;
        std::vector<double> r0 = r;
        bool ok = false;
        for (int ls = 0; ls < 40; ++ls, s *= 0.5) {
            for (int k = 0; k < m; ++k) r[I[k]] = r0[I[k]] * std::exp(std::clamp(s * du[k], -1.0, 1.0));
            bool fits = true;
            for (int k = 0; k < 3; ++k)
                if (bc[k].inside)
                    for (int v : I) fits = fits && r[v] < bc[k].radius;
            Eigen::VectorXd Ft;
            residual(Ft);
            if (fits && Ft.norm() < fn) {
                F = Ft;
                ok = true;
                break;
            }
        }
        if (!ok) {
            r = r0;
            break;
        }
    }
    if (F.lpNorm<Eigen::Infinity>() > 1e-9) throw PackerError("disk seed: angle sums did not converge");
    // lay out across the faces, starting from the boundary circles
    std::vector<Vec2> c(n);
    std::vector<char> placed(n, 0);
    for (int k = 0; k < 3; ++k) c[T.root()[k]] = bc[k].center, placed[T.root()[k]] = 1;
    for (bool progress = true; progress;) {
        progress = false;
        for (const auto& f : T.faces())
            for (int s = 0; s < 3; ++s) {
                int u = f[s], v = f[(s + 1) % 3], w = f[(s + 2) % 3];
                if (!placed[u] || !placed[v] || placed[w]) continue;
                double d = norm(c[v] - c[u]), p = len(u, w), q = len(v, w);
                if (d <= 0) continue;
                double ang = std::acos(std::clamp((p * p + d * d - q * q) / (2 * p * d), -1.0, 1.0));
                c[w] = c[u] + (Mat2::rotation(ang) * ((c[v] - c[u]) / d)) * p;
                placed[w] = 1;
                progress = true;
            }
    }
    if (std::find(placed.begin(), placed.end(), 0) != placed.end()) throw PackerError("disk seed: layout incomplete");
    out.center = c;
    out.radius = r;
    return out;
}

// ---------------------------------------------------------------- continuation

Shape blend_shape(const Shape& target, double s) {
    if (s >= 1) return target;
    Shape out = Shape::disk(1);
    if (target.kind() == Shape::Kind::Ellipse) {
        const Mat2& L = target.ellipse_matrix();
        double rho = std::sqrt(std::abs(L.det()));
        Mat2 Ls{(1 - s) * rho + s * L.a, s * L.b, s * L.c, (1 - s) * rho + s * L.d};
        out = Shape::ellipse(Ls);
    } else {
        const auto& V = target.vertices();
        Vec2 cv;
        for (Vec2 p : V) cv += p;
        cv = cv / static_cast<double>(V.size());
        double R0 = target.diameter() / 2;
        double rho = s * target.rounding() + (1 - s) * R0;
        if (s <= 0 || V.size() == 1) {
            out = Shape::polygon({cv}, rho);
        } else if (V.size() == 2) {
            out = Shape::segment(cv + (V[0] - cv) * s, cv + (V[1] - cv) * s, rho);
        } else {
            std::vector<Vec2> W;
            for (Vec2 p : V) W.push_back(cv + (p - cv) * s);
            out = Shape::polygon(W, rho);
        }
    }
    out.set_name(target.name());
    return out;
}

namespace {

// Three equal tangent circles around the centroid of the region, turned so
// their contact z2 faces the same way as the region's.
std::array<BoundaryCircle, 3> proxy_circles(const JordanBoundary& B, double scene) {
    Vec2 cen;
    std::vector<Vec2> pts = B.polyline;
    if (pts.empty()) pts = {B.z1, B.z2, B.z3};
    for (Vec2 p : pts) cen += p;
    cen = cen / static_cast<double>(pts.size());
    double th2 = std::atan2(B.z2.y - cen.y, B.z2.x - cen.x);
    double rho = scene;
    double R = 2 * rho / std::sqrt(3.0);
    double thc = th2 + std::numbers::pi;
    std::array<BoundaryCircle, 3> out;
    double th[3] = {thc + kTwoPi / 3, thc + 2 * kTwoPi / 3, thc};
    for (int k = 0; k < 3; ++k) out[k] = {cen + polar(th[k]) * R, rho, false};
    return out;
}

bool circles_of(const JordanBoundary& B, std::array<BoundaryCircle, 3>& out) {
    if (B.mode == JordanBoundary::Mode::TangentCircles) {
        for (int k = 0; k < 3; ++k) out[k] = {B.P[k].body.center(), B.P[k].body.diameter() / 2, false};
        return true;
    }
    if (B.mode == JordanBoundary::Mode::Bodies && B.P[1].body.shape->is_disk() && B.P[2].body.shape->is_disk()) {
        out[0] = {B.P[0].ext.o, B.P[0].ext.R, true};
        for (int k = 1; k < 3; ++k) out[k] = {B.P[k].body.center(), B.P[k].body.diameter() / 2, false};
        return true;
    }
    return false;
}

// Curves between the proxy arcs (s = 0) and the polyline arcs (s = 1).
struct BoundaryPath {
    std::array<std::vector<Vec2>, 3> from, to;
    std::array<Host, 3> at(double s) const {
        std::array<Host, 3> H;
        for (int k = 0; k < 3; ++k) {
            std::vector<Vec2> p(from[k].size());
            for (std::size_t j = 0; j < p.size(); ++j) p[j] = from[k][j] * (1 - s) + to[k][j] * s;
            H[k] = Host::of(Curve::from(p));
        }
        return H;
    }
};

BoundaryPath boundary_path(const JordanBoundary& B, const std::array<BoundaryCircle, 3>& pc) {
    BoundaryPath path;
    auto contact = [&](int i, int j) { return pc[i].center + unit(pc[j].center - pc[i].center) * pc[i].radius; };
    Vec2 z1 = contact(0, 2), z2 = contact(0, 1), z3 = contact(1, 2);
    std::array<std::pair<Vec2, Vec2>, 3> ends{{{z2, z1}, {z3, z2}, {z1, z3}}};
    for (int k = 0; k < 3; ++k) {
        const Curve& C = B.P[k].curve;
        std::vector<double> f;
        for (double x : C.cum) f.push_back(x / C.length());
        for (int j = 0; j <= 64; ++j) f.push_back(j / 64.0);
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end(), [](double x, double y) { return y - x < 1e-9; }), f.end());
        f.back() = 1.0;
        Vec2 o = pc[k].center;
        double t0 = std::atan2(ends[k].first.y - o.y, ends[k].first.x - o.x);
        double t1 = std::atan2(ends[k].second.y - o.y, ends[k].second.x - o.x);
        double dt = std::remainder(t1 - t0, kTwoPi);
        for (double x : f) {
            path.from[k].push_back(o + polar(t0 + x * dt) * pc[k].radius);
            path.to[k].push_back(C.point_at(x));
        }
    }
    return path;
}

}  // namespace

PackingResult continuation_solve(const MonsterConfig& cfg) {
    const Triangulation& T = cfg.T;
    int n = T.vertex_count();
    std::array<BoundaryCircle, 3> circ;
    bool exact = circles_of(cfg.boundary, circ);
    bool polyline = cfg.boundary.mode == JordanBoundary::Mode::Polyline;
    if (!exact && !polyline) throw PackerError("continuation: boundary bodies must be disks");
    if (!exact) circ = proxy_circles(cfg.boundary, cfg.scene);
    BoundaryPath bpath;
    if (!exact) bpath = boundary_path(cfg.boundary, circ);
    auto hosts_at = [&](double s) { return exact || s >= 1 ? cfg.boundary.P : bpath.at(s); };

    // blended prototypes, cached per level for fixed prescriptions
    std::map<const Shape*, ShapePtr> cache;
    double level = -1;
    auto shape_at = [&](double s) {
        return [&, s](int v, Vec2 p) -> ShapePtr {
            ShapePtr target = cfg.prescription[v].at(p);
            if (s >= 1) return target;
            if (cfg.prescription[v].field) return make_shape(blend_shape(*target, s));
            if (level != s) cache.clear(), level = s;
            auto it = cache.find(target.get());
            if (it != cache.end()) return it->second;
            return cache[target.get()] = make_shape(blend_shape(*target, s));
        };
    };

    auto seed = disk_seed(T, circ);
    double seed_scale = 0;
    for (auto& c : circ) seed_scale = std::max(seed_scale, c.radius);
    std::vector<Body> bodies(n);
    {
        auto shape0 = shape_at(0);
        for (int v = 0; v < n; ++v) {
            if (!cfg.free(v)) continue;
            ShapePtr s = shape0(v, seed.center[v]);
            // the s = 0 shape is a disk around the prototype's vertex centroid
            Vec2 cv = s->vertices().empty() ? Vec2{} : s->vertices().front();
            double alpha = seed.radius[v] / (s->diameter() / 2);
            bodies[v] = Body{s, seed.center[v] - cv * alpha, alpha};
        }
    }
    TangencyProblem P;
    P.T = &T;
    P.parent = cfg.order.parent;
    P.scene = cfg.scene;
    auto track = [&](double s, std::vector<Body> start) {
        P.hosts = hosts_at(s);
        P.shape = shape_at(s);
        for (int v = 0; v < n; ++v) {
            if (!cfg.free(v)) continue;
            Vec2 c0 = start[v].center();
            start[v].shape = P.shape(v, c0);
            start[v].t = start[v].t + (c0 - start[v].center());
        }
        auto R = tangency_newton(P, std::move(start), cfg.tol.newton_iterations);
        auto rep = classify_packing(T, P.hosts, R.body, cfg.eps_contact(), cfg.eps_geom());
        bool ok = R.converged && rep.status != Classification::Invalid;
        return std::make_pair(ok, std::move(R));
    };

    PackingResult out;
    out.stats.method = "continuation";
    auto [ok0, R0] = track(0, bodies);
    if (!ok0) throw PackerError("continuation: the disk seed does not solve the starting system");
    bodies = std::move(R0.body);
    int iterations = R0.iterations, steps = 0;
    double s = 0, ds = 0.125;
    bool trivial = exact;
    for (int v = 0; v < n && trivial; ++v)
        if (cfg.free(v)) trivial = cfg.prescription[v].at(bodies[v].center())->is_disk();
    if (trivial) s = 1;
    std::ostringstream diag;
    while (s < 1) {
        double s1 = std::min(1.0, s + ds);
        auto [ok, R] = track(s1, bodies);
        ++steps;
        iterations += R.iterations;
        if (ok) {
            bodies = std::move(R.body);
            s = s1;
            ds = std::min(0.25, ds * 1.5);
        } else {
            ds *= 0.5;
            if (ds < 1e-4) {
                diag << "continuation stalled at s = " << s << "; ";
                break;
            }
        }
    }
    if (s >= 1) {
        // final pass on the exact data
        auto [ok, R] = track(1, bodies);
        iterations += R.iterations;
        if (R.converged) bodies = std::move(R.body);
        out.stats.newton_converged = R.converged;
        out.stats.residual = R.residual;
        (void)ok;
    }
    out.stats.newton_iterations = iterations;
    out.stats.sweeps = steps;
    out.body = bodies;
    out.shape_name.assign(n, "");
    for (int v = 0; v < n; ++v)
        if (cfg.free(v) && bodies[v].shape) out.shape_name[v] = bodies[v].shape->name();
    out.report = s >= 1 ? validate_packing(cfg, bodies) : ValidationReport{};
    if (s < 1) out.report.message = "continuation did not reach the prescribed data";
    out.diagnostics = diag.str();
    return out;
}

}  // namespace homothet
