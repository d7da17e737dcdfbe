#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "homothet/geometry.hpp"
#include "oracles.hpp"

using namespace homothet;

namespace {

constexpr double kPi = std::numbers::pi;

double seg_seg(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto pt = [](Vec2 p, Vec2 u, Vec2 v) {
        Vec2 e = v - u;
        double s = std::clamp(dot(p - u, e) / dot(e, e), 0.0, 1.0);
        return norm(p - (u + e * s));
    };
    return std::min({pt(a, c, d), pt(b, c, d), pt(c, a, b), pt(d, a, b)});
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double s1 = cross(b - a, c - a), s2 = cross(b - a, d - a);
    double s3 = cross(d - c, a - c), s4 = cross(d - c, b - c);
    return s1 * s2 < 0 && s3 * s4 < 0;
}

bool point_in(const std::vector<Vec2>& P, Vec2 q) {
    for (std::size_t i = 0; i < P.size(); ++i)
        if (cross(P[(i + 1) % P.size()] - P[i], q - P[i]) < 0) return false;
    return true;
}

std::vector<Vec2> random_convex(std::mt19937_64& rng, Vec2 at, double size) {
    std::uniform_real_distribution<double> U(-1, 1);
    for (;;) {
        std::vector<Vec2> pts;
        int k = std::uniform_int_distribution<int>(3, 9)(rng);
        for (int i = 0; i < k; ++i) pts.push_back(at + Vec2{U(rng), U(rng)} * size);
        auto h = convex_hull(pts);
        if (h.size() < 3) continue;
        try {
            Shape::polygon(h);
            return h;
        } catch (const GeometryError&) {
        }
    }
}

// The inner circle tangent to three disks, by trilateration with known radius.
Vec2 inner_center(std::array<Vec2, 3> c, std::array<double, 3> r, double rin) {
    // |z-c_i|^2 = (r_i+rin)^2; subtract pairs -> linear system
    auto row = [&](int i, int j, double& A, double& B, double& C) {
        A = 2 * (c[j].x - c[i].x);
        B = 2 * (c[j].y - c[i].y);
        double Ri = r[i] + rin, Rj = r[j] + rin;
        C = Ri * Ri - Rj * Rj - dot(c[i], c[i]) + dot(c[j], c[j]);
    };
    double a1, b1, c1, a2, b2, c2;
    row(0, 1, a1, b1, c1);
    row(0, 2, a2, b2, c2);
    double D = a1 * b2 - a2 * b1;
    return {(c1 * b2 - c2 * b1) / D, (a1 * c2 - a2 * c1) / D};
}

}  // namespace

TEST_CASE("shape constructors validate their input") {
    CHECK_THROWS_AS(Shape::polygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
    CHECK_THROWS_AS(Shape::polygon({{0, 0}, {0, 1}, {1, 0}}), GeometryError);  // clockwise
    CHECK_THROWS_AS(Shape::polygon({{0, 0}, {2, 0}, {1, 1}, {2, 2}, {0, 2}}), GeometryError);
    CHECK_THROWS_AS(Shape::polygon({{0, 0}}), GeometryError);
    CHECK_THROWS_AS(Shape::disk(0), GeometryError);
    CHECK_THROWS_AS(Shape::ellipse(Mat2{1, 0, 0, -1}), GeometryError);
    auto sq = Shape::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(sq.area() == doctest::Approx(1));
    CHECK(sq.perimeter() == doctest::Approx(4));
    auto rsq = Shape::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0.5);
    CHECK(rsq.area() == doctest::Approx(1 + 4 * 0.5 + kPi * 0.25));
    CHECK(rsq.perimeter() == doctest::Approx(4 + kPi));
    auto e = Shape::ellipse(2, 1, 0.3);
    CHECK(e.area() == doctest::Approx(2 * kPi));
    // Ramanujan's perimeter approximation is good to ~1e-5 at this eccentricity
    double h = 1.0 / 9.0;
    CHECK(e.perimeter() == doctest::Approx(kPi * 3 * (1 + 3 * h / (10 + std::sqrt(4 - 3 * h)))).epsilon(1e-5));
}

TEST_CASE("support functions agree with vertex scans") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> A(0, 2 * kPi);
    auto e = Shape::ellipse(3, 1, 0.7);
    auto P = Shape::polygon(random_convex(rng, {0, 0}, 1), 0.2);
    auto eo = e.outline(20000);
    auto po = P.outline(20000);
    for (int k = 0; k < 200; ++k) {
        Vec2 u = polar(A(rng));
        double he = -1e300, hp = -1e300;
        for (Vec2 p : eo) he = std::max(he, dot(p, u));
        for (Vec2 p : po) hp = std::max(hp, dot(p, u));
        CHECK(e.support(u) == doctest::Approx(he).epsilon(1e-6));
        CHECK(P.support(u) == doctest::Approx(hp).epsilon(1e-6));
        CHECK(dot(e.support_point(u), u) == doctest::Approx(e.support(u)));
        CHECK(dot(P.support_point(u), u) == doctest::Approx(P.support(u)));
    }
    // ties resolve to the side midpoint
    auto sq = Shape::polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    CHECK(sq.support_point({0, 1}) == Vec2{1, 2});
}

TEST_CASE("boundary parameter: points, normals and inverse") {
    auto sq = Shape::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    double L = sq.param_length();
    CHECK(L > 4.0);
    CHECK(L < 4.01);
    for (int k = 0; k < 400; ++k) {
        double s = L * k / 400;
        Vec2 p = sq.point_at(s);
        double ds = std::abs(sq.param_of(p) - s);
        CHECK(std::min(ds, L - ds) < 1e-9 + (L - 4) / 2);  // corners collapse
        CHECK(sq.support(sq.normal_at(s)) == doctest::Approx(dot(p, sq.normal_at(s))));
    }
    auto e = Shape::ellipse(2, 0.5, 1.0);
    for (int k = 0; k < 100; ++k) {
        double s = e.param_length() * k / 100;
        CHECK(e.param_of(e.point_at(s)) == doctest::Approx(s).epsilon(1e-9));
        Vec2 n = e.normal_at(s);
        CHECK(e.support(n) == doctest::Approx(dot(e.point_at(s), n)).epsilon(1e-9));
    }
}

TEST_CASE("boundary_point examples") {
    Body C{make_shape(Shape::disk(1)), {0, 0}, 1};
    Vec2 q = boundary_point(C, {1, 0}, 0.25);
    CHECK(q.x == doctest::Approx(0).epsilon(1e-9));
    CHECK(q.y == doctest::Approx(1));
    Body S{make_shape(Shape::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})), {0, 0}, 1};
    Vec2 o = boundary_point(S, {0, 0}, 0.5);
    CHECK(o.x == doctest::Approx(1).epsilon(1e-9));
    CHECK(o.y == doctest::Approx(1).epsilon(1e-9));
    CHECK(boundary_point(S, {0.3, 0}, 0.0) == Vec2{0.3, 0});
    CHECK(boundary_point(S, {0.3, 0}, 1.0) == Vec2{0.3, 0});
    Vec2 a = boundary_point(S, {0.3, 0}, 0.37), b = boundary_point(S, boundary_point(S, {0.3, 0}, 0.5), 0.87);
    CHECK(norm(a - b) < 1e-9);
    CHECK_THROWS_AS(boundary_point(S, {0.5, 0.5}, 0.1), GeometryError);
}

TEST_CASE("signed distance of random polygon pairs against brute force") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(-2.5, 2.5);
    int separated = 0, overlapping = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        auto P = random_convex(rng, {0, 0}, 1);
        auto Q = random_convex(rng, {U(rng), U(rng)}, 1);
        Body A{make_shape(Shape::polygon(P)), {0, 0}, 1};
        Body B{make_shape(Shape::polygon(Q)), {0, 0}, 1};
        bool meet = point_in(P, Q[0]) || point_in(Q, P[0]);
        double dmin = 1e300;
        for (std::size_t i = 0; i < P.size(); ++i)
            for (std::size_t j = 0; j < Q.size(); ++j) {
                Vec2 a = P[i], b = P[(i + 1) % P.size()], c = Q[j], d = Q[(j + 1) % Q.size()];
                meet = meet || segments_cross(a, b, c, d);
                dmin = std::min(dmin, seg_seg(a, b, c, d));
            }
        Gap g = signed_distance(A, B);
        if (meet && dmin > 1e-9) {
            ++overlapping;
            CHECK(g.value < 0);
        } else if (!meet) {
            ++separated;
            CHECK(g.value == doctest::Approx(dmin).epsilon(1e-9));
            CHECK(norm(g.pb - g.pa) == doctest::Approx(dmin).epsilon(1e-9));
        }
        // symmetric
        CHECK(signed_distance(B, A).value == doctest::Approx(g.value).epsilon(1e-9));
    }
    CHECK(separated > 1000);
    CHECK(overlapping > 1000);
}

TEST_CASE("penetration depth is the minimal separating translation") {
    Body A{make_shape(Shape::polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}})), {0, 0}, 1};
    Body B{make_shape(Shape::polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}})), {1.5, 0.2}, 1};
    Gap g = signed_distance(A, B);
    CHECK(g.value == doctest::Approx(-0.5));
    CHECK(g.u.x == doctest::Approx(1));
    Body D1{make_shape(Shape::disk(1)), {0, 0}, 1}, D2{make_shape(Shape::disk(1)), {3, 4}, 2};
    CHECK(signed_distance(D1, D2).value == doctest::Approx(2));
    // ellipse vs disk: sampled oracle
    Body E{make_shape(Shape::ellipse(2, 0.5, 0.4)), {0, 0}, 1};
    Body D{make_shape(Shape::disk(0.3)), {1.0, 1.7}, 1};
    double dm = 1e300;
    for (Vec2 p : E.outline(200000)) dm = std::min(dm, norm(p - Vec2{1.0, 1.7}) - 0.3);
    CHECK(signed_distance(E, D).value == doctest::Approx(dm).epsilon(1e-6));
    // exterior circle
    ExteriorCircle X{{0, 0}, 5};
    CHECK(signed_distance(D2, X).value == doctest::Approx(5 - 5 - 2));
    CHECK(signed_distance(D1, X).value == doctest::Approx(4));
}

TEST_CASE("max_scale recovers the inner Soddy circle") {
    std::array<double, 3> r{1.0, 1.5, 0.7};
    std::array<Vec2, 3> c;
    c[0] = {0, 0};
    c[1] = {r[0] + r[1], 0};
    // third center by the law of cosines
    double a = r[0] + r[2], b = r[1] + r[2], d = r[0] + r[1];
    double x = (a * a - b * b + d * d) / (2 * d);
    c[2] = {x, std::sqrt(a * a - x * x)};
    double rin = 1 / oracle::descartes_inner(1 / r[0], 1 / r[1], 1 / r[2]);
    Vec2 z = inner_center(c, r, rin);
    Vec2 n = unit(z - c[0]);
    Vec2 p = c[0] + n * r[0];
    auto fam = tangent_family(make_shape(Shape::disk(1)), p, n);
    std::vector<Obstacle> obs;
    for (int i = 1; i < 3; ++i) obs.push_back(Obstacle::of(Body{make_shape(Shape::disk(r[i])), c[i], 1}, i));
    auto res = max_scale(fam, obs, 100, 1e-12);
    CHECK(res.status == ScaleResult::Status::Contact);
    CHECK(res.alpha == doctest::Approx(rin).epsilon(1e-12));
    // the same through the numeric path: disks as 1-vertex polygons placed off-center
    auto fam2 = tangent_family(make_shape(Shape::polygon({{0.5, 0.25}}, 1.0)), p, n);
    auto res2 = max_scale(fam2, obs, 100, 1e-12);
    CHECK(res2.alpha == doctest::Approx(rin).epsilon(1e-12));
}

TEST_CASE("max_scale: degenerate, no contact, monotone in the obstacle set") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(-4, 4);
    auto proto = make_shape(Shape::polygon({{-1, -0.5}, {1, -0.5}, {0.3, 1}}, 0.1));
    for (int rep = 0; rep < 200; ++rep) {
        Vec2 p{0, 0}, n = polar(std::uniform_real_distribution<double>(0, 2 * kPi)(rng));
        auto fam = tangent_family(proto, p, n);
        std::vector<Obstacle> obs;
        double prev = 1e300;
        for (int k = 0; k < 5; ++k) {
            auto Q = random_convex(rng, {U(rng), U(rng)}, 0.7);
            Body B{make_shape(Shape::polygon(Q)), {0, 0}, 1};
            if (signed_distance(point_body(p), B).value < 0.05) continue;
            obs.push_back(Obstacle::of(B, k));
            auto res = max_scale(fam, obs, 50, 1e-9);
            CHECK(res.alpha <= prev * (1 + 1e-12));
            prev = res.alpha;
            // maximal: feasible at alpha, infeasible just above
            for (auto& o : obs) CHECK(obstacle_gap(fam.at(res.alpha), o).value > -1e-9);
            if (res.status == ScaleResult::Status::Contact) {
                double worst = 1e300;
                for (auto& o : obs) worst = std::min(worst, obstacle_gap(fam.at(res.alpha * (1 + 1e-6)), o).value);
                CHECK(worst < 0);
            }
        }
    }
    auto fam = tangent_family(proto, {0, 0}, {0, 1});
    Body B{make_shape(Shape::disk(1)), {0, -1}, 1};
    CHECK(max_scale(fam, {Obstacle::of(B)}, 10, 1e-9).status == ScaleResult::Status::Degenerate);
    Body far{make_shape(Shape::disk(1)), {100, 100}, 1};
    auto res = max_scale(fam, {Obstacle::of(far)}, 3, 1e-9);
    CHECK(res.status == ScaleResult::Status::NoContact);
    CHECK(res.alpha == 3);
}

TEST_CASE("max_scale is invariant under homotheties") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-3, 3);
    auto proto = make_shape(Shape::ellipse(1.5, 0.6, 0.2));
    for (int rep = 0; rep < 50; ++rep) {
        Vec2 p{U(rng), U(rng)}, n = unit(Vec2{U(rng), U(rng)});
        std::vector<Body> bodies;
        for (int k = 0; k < 4; ++k) {
            Body B{make_shape(Shape::polygon(random_convex(rng, {0, 0}, 0.8), 0.05)), p + Vec2{U(rng), U(rng)}, 1};
            if (signed_distance(point_body(p), B).value > 0.05) bodies.push_back(B);
        }
        auto solve = [&](double s, Vec2 w) {
            std::vector<Obstacle> obs;
            for (auto& B : bodies) obs.push_back(Obstacle::of(apply_homothety(B, s, w)));
            return max_scale(tangent_family(proto, p * s + w, n), obs, 1e3 * s, 1e-12).alpha;
        };
        double a0 = solve(1, {0, 0});
        CHECK(solve(1, {7, -3}) == doctest::Approx(a0).epsilon(1e-8));
        CHECK(solve(2.5, {1, 1}) == doctest::Approx(2.5 * a0).epsilon(1e-8));
    }
}

TEST_CASE("tangent families are nested") {
    std::mt19937_64 rng(17);
    auto proto = make_shape(Shape::polygon(random_convex(rng, {0, 0}, 1), 0.0));
    auto fam = tangent_family(proto, {1, 2}, unit(Vec2{1, 3}));
    for (int k = 1; k < 20; ++k) {
        Body small = fam.at(0.1 * k), big = fam.at(0.1 * (k + 1));
        for (Vec2 q : small.outline(64)) {
            // q lies in big: every support inequality holds
            for (int j = 0; j < 64; ++j) {
                Vec2 u = polar(2 * kPi * j / 64);
                CHECK(dot(q, u) <= big.support(u) + 1e-12);
            }
        }
        CHECK(dot(fam.at(0.1 * k).support_point(-fam.n), fam.n) == doctest::Approx(dot(Vec2{1, 2}, fam.n)));
    }
}

TEST_CASE("chain side arcs split each boundary at the bases") {
    Host A = Host::of(Body{make_shape(Shape::disk(1)), {0, 0}, 1});
    Host B = Host::of(Body{make_shape(Shape::disk(1)), {2, 0}, 1});
    Host C = Host::of(Body{make_shape(Shape::disk(0.5)), {3.5, 0}, 1});
    double fB = B.fraction_of({1, 0});  // where B touches A
    double xC = 0.3;
    std::vector<ChainLink> path{{&A, 0.0, 0.0}, {&B, fB, 0.0}, {&C, 0.0, xC}};
    auto L = chain_side_arc(path, Side::Left, true);
    auto R = chain_side_arc(path, Side::Right, false);
    REQUIRE(L.size() == 2);
    CHECK(L[0].kind == BoundaryArc::Kind::Whole);
    CHECK(R[0].kind == BoundaryArc::Kind::Arc);
    CHECK(L[1].length() == doctest::Approx(2 * kPi * 0.7).epsilon(1e-4));
    CHECK(R[1].length() == doctest::Approx(2 * kPi * 0.3).epsilon(1e-4));
    CHECK(norm(L[1].start - R[1].end) < 1e-9);
    CHECK(norm(L[1].end - Vec2{1, 0}) < 1e-9);
    // a body near the left arc is close to it, far from the right arc
    Vec2 mid = L[1].samples(10)[5];
    Body K{make_shape(Shape::disk(0.05)), mid + unit(mid - Vec2{2, 0}) * 0.1, 1};
    CHECK(L[1].distance(K) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(R[1].distance(K) > 0.3);
    CHECK(R[1].complement_distance(K) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("curve hosts measure distance to the sub-curve") {
    Curve c = Curve::from({{0, 0}, {1, 0}, {1, 1}});
    CHECK(c.length() == 2);
    CHECK(c.point_at(0.75) == Vec2{1, 0.5});
    CHECK(c.fraction_of({1.2, 0.5}) == doctest::Approx(0.75));
    Body K{make_shape(Shape::disk(0.1)), {0.5, 0.3}, 1};
    CHECK(c.gap(K).value == doctest::Approx(0.2));
    CHECK(c.sub(0.6, 1.0).gap(K).value == doctest::Approx(0.4));
    Host H = Host::of(c);
    Vec2 nrm = H.outward_normal(0.25);
    CHECK(nrm.y == doctest::Approx(-1));  // the region lies to the right, the host outside it
}

TEST_CASE("strictify approximates the r-ball hull") {
    // a 64-gon with large r is nearly unchanged
    std::vector<Vec2> g;
    for (int k = 0; k < 64; ++k) g.push_back(polar(2 * kPi * k / 64));
    auto S = strictify(Shape::polygon(g), 100, 256);
    for (int k = 0; k < 360; ++k) {
        Vec2 u = polar(2 * kPi * k / 360);
        double h0 = 0;
        for (Vec2 v : g) h0 = std::max(h0, dot(v, u));
        CHECK(S.support(u) >= h0 - 1e-12);
        CHECK(S.support(u) <= h0 + 1e-3);
    }
    // unit square, r = 10: sides bulge by r - sqrt(r^2 - 1/4)
    auto sq = Shape::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    auto T = strictify(sq, 10, 512);
    double bulge = 10 - std::sqrt(100 - 0.25);
    CHECK(T.support({0, -1}) == doctest::Approx(bulge).epsilon(1e-4));
    CHECK(T.support({1, 1}) == doctest::Approx(2).epsilon(1e-9));
    // strictly convex: no collinear triples
    const auto& V = T.vertices();
    for (std::size_t i = 0; i < V.size(); ++i)
        CHECK(cross(V[(i + 1) % V.size()] - V[i], V[(i + 2) % V.size()] - V[(i + 1) % V.size()]) > 0);
    // a segment gives a lens of two arcs of radius r
    auto seg = Shape::segment({-1, 0}, {1, 0});
    auto lens = strictify(seg, 5, 512);
    CHECK(lens.support({0, 1}) == doctest::Approx(5 - std::sqrt(24)).epsilon(1e-4));
    // containment by random r-disks containing the body
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-6, 6);
    for (int rep = 0; rep < 2000; ++rep) {
        Vec2 c{0.5 + U(rng) * 0.5, 0.5 + U(rng) * 0.5};
        bool holds = true;
        for (Vec2 v : sq.vertices()) holds = holds && norm(v - c) <= 10;
        if (!holds) continue;
        for (Vec2 v : T.vertices()) CHECK(norm(v - c) <= 10 + 1e-9);
    }
    CHECK_THROWS_AS(strictify(sq, 0.5, 64), GeometryError);
    // a rounded body keeps its rounding
    auto rs = strictify(Shape::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0.2), 10, 256);
    CHECK(rs.rounding() == 0.2);
}

TEST_CASE("enclosing circle and convex hull") {
    auto [c, r] = enclosing_circle({{0, 0}, {2, 0}, {1, 0.2}});
    CHECK(c.x == doctest::Approx(1));
    CHECK(r == doctest::Approx(1));
    auto [c2, r2] = enclosing_circle({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.5, 0.5}});
    CHECK(r2 == doctest::Approx(std::sqrt(0.5)));
    (void)c2;
    auto h = convex_hull({{0, 0}, {1, 0}, {2, 0}, {2, 2}, {1, 1}, {0, 2}});
    CHECK(h.size() == 4);
}
