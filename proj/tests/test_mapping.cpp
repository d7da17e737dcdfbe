#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "homothet/mapping.hpp"

using namespace homothet;

namespace {

double svd_ratio(const Mat2& M) {
    Eigen::Matrix2d E;
    E << M.a, M.b, M.c, M.d;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(E);
    auto s = svd.singularValues();
    return s(0) / s(1);
}

Domain square_minus_hole() {
    Domain D;
    D.outer = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    D.holes.push_back({{0.35, 0.35}, {0.65, 0.35}, {0.65, 0.65}, {0.35, 0.65}});
    D.marks = {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}};
    return D;
}

}  // namespace

TEST_CASE("dilatation agrees with the singular value ratio") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int k = 0; k < 500; ++k) {
        Mat2 M{U(rng), U(rng), U(rng), U(rng)};
        if (std::abs(M.det()) < 1e-3) continue;
        CHECK(dilatation(M) == doctest::Approx(svd_ratio(M)).epsilon(1e-10));
    }
    CHECK(dilatation(Mat2::rotation(0.7)) == doctest::Approx(1));
    CHECK(dilatation(Mat2{3, 0, 0, 3}) == doctest::Approx(1));
    CHECK(dilatation(Mat2{1, 0, 0, -1}) == doctest::Approx(1));  // reflection
    CHECK(dilatation(Mat2{2, 0, 0, 0.5}) == doctest::Approx(4));
}

TEST_CASE("affine piece from the equilateral triangle to a right triangle") {
    double h = std::sqrt(3.0) / 2;
    auto P = affine_piece({Vec2{0, 0}, Vec2{1, 0}, Vec2{0.5, h}}, {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 2}});
    CHECK(P.positive);
    // the linear part maps (1,0) -> (1,0) and (1/2, h) -> (0, 2)
    Mat2 want{1, -0.5 / h, 0, 2 / h};
    CHECK(P.A.a == doctest::Approx(want.a));
    CHECK(P.A.b == doctest::Approx(want.b));
    CHECK(P.A.c == doctest::Approx(want.c));
    CHECK(P.A.d == doctest::Approx(want.d));
    CHECK(P.dilatation == doctest::Approx(svd_ratio(want)));

    auto S = affine_piece({Vec2{0, 0}, Vec2{1, 0}, Vec2{0.5, h}}, {Vec2{1, 1}, Vec2{1, 3}, Vec2{1 - 2 * h, 2}});
    CHECK(S.dilatation == doctest::Approx(1));
    CHECK(S.positive);
    auto F = affine_piece({Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}}, {Vec2{0, 0}, Vec2{0, 1}, Vec2{1, 0}});
    CHECK_FALSE(F.positive);
}

TEST_CASE("Beltrami matrix and its ellipse") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-0.6, 0.6);
    for (int k = 0; k < 50; ++k) {
        Complex mu{U(rng), U(rng)};
        if (std::abs(mu) > 0.8) continue;
        Mat2 A = beltrami_matrix(mu);
        // xi + mu conj(xi) on a sample vector
        Complex xi{0.3, -1.1};
        Complex img = xi + mu * std::conj(xi);
        Vec2 v = A * Vec2{xi.real(), xi.imag()};
        CHECK(v.x == doctest::Approx(img.real()));
        CHECK(v.y == doctest::Approx(img.imag()));
        double K = (1 + std::abs(mu)) / (1 - std::abs(mu));
        CHECK(dilatation(A) == doctest::Approx(K));
        // A maps the ellipse onto the unit disk: support of A(E) is 1
        Shape E = ellipse_of_mu(mu);
        for (int q = 0; q < 16; ++q) {
            Vec2 u = polar(q * std::numbers::pi / 8);
            CHECK(E.support(A.transpose() * u) == doctest::Approx(1).epsilon(1e-9));
        }
    }
}

TEST_CASE("ellipse field interpolation") {
    EllipseField f;
    f.z_axes = {std::vector<double>{0, 1}, std::vector<double>{0, 2}};
    f.mu = {Complex{0, 0}, Complex{0.2, 0}, Complex{0.1, 0}, Complex{0.3, 0.1}};
    CHECK_NOTHROW(f.check());
    // bilinear by hand
    auto want = [&](double x, double y) {
        double s = std::clamp(x, 0.0, 1.0), t = std::clamp(y / 2, 0.0, 1.0);
        return (1 - s) * (1 - t) * f.mu[0] + (1 - s) * t * f.mu[1] + s * (1 - t) * f.mu[2] + s * t * f.mu[3];
    };
    for (Vec2 z : {Vec2{0, 0}, Vec2{0.25, 0.5}, Vec2{0.9, 1.7}, Vec2{1, 2}, Vec2{-3, 5}, Vec2{2, -1}}) {
        Complex got = f.at(z, {0, 0});
        CHECK(std::abs(got - want(z.x, z.y)) < 1e-14);
    }
    CHECK(f.max_abs() == doctest::Approx(std::abs(Complex{0.3, 0.1})));
    CHECK_FALSE(f.depends_on_w());
    CHECK(EllipseField::constant({0.2, 0}).at({5, 5}, {1, 1}) == Complex{0.2, 0});

    EllipseField bad = f;
    bad.mu[3] = {1.2, 0};
    CHECK_THROWS(bad.check());
    bad = f;
    bad.mu.pop_back();
    CHECK_THROWS(bad.check());
    bad = f;
    bad.z_axes[0] = {1, 0};
    CHECK_THROWS(bad.check());
}

TEST_CASE("foliation segments and direction jumps") {
    auto S = foliation_field([](Vec2) { return Vec2{1, 0}; }, 2.0)({0.3, 0.4});
    CHECK(S->is_degenerate());
    CHECK(S->diameter() == doctest::Approx(2));
    CHECK(S->support({1, 0}) == doctest::Approx(1));
    CHECK(S->support({0, 1}) == doctest::Approx(0));
    CHECK(direction_jump([](Vec2) { return Vec2{1, 0}; }, {0, 0}, {1, 1}, 10) == doctest::Approx(0));
    // lines are unoriented: flipping the direction is no jump
    CHECK(direction_jump([](Vec2 p) { return p.x < 0.5 ? Vec2{1, 0} : Vec2{-1, 0}; }, {0, 0}, {1, 1}, 10) < 1e-12);
    double radial = direction_jump([](Vec2 p) { return unit(p - Vec2{0.5, 0.5}); }, {0, 0}, {1, 1}, 11);
    CHECK(radial > 1.0);
}

TEST_CASE("map of the hexagonal packing onto itself is the identity") {
    Domain D = square_minus_hole();
    auto d = hexify(D, 0.08, {0.2, 0.2});
    auto disk = make_shape(Shape::disk(1));
    std::vector<Body> bodies;
    for (const auto& C : d.circles) bodies.push_back(Body{disk, C.center, d.eps / 2});
    for (MapMode mode : {MapMode::Centers, MapMode::Refined}) {
        auto f = build_map(d, bodies, mode);
        CHECK(f.flipped == 0);
        CHECK_FALSE(f.pieces.empty());
        for (const auto& P : f.pieces) CHECK(P.dilatation == doctest::Approx(1).epsilon(1e-9));
        Vec2 p{0.23, 0.19};
        CHECK(norm(f.apply(p) - p) < 1e-12);
        auto st = dilatation_report(f, erosion(D, 0.05));
        CHECK(st.max == doctest::Approx(1));
        CHECK(st.pieces > 0);
        // composing with a linear map multiplies through
        Mat2 M{2, 0.3, 0, 1};
        auto g = compose(f, M);
        for (const auto& P : g.pieces) CHECK(P.dilatation == doctest::Approx(svd_ratio(M)));
        CHECK(norm(g.apply(p) - M * p) < 1e-12);
    }
    CHECK_THROWS(dilatation_report(build_map(d, bodies, MapMode::Centers), [](Vec2) { return false; }));
    auto ring = resolution_and_ring_report(d, bodies);
    CHECK(ring.max_diameter == doctest::Approx(0.08));
}

TEST_CASE("body Hausdorff distance") {
    auto disk = make_shape(Shape::disk(1));
    Body A{disk, {0, 0}, 1}, B{disk, {0.3, 0}, 1}, C{disk, {0, 0}, 1.5};
    CHECK(body_hausdorff(A, B) == doctest::Approx(0.3).epsilon(1e-3));
    CHECK(body_hausdorff(A, C) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(body_hausdorff(A, A) == doctest::Approx(0));
}

TEST_CASE("erosion and default seed") {
    Domain D = square_minus_hole();
    auto core = erosion(D, 0.1);
    CHECK(core({0.2, 0.2}));
    CHECK_FALSE(core({0.05, 0.5}));
    CHECK_FALSE(core({0.5, 0.5}));
    CHECK_FALSE(core({0.3, 0.5}));
    Vec2 s = default_seed(D);
    CHECK(D.contains(s));
    CHECK(D.boundary_distance(s) > 0.17);
}
