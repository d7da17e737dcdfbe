#include <doctest.h>

#include <cmath>
#include <numbers>
#include <regex>

#include "homothet/io.hpp"

using namespace homothet;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

bool same_support(const Shape& a, const Shape& b) {
    for (int k = 0; k < 24; ++k) {
        Vec2 u = polar(k * std::numbers::pi / 12);
        if (std::abs(a.support(u) - b.support(u)) > 1e-12) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("triangulation JSON round trip and schema errors") {
    auto T = octahedron();
    auto U = triangulation_from_json(to_json(T));
    CHECK(to_json(U) == to_json(T));
    CHECK(U.vertex_count() == 6);

    auto j = Json::parse(R"({"faces": [[0, 1, 3], [1, 2, 3], [2, 0, 3], [0, 2, 1]], "root": [0, 1, 2]})");
    CHECK(triangulation_from_json(j).vertex_count() == 4);
    CHECK(error_of([&] { triangulation_from_json(Json::parse(R"({"root": [0, 1, 2]})")); }).find("'faces'") !=
          std::string::npos);
    auto bad = j;
    bad["faces"][1] = Json::array({1, 2});
    CHECK(error_of([&] { triangulation_from_json(bad); }).find("faces[1]") != std::string::npos);
    bad = j;
    bad["vertices"] = 7;
    CHECK(error_of([&] { triangulation_from_json(bad); }).find("'vertices'") != std::string::npos);
    bad = j;
    bad["root"] = Json::array({0, 1, 3});
    CHECK_THROWS_AS(triangulation_from_json(bad), TriangulationError);
}

TEST_CASE("boundary JSON") {
    auto B = boundary_from_json(Json::parse(R"({"polyline": [[0, 0], [1, 0], [1, 1], [0, 1]], "splits": [0, 1, 2]})"));
    CHECK(B.z1 == Vec2{0, 0});
    CHECK(B.z3 == Vec2{1, 1});
    auto C = boundary_from_json(to_json(B));
    CHECK(C.polyline == B.polyline);
    CHECK(C.splits == B.splits);

    auto S = boundary_from_json(Json::parse(R"({"tangent_circles": [[0, 0, 1], [2, 0, 1], [1, 1.7320508075688772, 1]]})"));
    CHECK(S.mode == JordanBoundary::Mode::TangentCircles);
    auto S2 = boundary_from_json(to_json(S));
    for (int k = 0; k < 3; ++k) CHECK(norm(S2.P[k].body.center() - S.P[k].body.center()) < 1e-12);

    // domain-style target with marks
    auto D = boundary_from_json(Json::parse(R"({"outer": [[0, 0], [1, 0], [1, 1], [0, 1]], "marks": [[0, 0], [1, 0], [1, 1]]})"));
    CHECK(D.z2 == Vec2{1, 0});
    CHECK(error_of([] { boundary_from_json(Json::parse(R"({"polyline": [[0, 0]]})")); }).find("'splits'") !=
          std::string::npos);
}

TEST_CASE("prototype JSON") {
    auto d = prototype_from_json(Json::parse(R"({"name": "d", "disk": 2})"));
    CHECK(d->is_disk());
    CHECK(d->diameter() == doctest::Approx(4));
    auto e = prototype_from_json(Json::parse(R"({"name": "e", "ellipse": [2, 1, 30]})"));
    CHECK(e->kind() == Shape::Kind::Ellipse);
    CHECK(e->diameter() == doctest::Approx(4));
    auto r = prototype_from_json(Json::parse(R"({"name": "r", "vertices": [[0, 0], [1, 0], [0, 1]], "rounding": 0.2})"));
    auto s = prototype_from_json(Json::parse(R"({"name": "s", "vertices": [[-1, 0], [1, 0]]})"));
    CHECK(s->is_degenerate());
    for (const auto& p : {d, e, r, s}) {
        auto q = prototype_from_json(to_json(*p));
        CHECK(q->name() == p->name());
        CHECK(same_support(*q, *p));
    }
    CHECK(error_of([] { prototype_from_json(Json::parse(R"({"disk": 1})")); }).find("'name'") != std::string::npos);
    CHECK(error_of([] { prototype_from_json(Json::parse(R"({"name": "x", "disk": -1})")); }).find("'disk'") !=
          std::string::npos);
    CHECK(error_of([] { prototype_from_json(Json::parse(R"({"name": "x"})")); }).find("'vertices'") !=
          std::string::npos);
}

TEST_CASE("prescriptions with assignments") {
    auto T = octahedron();
    auto j = Json::parse(R"({
        "prototypes": [{"name": "disk", "disk": 1}, {"name": "sq", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}],
        "assign": {"default": "sq", "vertices": {"4": "disk"}}})");
    auto P = prescriptions_from_json(j, T);
    REQUIRE(P.size() == 6);
    CHECK(P[3].name == "sq");
    CHECK(P[4].name == "disk");
    CHECK(P[5].name == "sq");
    auto one = prescriptions_from_json(Json::parse(R"({"name": "disk", "disk": 1})"), T);
    CHECK(one[5].name == "disk");
    j["assign"]["vertices"]["9"] = "disk";
    CHECK(error_of([&] { prescriptions_from_json(j, T); }).find("out of range") != std::string::npos);
    j["assign"]["vertices"].erase("9");
    j["assign"]["default"] = "nope";
    CHECK(error_of([&] { prescriptions_from_json(j, T); }).find("unknown prototype") != std::string::npos);
}

TEST_CASE("domain and field JSON") {
    auto j = Json::parse(R"({"outer": [[0, 0], [1, 0], [1, 1], [0, 1]],
        "holes": [[[0.35, 0.35], [0.65, 0.35], [0.65, 0.65], [0.35, 0.65]]],
        "marks": [[0, 0], [1, 0], [1, 1]]})");
    Domain D = domain_from_json(j);
    CHECK(D.holes.size() == 1);
    CHECK(to_json(domain_from_json(to_json(D))) == to_json(D));
    auto bad = j;
    bad["marks"].erase(2);
    CHECK(error_of([&] { domain_from_json(bad); }).find("'marks'") != std::string::npos);

    auto f = ellipse_field_from_json(
        Json::parse(R"({"z_grid": [[0, 1], [0, 1]], "mu": [[0, 0], [0.1, 0], [0.1, 0], [0.2, 0.05]]})"));
    CHECK(std::abs(f.at({0.5, 0.5}, {}) - Complex{0.1, 0.0125}) < 1e-15);
    auto c = ellipse_field_from_json(Json::parse(R"({"mu": [0.2, 0]})"));
    CHECK(c.at({3, 3}, {}) == Complex{0.2, 0});
    CHECK_THROWS_AS(ellipse_field_from_json(Json::parse(R"({"z_grid": [[0, 1], [0]], "mu": [[0, 0]]})")),
                    SchemaError);

    double len = 0;
    auto dir = direction_field_from_json(Json::parse(R"({"type": "angle", "angle": 90, "length": 0.5})"), &len);
    CHECK(len == 0.5);
    CHECK(std::abs(dir({0, 0}).x) < 1e-15);
    auto rad = direction_field_from_json(Json::parse(R"({"type": "radial", "center": [1, 1]})"), &len);
    CHECK(norm(rad({1, 3}) - Vec2{0, 1}) < 1e-15);
    CHECK_THROWS_AS(direction_field_from_json(Json::parse(R"({"type": "spiral"})"), &len), SchemaError);

    auto H = hole_prescriptions_from_json(Json::parse(R"({"holes": [{"foliation": {"type": "horizontal"}}]})"), 2);
    REQUIRE(H.size() == 2);
    CHECK(H[0].field);
    CHECK(H[1].name == "slot");
    CHECK_THROWS_AS(hole_prescriptions_from_json(Json::parse(R"({"holes": [{}, {}, {}]})"), 2), SchemaError);
}

TEST_CASE("packing JSON round trip and SVG") {
    auto T = tetrahedron();
    auto B = boundary_from_json(Json::parse(R"({"tangent_circles": [[0, 0, 1], [2, 0, 1], [1, 1.7320508075688772, 1]]})"));
    auto P = prescriptions_from_json(Json::parse(R"({"name": "disk", "disk": 1})"), T);
    auto cfg = MonsterConfig::make(T, B, P);
    auto res = solve(cfg);
    Json j = packing_to_json(cfg, res);
    CHECK(j["status"] == "VALID");
    CHECK(j["vertices"][3]["prototype"] == "disk");
    CHECK(j["vertices"][3]["diameter"].get<double>() == doctest::Approx(2 / (3 + 2 * std::sqrt(3.0))));
    CHECK(j["contacts"].size() == 3);
    auto bodies = packing_bodies_from_json(Json::parse(j.dump()), 4);
    CHECK(bodies[3].alpha == res.body[3].alpha);
    CHECK(bodies[3].t == res.body[3].t);
    CHECK(validate_packing(cfg, bodies).status == Classification::Valid);
    CHECK(j.dump() == packing_to_json(cfg, solve(cfg)).dump());

    std::string svg = packing_svg(T, cfg.boundary.P, res.body);
    for (int v = 0; v < 4; ++v) CHECK(svg.find("id=\"v" + std::to_string(v) + "\"") != std::string::npos);
    CHECK(svg.find("fill=\"none\"") != std::string::npos);
    // every coordinate has exactly six decimals
    std::regex number(R"(-?\d+\.(\d+))");
    bool six = true;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), number); it != std::sregex_iterator(); ++it)
        six &= (*it)[1].length() == 6;
    CHECK(six);
    CHECK(svg.find("-0.000000") == std::string::npos);
}

TEST_CASE("a short pipeline run serializes") {
    PipelineInput in;
    in.source = domain_from_json(Json::parse(R"({"outer": [[0, 0], [1, 0], [1, 1], [0, 1]],
        "holes": [[[0.35, 0.35], [0.65, 0.35], [0.65, 0.65], [0.35, 0.65]]], "marks": [[0, 0], [1, 0], [1, 1]]})"));
    in.seed = default_seed(in.source);
    in.target.boundary = boundary_from_json(Json::parse(R"({"polyline": [[0, 0], [1, 0], [1, 1], [0, 1]], "splits": [0, 1, 2]})"));
    in.target.holes = {Prescription::of(make_shape(Shape::disk(1).set_name("disk")))};
    in.ladder = {0.08, 0.056};
    auto R = run_pipeline(in);
    REQUIRE(R.levels.size() == 2);
    for (const auto& L : R.levels) {
        CHECK(L.ok);
        CHECK(L.cycles == 2);
        CHECK(L.status == Classification::Valid);
    }
    Json j = pipeline_to_json(R);
    CHECK(j["levels"].size() == 2);
    CHECK(j["drift"].size() == 1);
    CHECK(j["levels"][1]["boundary_cycles"] == 2);
    std::string svg = target_svg(R.levels[1], in.target.boundary);
    CHECK(svg.find("<svg") == 0);
    CHECK(source_svg(R.levels[0].disc).find("id=\"v0\"") != std::string::npos);
}
