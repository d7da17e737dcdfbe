#include "homothet/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace homothet {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw SchemaError("field '" + field + "': " + what);
}

const Json& need(const Json& j, const char* field) {
    if (!j.is_object()) fail(field, "expected an object containing it");
    auto it = j.find(field);
    if (it == j.end()) fail(field, "missing");
    return *it;
}

double number(const Json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

int integer(const Json& j, const std::string& field) {
    if (!j.is_number_integer()) fail(field, "expected an integer");
    return j.get<int>();
}

Vec2 vec2(const Json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) fail(field, "expected [x, y]");
    return {number(j[0], field), number(j[1], field)};
}

std::vector<Vec2> points(const Json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected a list of [x, y]");
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(vec2(j[k], field + "[" + std::to_string(k) + "]"));
    return out;
}

std::vector<double> numbers(const Json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) fail(field, "expected a non-empty list of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number(x, field));
    return out;
}

Json vec(Vec2 p) { return Json::array({p.x, p.y}); }

Json pts_json(const std::vector<Vec2>& P) {
    Json a = Json::array();
    for (Vec2 p : P) a.push_back(vec(p));
    return a;
}

// SVG number: fixed, rounded to 1e-6, no negative zero
std::string num(double x) {
    double r = std::round(x * 1e6) / 1e6;
    if (r == 0) r = 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", r);
    return buf;
}

struct Svg {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    std::ostringstream body;
    void see(Vec2 p) {
        xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
    }
    std::string path(const std::vector<Vec2>& P, bool closed) {
        std::string d;
        for (std::size_t k = 0; k < P.size(); ++k) {
            see(P[k]);
            d += (k ? " L " : "M ") + num(P[k].x) + " " + num(P[k].y);
        }
        if (closed) d += " Z";
        return d;
    }
    std::string str() const {
        double pad = 0.02 * std::max(xmax - xmin, ymax - ymin);
        if (!(pad > 0)) pad = 1;
        std::ostringstream o;
        o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(xmin - pad) << " " << num(-ymax - pad)
          << " " << num(xmax - xmin + 2 * pad) << " " << num(ymax - ymin + 2 * pad) << "\">\n";
        o << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << num(pad / 10) << "\">\n";
        o << body.str();
        o << "</g>\n</svg>\n";
        return o.str();
    }
};

std::vector<Vec2> body_outline(const Body& B) {
    if (B.is_point()) return {B.t};
    return B.outline(96);
}

void draw_host(Svg& s, const Host& H, const std::string& id) {
    s.body << "<g id=\"" << id << "\" stroke=\"black\">";
    switch (H.kind) {
        case Host::Kind::Curve: s.body << "<path d=\"" << s.path(H.curve.pts, false) << "\"/>"; break;
        case Host::Kind::Body: s.body << "<path d=\"" << s.path(body_outline(H.body), true) << "\"/>"; break;
        default: {
            std::vector<Vec2> c;
            for (int k = 0; k < 256; ++k) c.push_back(H.ext.o + polar(2 * std::numbers::pi * k / 256) * H.ext.R);
            s.body << "<path d=\"" << s.path(c, true) << "\"/>";
        }
    }
    s.body << "</g>\n";
}

}  // namespace

// ---------------------------------------------------------------- files

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write " + path);
    out << text;
}

// ---------------------------------------------------------------- triangulations

Triangulation triangulation_from_json(const Json& j) {
    const Json& jf = need(j, "faces");
    if (!jf.is_array()) fail("faces", "expected a list of [i, j, k]");
    std::vector<Face> faces;
    int hi = -1;
    for (std::size_t k = 0; k < jf.size(); ++k) {
        std::string f = "faces[" + std::to_string(k) + "]";
        if (!jf[k].is_array() || jf[k].size() != 3) fail(f, "expected [i, j, k]");
        Face F{integer(jf[k][0], f), integer(jf[k][1], f), integer(jf[k][2], f)};
        for (int v : F) {
            if (v < 0) fail(f, "negative vertex index");
            hi = std::max(hi, v);
        }
        faces.push_back(F);
    }
    const Json& jr = need(j, "root");
    if (!jr.is_array() || jr.size() != 3) fail("root", "expected [a, b, c]");
    std::array<int, 3> root{integer(jr[0], "root"), integer(jr[1], "root"), integer(jr[2], "root")};
    if (j.contains("vertices")) {
        const Json& jv = j["vertices"];
        int n = jv.is_array() ? static_cast<int>(jv.size()) : integer(jv, "vertices");
        if (n != hi + 1) fail("vertices", "count " + std::to_string(n) + " does not match the faces (" + std::to_string(hi + 1) + ")");
    }
    return Triangulation::from_faces(std::move(faces), root);
}

Json to_json(const Triangulation& T) {
    Json j;
    j["vertices"] = T.vertex_count();
    Json f = Json::array();
    for (const Face& F : T.faces()) f.push_back(Json::array({F[0], F[1], F[2]}));
    j["faces"] = f;
    j["root"] = Json::array({T.a(), T.b(), T.c()});
    return j;
}

// ---------------------------------------------------------------- boundaries

JordanBoundary boundary_from_json(const Json& j) {
    if (j.contains("tangent_circles")) {
        const Json& c = j["tangent_circles"];
        if (!c.is_array() || c.size() != 3) fail("tangent_circles", "expected three [x, y, r]");
        std::array<Vec2, 3> o;
        std::array<double, 3> r;
        for (int k = 0; k < 3; ++k) {
            if (!c[k].is_array() || c[k].size() != 3) fail("tangent_circles", "expected [x, y, r]");
            o[k] = {number(c[k][0], "tangent_circles"), number(c[k][1], "tangent_circles")};
            r[k] = number(c[k][2], "tangent_circles");
        }
        return JordanBoundary::from_tangent_circles(o, r);
    }
    if (j.contains("outer")) {
        Domain D = domain_from_json(j);
        std::array<int, 3> sp;
        auto pts = D.marked_outer(&sp);
        return JordanBoundary::from_polyline(pts, sp);
    }
    auto pts = points(need(j, "polyline"), "polyline");
    const Json& s = need(j, "splits");
    if (!s.is_array() || s.size() != 3) fail("splits", "expected [i1, i2, i3]");
    return JordanBoundary::from_polyline(pts, {integer(s[0], "splits"), integer(s[1], "splits"), integer(s[2], "splits")});
}

Json to_json(const JordanBoundary& B) {
    Json j;
    if (B.mode == JordanBoundary::Mode::Polyline) {
        j["polyline"] = pts_json(B.polyline);
        j["splits"] = Json::array({B.splits[0], B.splits[1], B.splits[2]});
    } else if (B.mode == JordanBoundary::Mode::TangentCircles) {
        Json c = Json::array();
        for (int k = 0; k < 3; ++k) {
            Vec2 o = B.P[k].body.center();
            c.push_back(Json::array({o.x, o.y, B.P[k].body.diameter() / 2}));
        }
        j["tangent_circles"] = c;
    } else {
        j["z"] = Json::array({vec(B.z1), vec(B.z2), vec(B.z3)});
    }
    return j;
}

// ---------------------------------------------------------------- prototypes

ShapePtr prototype_from_json(const Json& j) {
    if (!j.is_object()) fail("prototype", "expected an object");
    std::string name = j.contains("name") ? j["name"].get<std::string>() : "";
    if (name.empty()) fail("name", "prototype needs a name");
    try {
        Shape s = Shape::disk(1);
        if (j.contains("disk")) {
            double r = number(j["disk"], "disk");
            if (!(r > 0)) fail("disk", "radius must be positive");
            s = Shape::disk(r);
        } else if (j.contains("ellipse")) {
            auto v = numbers(j["ellipse"], "ellipse");
            if (v.size() != 3) fail("ellipse", "expected [a, b, angle_degrees]");
            s = Shape::ellipse(v[0], v[1], v[2] * std::numbers::pi / 180);
        } else if (j.contains("ellipse_matrix")) {
            auto v = numbers(j["ellipse_matrix"], "ellipse_matrix");
            if (v.size() != 4) fail("ellipse_matrix", "expected [a, b, c, d]");
            s = Shape::ellipse(Mat2{v[0], v[1], v[2], v[3]});
        } else {
            auto V = points(need(j, "vertices"), "vertices");
            double rho = j.contains("rounding") ? number(j["rounding"], "rounding") : 0.0;
            s = V.size() == 2 ? Shape::segment(V[0], V[1], rho) : Shape::polygon(V, rho);
        }
        s.set_name(name);
        return make_shape(std::move(s));
    } catch (const GeometryError& e) {
        fail("prototype '" + name + "'", e.what());
    }
}

Json to_json(const Shape& S) {
    Json j;
    j["name"] = S.name();
    if (S.kind() == Shape::Kind::Ellipse) {
        const Mat2& L = S.ellipse_matrix();
        j["ellipse_matrix"] = Json::array({L.a, L.b, L.c, L.d});
    } else {
        j["vertices"] = pts_json(S.vertices());
        if (S.rounding() > 0) j["rounding"] = S.rounding();
    }
    return j;
}

std::vector<Prescription> prescriptions_from_json(const Json& j, const Triangulation& T) {
    std::vector<ShapePtr> protos;
    const Json* assign = nullptr;
    if (j.is_array()) {
        for (const auto& p : j) protos.push_back(prototype_from_json(p));
    } else if (j.is_object() && j.contains("prototypes")) {
        const Json& list = j["prototypes"];
        if (!list.is_array()) fail("prototypes", "expected a list");
        for (const auto& p : list) protos.push_back(prototype_from_json(p));
        if (j.contains("assign")) assign = &j["assign"];
    } else {
        protos.push_back(prototype_from_json(j));
    }
    if (protos.empty()) fail("prototypes", "no prototypes given");
    auto by_name = [&](const std::string& n) {
        for (auto& p : protos)
            if (p->name() == n) return p;
        fail("assign", "unknown prototype '" + n + "'");
    };
    ShapePtr def = protos.front();
    std::vector<Prescription> out(T.vertex_count());
    if (assign && assign->contains("default")) def = by_name((*assign)["default"].get<std::string>());
    for (int v = 0; v < T.vertex_count(); ++v) out[v] = Prescription::of(def);
    if (assign && assign->contains("vertices")) {
        const Json& m = (*assign)["vertices"];
        if (!m.is_object()) fail("assign.vertices", "expected {\"id\": name}");
        for (auto it = m.begin(); it != m.end(); ++it) {
            int v = -1;
            try {
                v = std::stoi(it.key());
            } catch (const std::exception&) {
                fail("assign.vertices", "bad vertex id '" + it.key() + "'");
            }
            if (v < 0 || v >= T.vertex_count()) fail("assign.vertices", "vertex " + it.key() + " out of range");
            out[v] = Prescription::of(by_name(it.value().get<std::string>()));
        }
    }
    return out;
}

// ---------------------------------------------------------------- domains

Domain domain_from_json(const Json& j) {
    Domain D;
    D.outer = points(need(j, "outer"), "outer");
    if (j.contains("holes")) {
        const Json& h = j["holes"];
        if (!h.is_array()) fail("holes", "expected a list of polylines");
        for (std::size_t k = 0; k < h.size(); ++k) D.holes.push_back(points(h[k], "holes[" + std::to_string(k) + "]"));
    }
    auto m = points(need(j, "marks"), "marks");
    if (m.size() != 3) fail("marks", "expected three points");
    D.marks = {m[0], m[1], m[2]};
    try {
        D.check();
    } catch (const DiscretizeError& e) {
        throw SchemaError(e.what());
    }
    return D;
}

Json to_json(const Domain& D) {
    Json j;
    j["outer"] = pts_json(D.outer);
    Json h = Json::array();
    for (const auto& F : D.holes) h.push_back(pts_json(F));
    j["holes"] = h;
    j["marks"] = pts_json({D.marks[0], D.marks[1], D.marks[2]});
    return j;
}

// ---------------------------------------------------------------- fields

EllipseField ellipse_field_from_json(const Json& j) {
    EllipseField f;
    auto axes = [&](const char* field, std::array<std::vector<double>, 2>& out) {
        if (!j.contains(field)) return;
        const Json& g = j[field];
        if (!g.is_array() || g.size() != 2) fail(field, "expected [[x...], [y...]]");
        out[0] = numbers(g[0], field);
        out[1] = numbers(g[1], field);
    };
    axes("z_grid", f.z_axes);
    axes("w_grid", f.w_axes);
    const Json& m = need(j, "mu");
    if (!m.is_array()) fail("mu", "expected [[re, im], ...]");
    f.mu.clear();
    if (m.size() == 2 && m[0].is_number()) {
        f.mu.push_back({number(m[0], "mu"), number(m[1], "mu")});
    } else {
        for (std::size_t k = 0; k < m.size(); ++k) {
            Vec2 c = vec2(m[k], "mu[" + std::to_string(k) + "]");
            f.mu.push_back({c.x, c.y});
        }
    }
    try {
        f.check();
    } catch (const PackerError& e) {
        fail("mu", e.what());
    }
    return f;
}

DirectionField direction_field_from_json(const Json& j, double* length) {
    std::string type = j.contains("type") ? j["type"].get<std::string>() : "horizontal";
    if (length) *length = j.contains("length") ? number(j["length"], "length") : 1.0;
    if (length && !(*length > 0)) fail("length", "must be positive");
    if (type == "horizontal") return [](Vec2) { return Vec2{1, 0}; };
    if (type == "angle") {
        double a = number(need(j, "angle"), "angle") * std::numbers::pi / 180;
        return [a](Vec2) { return polar(a); };
    }
    if (type == "radial") {
        Vec2 c = vec2(need(j, "center"), "center");
        return [c](Vec2 p) { return p == c ? Vec2{1, 0} : unit(p - c); };
    }
    fail("type", "unknown foliation type '" + type + "'");
}

std::vector<Prescription> hole_prescriptions_from_json(const Json& j, std::size_t holes) {
    const Json& list = need(j, "holes");
    if (!list.is_array()) fail("holes", "expected a list");
    if (list.size() != holes && list.size() != 1)
        fail("holes", "expected " + std::to_string(holes) + " prescriptions, got " + std::to_string(list.size()));
    std::vector<Prescription> out;
    for (std::size_t k = 0; k < holes; ++k) {
        const Json& e = list[list.size() == 1 ? 0 : k];
        if (e.contains("prototype")) {
            out.push_back(Prescription::of(prototype_from_json(e["prototype"])));
        } else if (e.contains("foliation")) {
            double len = 1;
            auto dir = direction_field_from_json(e["foliation"], &len);
            out.push_back(Prescription::of(foliation_field(dir, len), "slot"));
        } else {
            fail("holes[" + std::to_string(k) + "]", "expected \"prototype\" or \"foliation\"");
        }
    }
    return out;
}

// ---------------------------------------------------------------- reports

Json to_json(const ValidationReport& R) {
    Json j;
    j["status"] = to_string(R.status);
    j["worst_edge_gap"] = R.worst_edge;
    j["worst_overlap"] = R.worst_overlap;
    Json pts = Json::array();
    for (int v : R.points) pts.push_back(v);
    j["degenerate_bodies"] = pts;
    Json extra = Json::array();
    for (auto& e : R.extra) extra.push_back({{"u", e.u}, {"v", e.v}, {"gap", e.gap}});
    j["extra_contacts"] = extra;
    j["message"] = R.message;
    return j;
}

Json packing_to_json(const MonsterConfig& cfg, const PackingResult& P) {
    const Triangulation& T = cfg.T;
    Json j;
    j["status"] = to_string(P.report.status);
    j["method"] = P.stats.method;
    j["boundary"] = to_json(cfg.boundary);
    std::vector<const Shape*> seen;
    Json shapes = Json::array();
    auto shape_index = [&](const ShapePtr& s) {
        for (std::size_t k = 0; k < seen.size(); ++k)
            if (seen[k] == s.get()) return static_cast<int>(k);
        seen.push_back(s.get());
        shapes.push_back(to_json(*s));
        return static_cast<int>(seen.size()) - 1;
    };
    Json verts = Json::array();
    for (int v = 0; v < T.vertex_count(); ++v) {
        Json e;
        e["id"] = v;
        if (!cfg.free(v)) {
            e["role"] = v == T.a() ? "a" : v == T.b() ? "b" : "c";
        } else {
            const Body& B = P.body[v];
            e["role"] = "body";
            e["prototype"] = P.shape_name[v];
            e["shape"] = B.shape ? shape_index(B.shape) : -1;
            e["scale"] = B.alpha;
            e["translation"] = vec(B.t);
            e["center"] = vec(B.center());
            e["diameter"] = B.diameter();
        }
        verts.push_back(e);
    }
    j["shapes"] = shapes;
    j["vertices"] = verts;
    Json contacts = Json::array();
    for (const auto& e : P.report.edges) {
        Json c{{"u", e.u}, {"v", e.v}, {"gap", e.gap}};
        const Host* hu = cfg.free(e.u) ? nullptr : &cfg.boundary.P[e.u == T.a() ? 0 : e.u == T.b() ? 1 : 2];
        const Host* hv = cfg.free(e.v) ? nullptr : &cfg.boundary.P[e.v == T.a() ? 0 : e.v == T.b() ? 1 : 2];
        Gap g;
        if (hu) g = hu->gap(P.body[e.v]);
        else if (hv) g = hv->gap(P.body[e.u]);
        else g = signed_distance(P.body[e.u], P.body[e.v]);
        c["point"] = vec((g.pa + g.pb) * 0.5);
        contacts.push_back(c);
    }
    j["contacts"] = contacts;
    j["validation"] = to_json(P.report);
    j["stats"] = {{"sweeps", P.stats.sweeps},
                  {"restarts", P.stats.restarts},
                  {"newton_iterations", P.stats.newton_iterations},
                  {"residual", P.stats.residual},
                  {"newton_converged", P.stats.newton_converged}};
    j["diagnostics"] = P.diagnostics;
    return j;
}

std::vector<Body> packing_bodies_from_json(const Json& j, int n) {
    std::vector<ShapePtr> shapes;
    for (const auto& s : need(j, "shapes")) shapes.push_back(prototype_from_json(s));
    const Json& verts = need(j, "vertices");
    if (!verts.is_array() || static_cast<int>(verts.size()) != n)
        fail("vertices", "expected " + std::to_string(n) + " entries");
    std::vector<Body> out(n);
    for (int v = 0; v < n; ++v) {
        const Json& e = verts[v];
        if (need(e, "role").get<std::string>() != "body") continue;
        int si = integer(need(e, "shape"), "shape");
        if (si >= static_cast<int>(shapes.size())) fail("shape", "index out of range");
        out[v].shape = si >= 0 ? shapes[si] : nullptr;
        out[v].alpha = number(need(e, "scale"), "scale");
        out[v].t = vec2(need(e, "translation"), "translation");
    }
    return out;
}

Json discretization_to_json(const HexDiscretization& d) {
    Json j;
    j["eps"] = d.eps;
    j["origin"] = vec(d.origin);
    j["seed_circle"] = d.seed;
    j["inner_count"] = d.inner_count;
    j["boundary_count"] = d.boundary_count;
    j["outside_count"] = d.outside_count;
    Json c = Json::array();
    for (const auto& C : d.circles)
        c.push_back({{"i", C.i}, {"j", C.j}, {"center", vec(C.center)},
                     {"kind", C.kind == HexDiscretization::Kind::Inner ? "inner" : "boundary"}});
    j["circles"] = c;
    return j;
}

Json to_json(const AugmentedTriangulation& A) {
    Json j;
    j["triangulation"] = to_json(A.T);
    j["nerve_count"] = A.nerve_count;
    j["hole_vertices"] = A.hole_vertex;
    j["outer_vertices"] = Json::array({A.outer_vertex[0], A.outer_vertex[1], A.outer_vertex[2]});
    j["R"] = A.cycles.R;
    j["S"] = A.cycles.S;
    j["hausdorff"] = A.cycles.hausdorff;
    j["split"] = Json::array({A.split[0], A.split[1], A.split[2]});
    return j;
}

Json pipeline_to_json(const PipelineReport& R) {
    Json j;
    j["core_radius"] = R.core_radius;
    j["target_diameter"] = R.target_diameter;
    Json levels = Json::array();
    for (const auto& L : R.levels) {
        Json e;
        e["eps"] = L.eps;
        e["ok"] = L.ok;
        e["error"] = L.error;
        e["inner_circles"] = L.inner;
        e["boundary_circles"] = L.boundary;
        e["vertices"] = L.vertices;
        e["boundary_cycles"] = L.cycles;
        e["status"] = to_string(L.status);
        e["method"] = L.method;
        e["residual"] = L.residual;
        e["dilatation"] = {{"max", L.dil.max}, {"mean", L.dil.mean}, {"pieces", L.dil.pieces}};
        e["max_diameter"] = L.ring.max_diameter;
        e["min_flower_ratio"] = L.ring.min_flower_ratio;
        e["flipped"] = L.flipped;
        Json holes = Json::array();
        for (const Body& B : L.holes) {
            Json h{{"center", vec(B.center())}, {"diameter", B.diameter()}, {"scale", B.alpha}, {"translation", vec(B.t)}};
            if (B.shape) h["shape"] = to_json(*B.shape);
            holes.push_back(h);
        }
        e["holes"] = holes;
        levels.push_back(e);
    }
    j["levels"] = levels;
    Json drift = Json::array();
    for (const auto& d : R.drift)
        drift.push_back({{"eps_from", d.eps0},
                         {"eps_to", d.eps1},
                         {"hole", d.hole},
                         {"center", d.center},
                         {"radius", d.radius},
                         {"hausdorff", d.hausdorff},
                         {"hole_radius", d.hole_radius},
                         {"relative_to_target", d.hausdorff / R.target_diameter},
                         {"relative_to_hole", d.hole_radius > 0 ? d.hausdorff / d.hole_radius : 0.0}});
    j["drift"] = drift;
    return j;
}

// ---------------------------------------------------------------- SVG

std::string packing_svg(const Triangulation& T, const std::array<Host, 3>& hosts, const std::vector<Body>& bodies) {
    Svg s;
    for (int k = 0; k < 3; ++k) draw_host(s, hosts[k], "v" + std::to_string(T.root()[k]));
    for (int v = 0; v < T.vertex_count(); ++v) {
        if (v == T.a() || v == T.b() || v == T.c()) continue;
        s.body << "<g id=\"v" << v << "\" stroke=\"navy\"><path d=\"" << s.path(body_outline(bodies[v]), true)
               << "\"/></g>\n";
    }
    return s.str();
}

std::string source_svg(const HexDiscretization& d) {
    Svg s;
    for (const Face& f : inner_faces(d))
        s.body << "<path stroke=\"gray\" d=\""
               << s.path({d.circles[f[0]].center, d.circles[f[1]].center, d.circles[f[2]].center}, true) << "\"/>\n";
    for (std::size_t k = 0; k < d.circles.size(); ++k) {
        const auto& C = d.circles[k];
        std::vector<Vec2> c;
        for (int q = 0; q < 48; ++q) c.push_back(C.center + polar(2 * std::numbers::pi * q / 48) * (d.eps / 2));
        s.body << "<g id=\"v" << k << "\" stroke=\"" << (d.inner(static_cast<int>(k)) ? "navy" : "darkred")
               << "\"><path d=\"" << s.path(c, true) << "\"/></g>\n";
    }
    return s.str();
}

std::string target_svg(const LevelReport& L, const JordanBoundary& target) {
    Svg s;
    for (const auto& P : L.map.pieces) {
        double t = std::clamp(P.dilatation - 1, 0.0, 1.0);
        int gb = static_cast<int>(std::lround(255 * (1 - t)));
        s.body << "<path stroke=\"none\" fill=\"rgb(255," << gb << "," << gb << ")\" d=\""
               << s.path({P.dst[0], P.dst[1], P.dst[2]}, true) << "\"/>\n";
    }
    const auto& T = L.aug.T;
    for (int k = 0; k < 3; ++k) draw_host(s, target.P[k], "v" + std::to_string(T.root()[k]));
    for (int v = 0; v < T.vertex_count(); ++v) {
        if (v == T.a() || v == T.b() || v == T.c()) continue;
        s.body << "<g id=\"v" << v << "\" stroke=\"navy\"><path d=\"" << s.path(body_outline(L.packing.body[v]), true)
               << "\"/></g>\n";
    }
    return s.str();
}

}  // namespace homothet
