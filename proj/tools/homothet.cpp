// homothet: packings of convex homothets with a prescribed nerve, and
// discrete (quasi)conformal maps of multiply connected domains built from them.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numbers>
#include <thread>

#include "homothet/io.hpp"

#ifndef HOMOTHET_VERSION
#define HOMOTHET_VERSION "dev"
#endif

using namespace homothet;

namespace {

struct Options {
    std::string triangulation, boundary, prototypes, packing, out, svg;
    std::string domain, target, holes, mu, foliation, svg_dir, core = "auto", seed_point, in;
    std::vector<double> ladder{0.08, 0.04, 0.02};
    double eps = 0.05;
    double eps_geom = Tolerances{}.geom, eps_contact = Tolerances{}.contact, eps_res = Tolerances{}.x;
    int restarts = Tolerances{}.restarts;
    std::uint64_t rng_seed = 1;
    std::string method = "auto";
};

int exit_code(Classification c) {
    switch (c) {
        case Classification::Valid: return 0;
        case Classification::DegenerateConforming: return 2;
        default: return 1;
    }
}

Tolerances tolerances(const Options& o) {
    if (!(o.eps_geom > 0) || !(o.eps_contact > 0) || !(o.eps_res > 0))
        throw SchemaError("tolerances must be positive");
    Tolerances t;
    t.geom = o.eps_geom;
    t.contact = o.eps_contact;
    t.x = o.eps_res;
    t.restarts = o.restarts;
    return t;
}

Json header(const std::string& command, Json config, std::uint64_t seed) {
    Json j;
    j["version"] = HOMOTHET_VERSION;
    j["command"] = command;
    j["config"] = std::move(config);
    j["rng_seed"] = seed;
    return j;
}

Json tol_json(const Options& o) {
    return {{"eps_geom", o.eps_geom}, {"eps_contact", o.eps_contact}, {"eps_res", o.eps_res}, {"restarts", o.restarts}};
}

Vec2 parse_point(const std::string& s) {
    double x, y;
    char tail;
    if (std::sscanf(s.c_str(), "%lf,%lf%c", &x, &y, &tail) != 2) throw SchemaError("--seed: expected x,y, got '" + s + "'");
    return {x, y};
}

void write_json(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

MonsterConfig load_config(const Options& o) {
    Triangulation T = triangulation_from_json(read_json_file(o.triangulation));
    JordanBoundary B = boundary_from_json(read_json_file(o.boundary));
    auto pres = prescriptions_from_json(read_json_file(o.prototypes), T);
    return MonsterConfig::make(T, std::move(B), std::move(pres), tolerances(o));
}

int cmd_pack(const Options& o) {
    MonsterConfig cfg = load_config(o);
    SolveOptions opt;
    opt.seed = o.rng_seed;
    if (o.method == "sweeps") opt.continuation = false;
    if (o.method == "continuation") opt.sweeps = false;
    PackingResult P = solve(cfg, opt);
    Json j = header("pack",
                    {{"triangulation", o.triangulation},
                     {"boundary", o.boundary},
                     {"prototypes", o.prototypes},
                     {"method", o.method},
                     {"tolerances", tol_json(o)}},
                    o.rng_seed);
    j["packing"] = packing_to_json(cfg, P);
    write_json(o.out, j);
    if (!o.svg.empty()) write_text_file(o.svg, packing_svg(cfg.T, cfg.boundary.P, P.body));
    std::cout << to_string(P.report.status) << " (" << P.stats.method << ", residual " << P.stats.residual << ")\n";
    return exit_code(P.report.status);
}

int cmd_validate(const Options& o) {
    MonsterConfig cfg = load_config(o);
    Json pj = read_json_file(o.packing);
    const Json& body = pj.contains("packing") ? pj["packing"] : pj;
    auto bodies = packing_bodies_from_json(body, cfg.T.vertex_count());
    for (int v = 0; v < cfg.T.vertex_count(); ++v)
        if (cfg.free(v) && !bodies[v].shape) throw SchemaError("vertices[" + std::to_string(v) + "]: missing body");
    ValidationReport R = validate_packing(cfg, bodies);
    std::cout << to_json(R).dump(2) << "\n";
    return exit_code(R.status);
}

int cmd_hexify(const Options& o) {
    Domain D = domain_from_json(read_json_file(o.domain));
    Vec2 seed = o.seed_point.empty() ? default_seed(D) : parse_point(o.seed_point);
    HexDiscretization d = hexify(D, o.eps, seed);
    Json j = header("hexify", {{"domain", o.domain}, {"eps", o.eps}, {"seed", Json::array({seed.x, seed.y})}}, 0);
    j["discretization"] = discretization_to_json(d);
    try {
        j["augmented"] = to_json(augmented_triangulation(d, D));
    } catch (const DiscretizeError& e) {
        j["augmented"] = nullptr;
        j["augment_error"] = e.what();
    }
    write_json(o.out, j);
    if (!o.svg.empty()) write_text_file(o.svg, source_svg(d));
    std::cout << d.inner_count << " inner, " << d.boundary_count << " boundary circles\n";
    return 0;
}

int threads_for(std::size_t levels) {
    int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("HOMOTHET_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, std::min(n, static_cast<int>(levels)));
}

int cmd_map(const Options& o) {
    PipelineInput in;
    in.source = domain_from_json(read_json_file(o.domain));
    in.seed = o.seed_point.empty() ? default_seed(in.source) : parse_point(o.seed_point);
    in.target.boundary = boundary_from_json(read_json_file(o.target));
    in.target.tol = tolerances(o);
    std::size_t nh = in.source.holes.size();
    if (!o.foliation.empty()) {
        double len = 1;
        Json f = read_json_file(o.foliation);
        auto dir = direction_field_from_json(f, &len);
        // sample the target's bounding box; a jump this large between grid
        // neighbors means the field is discontinuous (e.g. a radial center inside)
        const double inf = std::numeric_limits<double>::infinity();
        Vec2 lo{inf, inf}, hi{-inf, -inf};
        auto grow = [&](Vec2 p, double r) {
            lo = {std::min(lo.x, p.x - r), std::min(lo.y, p.y - r)};
            hi = {std::max(hi.x, p.x + r), std::max(hi.y, p.y + r)};
        };
        if (!in.target.boundary.polyline.empty())
            for (Vec2 p : in.target.boundary.polyline) grow(p, 0);
        else
            for (const auto& P : in.target.boundary.P) grow(P.body.center(), P.body.diameter() / 2);
        double jump = direction_jump(dir, lo, hi, 32);
        if (jump > 0.5)
            throw SchemaError("--foliation: direction field is discontinuous over the target (jump of " +
                              std::to_string(jump * 180 / std::numbers::pi) + " degrees between samples)");
        in.target.holes.assign(nh, Prescription::of(foliation_field(dir, len), "slot"));
    } else if (!o.holes.empty()) {
        in.target.holes = hole_prescriptions_from_json(read_json_file(o.holes), nh);
    } else {
        in.target.holes.assign(nh, Prescription::of(make_shape(Shape::disk(1).set_name("disk"))));
    }
    if (!o.mu.empty()) in.target.mu = ellipse_field_from_json(read_json_file(o.mu));
    in.ladder = o.ladder;
    for (std::size_t k = 0; k < in.ladder.size(); ++k)
        if (!(in.ladder[k] > 0) || (k && in.ladder[k] >= in.ladder[k - 1]))
            throw SchemaError("--eps: ladder must be positive and strictly decreasing");
    if (o.core != "auto") {
        try {
            in.core_radius = std::stod(o.core);
        } catch (const std::exception&) {
            throw SchemaError("--core: expected 'auto' or a radius, got '" + o.core + "'");
        }
    }
    in.threads = threads_for(in.ladder.size());
    in.keep_artifacts = !o.svg_dir.empty();
    PipelineReport R = run_pipeline(in);

    Json cfg{{"domain", o.domain},
             {"target", o.target},
             {"holes", o.holes},
             {"mu", o.mu},
             {"foliation", o.foliation},
             {"eps", o.ladder},
             {"core", o.core},
             {"seed", Json::array({in.seed.x, in.seed.y})},
             {"tolerances", tol_json(o)}};
    Json j = header("map", cfg, o.rng_seed);
    j["report"] = pipeline_to_json(R);
    write_json(o.out, j);

    if (!o.svg_dir.empty()) {
        std::filesystem::create_directories(o.svg_dir);
        for (std::size_t k = 0; k < R.levels.size(); ++k) {
            const auto& L = R.levels[k];
            std::string stem = o.svg_dir + "/level" + std::to_string(k);
            write_text_file(stem + "_source.svg", source_svg(L.disc));
            if (L.ok) write_text_file(stem + "_target.svg", target_svg(L, in.target.boundary));
        }
    }

    int code = 0;
    for (const auto& L : R.levels) {
        if (L.ok)
            std::printf("eps %-8g %-22s max dilatation %.4f  max diameter %.4f\n", L.eps, to_string(L.status),
                        L.dil.max, L.ring.max_diameter);
        else
            std::printf("eps %-8g failed: %s\n", L.eps, L.error.c_str());
        int c = L.ok ? exit_code(L.status) : 1;
        if (c == 1 || code == 1) code = 1;
        else code = std::max(code, c);
    }
    return code;
}

int cmd_report(const Options& o) {
    Json j = read_json_file(o.in);
    std::cout << "command " << j.value("command", std::string("?")) << ", version " << j.value("version", std::string("?"))
              << "\n";
    if (j.contains("packing")) {
        const Json& p = j["packing"];
        std::cout << "status " << p["status"].get<std::string>() << " via " << p["method"].get<std::string>() << "\n";
        for (const auto& v : p["vertices"]) {
            if (v["role"] != "body") continue;
            std::printf("  v%-4d %-12s diameter %.7f center (%.7f, %.7f)\n", v["id"].get<int>(),
                        v["prototype"].get<std::string>().c_str(), v["diameter"].get<double>(),
                        v["center"][0].get<double>(), v["center"][1].get<double>());
        }
        std::printf("worst edge gap %.3e\n", p["validation"]["worst_edge_gap"].get<double>());
    } else if (j.contains("report")) {
        const Json& r = j["report"];
        std::printf("core radius %g\n", r["core_radius"].get<double>());
        for (const auto& L : r["levels"])
            std::printf("  eps %-8g %-22s cycles %d  max dilatation %.4f  max diameter %.4f\n", L["eps"].get<double>(),
                        L["status"].get<std::string>().c_str(), L["boundary_cycles"].get<int>(),
                        L["dilatation"]["max"].get<double>(), L["max_diameter"].get<double>());
        for (const auto& d : r["drift"])
            std::printf("  drift %g -> %g hole %d: center %.5f radius %.5f hausdorff %.5f\n", d["eps_from"].get<double>(),
                        d["eps_to"].get<double>(), d["hole"].get<int>(), d["center"].get<double>(),
                        d["radius"].get<double>(), d["hausdorff"].get<double>());
    } else if (j.contains("discretization")) {
        const Json& d = j["discretization"];
        std::printf("eps %g: %d inner, %d boundary circles\n", d["eps"].get<double>(), d["inner_count"].get<int>(),
                    d["boundary_count"].get<int>());
    } else {
        throw SchemaError("command: not a homothet output");
    }
    return 0;
}

void required_file(CLI::Option* opt) { opt->required()->check(CLI::ExistingFile); }

void tolerance_flags(CLI::App* c, Options& o) {
    c->add_option("--eps-geom", o.eps_geom, "geometric tolerance, relative to the scene diameter")->capture_default_str();
    c->add_option("--eps-contact", o.eps_contact, "contact tolerance for classification, relative")->capture_default_str();
    c->add_option("--eps-res", o.eps_res, "bisection tolerance on cube coordinates")->capture_default_str();
    c->add_option("--restarts", o.restarts, "random restarts of the sweeps")->capture_default_str();
    c->add_option("--rng-seed", o.rng_seed, "seed of the restart random stream")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Packings of convex homothets with a prescribed nerve, and discrete conformal maps"};
    app.set_version_flag("--version", HOMOTHET_VERSION);
    app.require_subcommand(1);
    Options o;

    auto* pack = app.add_subcommand("pack", "pack homothets of the prototypes with the triangulation as nerve");
    required_file(pack->add_option("--triangulation", o.triangulation, "triangulation JSON {faces, root}"));
    required_file(pack->add_option("--boundary", o.boundary, "boundary JSON (polyline + splits, or tangent_circles)"));
    required_file(pack->add_option("--prototypes", o.prototypes, "prototype JSON"));
    pack->add_option("--out", o.out, "packing JSON to write")->required();
    pack->add_option("--svg", o.svg, "packing SVG to write");
    pack->add_option("--method", o.method, "auto, sweeps or continuation")
        ->check(CLI::IsMember({"auto", "sweeps", "continuation"}))
        ->capture_default_str();
    tolerance_flags(pack, o);

    auto* validate = app.add_subcommand("validate", "classify a packing JSON against its inputs");
    required_file(validate->add_option("--triangulation", o.triangulation, "triangulation JSON"));
    required_file(validate->add_option("--boundary", o.boundary, "boundary JSON"));
    required_file(validate->add_option("--prototypes", o.prototypes, "prototype JSON"));
    required_file(validate->add_option("--packing", o.packing, "packing JSON written by pack"));
    validate->add_option("--eps-geom", o.eps_geom, "geometric tolerance, relative")->capture_default_str();
    validate->add_option("--eps-contact", o.eps_contact, "contact tolerance, relative")->capture_default_str();

    auto* hex = app.add_subcommand("hexify", "hexagonal discretization of a domain");
    required_file(hex->add_option("--domain", o.domain, "domain JSON {outer, holes, marks}"));
    hex->add_option("--eps", o.eps, "lattice spacing (circle diameter)")->capture_default_str();
    hex->add_option("--seed", o.seed_point, "lattice seed point x,y (default: deepest point of the domain)");
    hex->add_option("--out", o.out, "discretization JSON to write")->required();
    hex->add_option("--svg", o.svg, "source SVG to write");

    auto* map = app.add_subcommand("map", "discrete (quasi)conformal map onto a target with prescribed holes");
    required_file(map->add_option("--domain", o.domain, "source domain JSON"));
    required_file(map->add_option("--target", o.target, "target boundary JSON (domain style or boundary style)"));
    auto* holes = map->add_option("--holes", o.holes, "hole prescriptions JSON (default: disks)");
    holes->check(CLI::ExistingFile);
    auto* mu = map->add_option("--mu", o.mu, "Beltrami coefficient grid JSON");
    mu->check(CLI::ExistingFile);
    auto* fol = map->add_option("--foliation", o.foliation, "direction field JSON; every hole becomes a slot");
    fol->check(CLI::ExistingFile);
    mu->excludes(fol);
    fol->excludes(holes);
    map->add_option("--eps", o.ladder, "strictly decreasing eps ladder, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    map->add_option("--core", o.core, "core erosion radius, or auto")->capture_default_str();
    map->add_option("--seed", o.seed_point, "lattice seed point x,y (default: deepest point of the domain)");
    map->add_option("--out", o.out, "report JSON to write")->required();
    map->add_option("--svg-dir", o.svg_dir, "directory for per-level source and target SVGs");
    tolerance_flags(map, o);

    auto* report = app.add_subcommand("report", "summarize an output JSON");
    required_file(report->add_option("--in", o.in, "JSON written by pack, hexify or map"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Error& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*pack) return cmd_pack(o);
        if (*validate) return cmd_validate(o);
        if (*hex) return cmd_hexify(o);
        if (*map) return cmd_map(o);
        if (*report) return cmd_report(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
