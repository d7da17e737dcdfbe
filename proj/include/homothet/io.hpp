#pragma once

#include <json.hpp>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "homothet/discretize.hpp"
#include "homothet/mapping.hpp"
#include "homothet/packer.hpp"

namespace homothet {

using Json = nlohmann::ordered_json;

// Malformed input; the message names the offending field.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Triangulation triangulation_from_json(const Json& j);
Json to_json(const Triangulation& T);

JordanBoundary boundary_from_json(const Json& j);
Json to_json(const JordanBoundary& B);

// {"name", "vertices"} with optional "rounding"; {"name", "disk": r};
// {"name", "ellipse": [a, b, angle_degrees]}.
ShapePtr prototype_from_json(const Json& j);
Json to_json(const Shape& S);

// A prototype, a list of them, or {"prototypes": [...], "assign": {"default":
// name, "vertices": {"id": name}}}.  Returns per-vertex prescriptions.
std::vector<Prescription> prescriptions_from_json(const Json& j, const Triangulation& T);

Domain domain_from_json(const Json& j);
Json to_json(const Domain& D);

// {"z_grid": [[x...], [y...]], "w_grid": [[u...], [v...]], "mu": [[re, im], ...]}
EllipseField ellipse_field_from_json(const Json& j);

// {"type": "horizontal" | "angle" | "radial", "angle": degrees, "center": [x, y], "length": l}
DirectionField direction_field_from_json(const Json& j, double* length);

// {"holes": [{"prototype": {...}} | {"foliation": {...}}, ...]}
std::vector<Prescription> hole_prescriptions_from_json(const Json& j, std::size_t holes);

Json to_json(const ValidationReport& R);
Json packing_to_json(const MonsterConfig& cfg, const PackingResult& P);
// bodies from a packing JSON written by packing_to_json
std::vector<Body> packing_bodies_from_json(const Json& j, int vertex_count);

Json discretization_to_json(const HexDiscretization& d);
Json to_json(const AugmentedTriangulation& A);
Json pipeline_to_json(const PipelineReport& R);

// SVG: one stroke-only group per body with id "v<vertex>", coordinates
// rounded to 1e-6.
std::string packing_svg(const Triangulation& T, const std::array<Host, 3>& hosts, const std::vector<Body>& bodies);
// source circles and inner triangles
std::string source_svg(const HexDiscretization& d);
// target packing over the image triangles tinted by dilatation
std::string target_svg(const LevelReport& L, const JordanBoundary& target);

}  // namespace homothet
