#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "homothet/discretize.hpp"
#include "homothet/packer.hpp"

namespace homothet {

using Complex = std::complex<double>;

// Linear part of xi -> xi + mu * conj(xi).
Mat2 beltrami_matrix(Complex mu);
// {xi : |xi + mu conj(xi)| <= 1}, the ellipse sent to a circle by the above.
Shape ellipse_of_mu(Complex mu);
// ratio of the singular values (1 for similarities, inf if singular)
double dilatation(const Mat2& M);

// mu(z, w) on a tensor grid: axes for z.x, z.y, w.x, w.y, values multilinear
// in between and clamped outside.  An axis with one entry is constant.
struct EllipseField {
    std::array<std::vector<double>, 2> z_axes{std::vector<double>{0.0}, std::vector<double>{0.0}};
    std::array<std::vector<double>, 2> w_axes{std::vector<double>{0.0}, std::vector<double>{0.0}};
    std::vector<Complex> mu{Complex{}};  // index ((zx * nzy + zy) * nwx + wx) * nwy + wy

    static EllipseField constant(Complex mu);
    Complex at(Vec2 z, Vec2 w) const;
    double max_abs() const;
    bool depends_on_w() const { return w_axes[0].size() > 1 || w_axes[1].size() > 1; }
    void check() const;  // sizes, monotone axes, |mu| < 1
};

// Unit segments along a direction field (the leaves of a straight foliation).
using DirectionField = std::function<Vec2(Vec2)>;
ShapeField foliation_field(DirectionField dir, double length = 1.0);
// largest angle (radians) between directions at neighboring samples of an
// n x n grid over the box; lines are unoriented
double direction_jump(const DirectionField& dir, Vec2 lo, Vec2 hi, int n);

struct AffinePiece {
    std::array<Vec2, 3> src, dst;
    Mat2 A;
    Vec2 b;
    double dilatation = 1;
    bool positive = true;
};

struct PiecewiseAffineMap {
    std::vector<AffinePiece> pieces;
    int flipped = 0;
    Vec2 apply(Vec2 p) const;  // the piece containing p, nearest piece otherwise
};

enum class MapMode { Centers, Refined };

AffinePiece affine_piece(const std::array<Vec2, 3>& src, const std::array<Vec2, 3>& dst);
// f_eps from the hexagonal packing to the bodies of the nerve vertices
PiecewiseAffineMap build_map(const HexDiscretization& d, const std::vector<Body>& bodies, MapMode mode);
// the same map followed by a linear map
PiecewiseAffineMap compose(const PiecewiseAffineMap& f, const Mat2& M);

struct DilatationStats {
    double max = 1, mean = 1;
    int pieces = 0;
};
using Region = std::function<bool(Vec2)>;
// over pieces whose source centroid lies in the core; throws if there are none
DilatationStats dilatation_report(const PiecewiseAffineMap& f, const Region& core);

struct RingReport {
    double max_diameter = 0;
    double min_flower_ratio = 1;
};
RingReport resolution_and_ring_report(const HexDiscretization& d, const std::vector<Body>& bodies);

// Symmetric Hausdorff distance between two bodies, from boundary samples.
double body_hausdorff(const Body& A, const Body& B, int samples = 256);

// Prescriptions for the target packing.
struct TargetSpec {
    JordanBoundary boundary;                 // the target region with its marks
    std::vector<Prescription> holes;         // one per hole, in domain order
    std::optional<EllipseField> mu;          // interior ellipses; disks if empty
    Tolerances tol;
};

PackingResult target_packing(const AugmentedTriangulation& A, const HexDiscretization& d, const TargetSpec& spec);

struct LevelReport {
    double eps = 0;
    bool ok = false;
    std::string error;
    int inner = 0, boundary = 0, vertices = 0, cycles = 0;
    Classification status = Classification::Invalid;
    std::string method;
    double residual = 0;
    DilatationStats dil;
    RingReport ring;
    int flipped = 0;
    std::vector<Body> holes;  // P'_{j, eps}
    double seconds = 0;
    // artifacts
    HexDiscretization disc;
    AugmentedTriangulation aug;
    PackingResult packing;
    PiecewiseAffineMap map;
};

struct PipelineInput {
    Domain source;
    Vec2 seed;
    TargetSpec target;
    std::vector<double> ladder;  // strictly decreasing
    double core_radius = -1;     // erosion of the source; < 0 for auto
    int threads = 1;
    bool keep_artifacts = true;
};

struct PipelineReport {
    std::vector<LevelReport> levels;
    double core_radius = 0;
    double target_diameter = 1;
    // between consecutive successful levels, per hole
    struct Drift {
        double eps0 = 0, eps1 = 0;
        int hole = 0;
        double center = 0, radius = 0, hausdorff = 0;  // absolute
        double hole_radius = 0;                         // at the finer level
    };
    std::vector<Drift> drift;
};

// point of the domain farthest from its boundary, on a 64 x 64 grid
Vec2 default_seed(const Domain& D);
// source eroded by r
Region erosion(const Domain& D, double r);
// 5 * eps_max, halved until the coarsest level has at least `min_pieces`
// inner triangles with centroid in the core
double auto_core_radius(const Domain& D, Vec2 seed, double eps_max, int min_pieces = 12);

PipelineReport run_pipeline(const PipelineInput& in);

}  // namespace homothet
