#pragma once

#include <string>
#include <vector>

#include "edlf/grid.hpp"

namespace edlf {

// Ordered closed polyline (first point repeated last) used for Z2 classes.
struct LoopSpec {
    std::vector<Vec3> points;
    double sample_spacing = 0.0;

    void validate() const;
};

LoopSpec circle_loop(const Vec3& center, double radius, const Vec3& normal, int samples);

enum class ComponentLabel : std::uint8_t { Ambiguous = 0, CurveLike = 1, IsolatedCandidate = 2 };

struct FlatnessEntry {
    Vec3 b{};
    double r = 0.0;
    double eps = 0.0;
};

struct DefectComponent {
    std::vector<std::size_t> voxels;  // node indices, lexicographic seed first
    std::vector<Vec3> polyline;       // ordered centerline points
    Vec3 endpoints[2]{};
    double diameter = 0.0;
    ComponentLabel label = ComponentLabel::Ambiguous;
    double station_class1_fraction = 0.0;
    std::vector<FlatnessEntry> flatness;
};

struct Junction {
    Vec3 point{};
    int branch_count = 0;
};

struct SeparationEntry {
    int comp_i = 0, comp_j = 0;
    double scale = 0.0;
    double distance = 0.0;  // min distance between the components inside B_scale(b*)
};

struct DefectGraph {
    double eps_z = 0.0;
    double s_ref = 0.0;
    std::vector<DefectComponent> components;
    std::vector<Vec3> isolated_candidates;
    std::vector<Junction> junctions;
    std::vector<SeparationEntry> separations;
};

// Voxels with s < eps_z * s_ref (s_ref = median boundary s), 26-connected
// components in deterministic lexicographic order, plus centerline polylines.
DefectGraph extract_zero_set(const LineFieldState& state, double eps_z);

// Z2 homotopy class of the director along a loop: 0 if the product of
// consecutive sign(w_i . w_{i+1}) is +1, else 1. Samples are sign-aligned
// trilinear interpolations of w. Throws ClassUndefinedError when the
// interpolated s dips below s_floor * s_ref and AmbiguityError when a
// consecutive pair is nearly perpendicular.
int loop_class(const LineFieldState& state, const LoopSpec& loop, double s_floor);

struct SphereCrossing {
    Vec3 point{};
    Vec3 tangent{};
    int component = 0;
    int cls = 0;
    bool tangential_warning = false;
};

struct ParityReport {
    std::vector<SphereCrossing> crossings;
    int class1_count = 0;
    bool even_ok = true;
};

struct ParityOptions {
    double loop_radius = 0.0;  // <= 0 picks 4h
    int loop_samples = 96;
    double s_floor = 0.02;
    double transversal_margin = 0.2;  // min |tangent . radial|
};

// Intersections of the defect polylines with the sphere, with the Z2 class of
// a small circle around each crossing; passes when the number of class-1
// crossings is even.
ParityReport sphere_crossing_parity(const LineFieldState& state, const Vec3& center,
                                    double radius, const DefectGraph& graph,
                                    const ParityOptions& opts = {});

// Bilateral Reifenberg flatness of the point set P inside B_r(b) against the
// principal line through the centroid of P ∩ B_r(b):
//   eps = max( sup_{p} dist(p, L), sup_{q in L ∩ B_r(b)} dist(q, P) ) / r.
double reifenberg_flatness(const std::vector<Vec3>& points, const Vec3& b, double r);

struct ClassifyOptions {
    double loop_radius = 0.0;      // station circles; <= 0 picks 3h
    int loop_samples = 96;
    double s_floor = 0.02;
    double flatness_threshold = 0.3;
    double curve_station_fraction = 0.9;
    double isolated_diameter_factor = 3.0;  // in units of h
    double isolated_loop_radius = 0.0;      // <= 0 picks 4h
};

// Annotates the graph: curve-like / isolated-candidate / ambiguous labels,
// flatness profiles at the given scales, junctions, pairwise separations.
void classify_components(const LineFieldState& state, DefectGraph& graph,
                         const std::vector<double>& scales, const ClassifyOptions& opts = {});

// Structured-text and CSV exports.
void write_defect_graph(const std::string& path, const DefectGraph& graph);
void write_defect_summary_csv(const std::string& path, const DefectGraph& graph);

}  // namespace edlf
