#pragma once

#include <optional>
#include <string>
#include <vector>

#include "edlf/cone.hpp"
#include "edlf/grid.hpp"
#include "edlf/solver.hpp"

namespace edlf {

enum class ExperimentKind : std::uint8_t {
    LineDefect = 0,
    PointDefectCk = 1,
    CylinderOracle = 2,
    Custom = 3
};

struct LoopRequest {
    Vec3 center{};
    double radius = 0.0;
    char axis = 'z';
    int samples = 96;
    bool operator==(const LoopRequest&) const = default;
};

struct SphereRequest {
    Vec3 center{};
    double radius = 0.0;
    bool operator==(const SphereRequest&) const = default;
};

struct DiagnosticsSpec {
    std::vector<Vec3> centers;
    std::vector<double> radii;
    std::vector<LoopRequest> loops;
    std::vector<SphereRequest> spheres;
    double eps_z = 0.35;
    double s_floor = 0.02;
    bool operator==(const DiagnosticsSpec&) const = default;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Custom;
    double k = 4.0;
    TargetMode target = TargetMode::DkQuotient;

    GridShape shape = GridShape::Cylinder;
    int nx = 48, ny = 48, nz = 48;
    double h = 1.0 / 47.0;
    bool origin_auto = true;
    Vec3 origin{};

    std::string boundary_generator = "planar_half_turn";
    double s0 = 1.0;
    Vec3 boundary_value{1.0, 0.0, 0.0};

    SolverOptions solver;
    DiagnosticsSpec diag;
    std::string output_dir = "out";

    // origin resolved per shape when origin_auto is set
    Vec3 resolved_origin() const;
    GridDomain build_domain() const;
    ConeParams cone_params() const;

    bool operator==(const ExperimentConfig&) const;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;

    bool ok() const { return config.has_value() && errors.empty(); }
};

// key = value lines, # comments, dotted section keys. Collects every error
// (with line numbers) instead of stopping at the first.
ParseResult parse_config(const std::string& text);

// canonical form; parse(serialize(c)) == c
std::string serialize_config(const ExperimentConfig& config);

// applies "key=value" overrides (same keys as the file format)
ParseResult apply_overrides(const ExperimentConfig& base,
                            const std::vector<std::string>& assignments);

// defaults for the canned experiments, before user keys are applied
ExperimentConfig default_config(ExperimentKind kind);

const char* experiment_name(ExperimentKind kind);

}  // namespace edlf
