#pragma once

#include <string>
#include <utility>
#include <vector>

#include "edlf/config.hpp"
#include "edlf/defects.hpp"
#include "edlf/frequency.hpp"
#include "edlf/solver.hpp"

namespace edlf {

struct ReportEntry {
    std::string name;
    bool pass = false;
    std::string details;
};

struct ArtifactBundle {
    std::string dir;
    std::vector<std::pair<std::string, std::string>> files;  // label -> path
    std::vector<ReportEntry> report;
    SolveReport solve;
    bool all_checks_pass() const;
};

std::function<Vec3(const Vec3&)> make_boundary_generator(const ExperimentConfig& config,
                                                         const GridDomain& domain);

// Cylinder experiment: half-turn planar line-field data on the lateral
// boundary, caps free. Solves, runs the frequency / topology / defect
// diagnostics and writes the artifact files under config.output_dir.
ArtifactBundle run_line_defect(const ExperimentConfig& config);

// Ball with radial hedgehog data in Ck mode (isolated point defects), plus a
// paired Dk contrast run with planar line-field data (line defect).
ArtifactBundle run_point_defect_ck(const ExperimentConfig& config);

// Analytic cylinder lift sampled on a box; frequency and oracle diagnostics.
ArtifactBundle run_cylinder_oracle(const ExperimentConfig& config);

// Generic pipeline: solve the configured problem, then run the requested
// diagnostics.
ArtifactBundle run_custom(const ExperimentConfig& config);

ArtifactBundle run_experiment(const ExperimentConfig& config);

// deterministic CSV writers (17 significant digits)
void write_profile_csv(const std::string& path, const FrequencyProfile& profile);
void write_energy_trace_csv(const std::string& path, const std::vector<double>& trace);
void write_report_txt(const std::string& path, const std::vector<ReportEntry>& entries);
void write_solve_report_txt(const std::string& path, const SolveReport& report);

// dyadic radii 4h, 8h, ... capped at rmax
std::vector<double> dyadic_radii(double h, double rmax);

}  // namespace edlf
