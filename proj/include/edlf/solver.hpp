#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "edlf/grid.hpp"

namespace edlf {

enum class InitMode : std::uint8_t { BoundaryHarmonicFill = 0, Random = 1, FromFile = 2 };

struct SolverOptions {
    int max_iters = 5000;
    double grad_tol = 2e-6;  // relative to gradient_scale
    double step0 = 1.0;      // initial trial step
    double shrink = 0.5;     // backtracking factor
    double armijo_c = 1e-4;  // sufficient-decrease constant
    std::uint64_t seed = 1;
    InitMode init_mode = InitMode::BoundaryHarmonicFill;
    std::string init_file;
    int levels = 1;
    int fill_sweeps = 100;  // quotient-aware Jacobi sweeps in the harmonic fill

    void validate() const;

    bool operator==(const SolverOptions&) const = default;
};

struct SolveReport {
    int iterations = 0;
    double final_energy = 0.0;
    double final_rel_grad = 0.0;
    std::vector<double> energy_trace;  // energy after each accepted step, starting value first
    double wall_seconds = 0.0;
    bool converged = false;
    bool line_search_stalled = false;
    double max_principle_violation = 0.0;  // max(0, max interior |u| - max boundary |u|)
    bool max_principle_ok = true;
};

// Fills interior values according to options.init_mode. Boundary values must
// already be set.
void initialize(LineFieldState& state, const SolverOptions& options);

// Projected gradient descent with Barzilai-Borwein trial steps and Armijo
// backtracking. Interior magnitudes are clipped to the boundary maximum after
// each step (the radial retraction of the maximum principle never increases
// the energy), so the energy trace is nonincreasing and the maximum principle
// holds exactly. Deterministic for fixed inputs and seed.
SolveReport minimize(LineFieldState& state, const SolverOptions& options);

// A solve posed independently of resolution, so it can be discretized at any
// spacing for the coarse-to-fine ladder.
struct ProblemSpec {
    std::function<GridDomain(double h)> domain_for_h;
    std::function<Vec3(const Vec3&)> boundary;
    ConeParams params;
    double h_finest = 0.0;
};

// Solves on dyadically coarsened grids (levels from options), prolonging by
// sign-aligned trilinear interpolation. levels == 1 is exactly minimize on
// the finest grid.
LineFieldState coarse_to_fine(const ProblemSpec& spec, const SolverOptions& options,
                              SolveReport* final_report = nullptr);

}  // namespace edlf
