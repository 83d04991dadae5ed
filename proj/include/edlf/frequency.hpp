#pragma once

#include <vector>

#include "edlf/grid.hpp"

namespace edlf {

struct FrequencyQuantities {
    double D = 0.0;  // Dirichlet energy of the ball
    double E = 0.0;  // renormalized: r^{2-d} D with d = 3
    double H = 0.0;  // boundary L^2 of |u|
    double N = 0.0;  // Almgren frequency r D / H
};

struct FrequencyOptions {
    int nlat = 64;   // latitude bands for the sphere quadrature (>= 32)
    int nlon = 128;  // longitude samples (>= 64)
    double h_floor_factor = 1e-14;
};

// D by voxel sums of sign-aligned central-difference |grad u|^2 with linear
// partial-volume weights at the sphere crossing; H by lat-long quadrature of
// trilinear-interpolated |u|^2. Requires 4h <= r and B_{r+2h}(a) inside the
// mask (central stencils and interpolation need the margin).
FrequencyQuantities frequency_quantities(const LineFieldState& state, const Vec3& a, double r,
                                         const FrequencyOptions& opts = {});

struct FrequencyProfile {
    Vec3 center{};
    std::vector<double> radii;
    std::vector<double> D, E, H, N;
    std::vector<double> dropped_radii;  // radii refused by the H floor
};

// Evaluates the profile over ascending radii, dropping (and flagging) radii
// whose H falls below the floor.
FrequencyProfile make_profile(const LineFieldState& state, const Vec3& a,
                              const std::vector<double>& radii,
                              const FrequencyOptions& opts = {});

struct MonotoneViolation {
    double r_lo = 0.0, r_hi = 0.0;
    double n_lo = 0.0, n_hi = 0.0;
};

struct MonotoneReport {
    bool pass = true;
    std::vector<MonotoneViolation> violations;
};

// Checks N(r_{i+1}) >= N(r_i) - slack over consecutive radii.
MonotoneReport check_frequency_monotone(const FrequencyProfile& profile, double slack);

struct DoublingReport {
    double r = 0.0, R = 0.0;
    double H_r = 0.0, H_R = 0.0;
    double N_r = 0.0, N_R = 0.0;
    double lower_bound = 0.0;  // (r/R)^{2+2N(a;R)} H(a;R)
    double upper_bound = 0.0;  // (r/R)^{2+2N(a;r)} H(a;R)
    bool lower_ok = false, upper_ok = false;
    bool pass = false;
};

// Both inequalities of the H-comparison with d = 3, within multiplicative
// tolerance tol.
DoublingReport check_doubling(const LineFieldState& state, const Vec3& a, double r, double R,
                              double tol = 0.05, const FrequencyOptions& opts = {});

// L^2-normalized rescaling u(a + r x) onto a fresh unit-ball grid with
// sign-aligned trilinear sampling. h_out <= 0 picks h/r (source density).
// Requires B_{2r}(a) inside the mask.
LineFieldState blowup_rescale(const LineFieldState& state, const Vec3& a, double r,
                              double h_out = 0.0);

// Max over radius pairs of the L^2(B_1) cone distance between blow-ups at the
// given radii, all sampled onto a common unit-ball grid.
double homogeneity_defect(const LineFieldState& state, const Vec3& a,
                          const std::vector<double>& radii);

}  // namespace edlf
