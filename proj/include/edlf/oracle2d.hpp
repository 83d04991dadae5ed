#pragma once

#include <complex>
#include <vector>

#include "edlf/grid.hpp"

namespace edlf {

// Closed form of the unique planar homogeneous minimizer (up to rotation and
// scale): w(r, theta) = lambda r^alpha (cos(theta/2 + phi0) e1 +
// sin(theta/2 + phi0) e2), alpha = 1/(2 sqrt(k)). The representative flips
// sign as theta advances by 2 pi (line field, not vector field).
struct Homogeneous2DMinimizer {
    double lambda = 1.0;
    double phi0 = 0.0;
    Vec3 e1{1.0, 0.0, 0.0};
    Vec3 e2{0.0, 1.0, 0.0};
    double k = 4.0;

    double alpha() const { return 1.0 / (2.0 * std::sqrt(k)); }
    void validate() const;
};

Vec3 eval_2d(const Homogeneous2DMinimizer& m, double r, double theta);

// Max norm of the residual of the angular Euler-Lagrange equation
//   psi'' + [k a^2 + (k-1) Q' + (k-1) Q^2] psi = 0,  Q = psi.psi' / |psi|^2,
// evaluated with sign-aligned periodic second-order differences on a uniform
// theta grid over [0, 2 pi).
double el_residual(const std::vector<Vec3>& psi, double k, double alpha);

// Hopf differential (|u_x|^2 - |u_y|^2) + 2 (u_x . u_y) i of a sampled R^4
// field on a 2D grid (x-fastest). Central differences inside, one-sided at
// the rim.
std::vector<std::complex<double>> hopf_differential(const std::vector<Vec4>& u, int nx, int ny,
                                                    double h);

// Hopf differential of a single-slice gridded line field: differences of the
// embedded field with the w-part sign-aligned to the center node.
std::vector<std::complex<double>> hopf_differential(const LineFieldState& planar);

// Samples eval_2d at the projection of each node onto the plane through
// axis_point orthogonal to axis_dir. The result is constant along the axis
// and homogeneous of degree alpha about any axis point.
LineFieldState lift_cylinder(const Homogeneous2DMinimizer& m, const Vec3& axis_point,
                             const Vec3& axis_dir, GridDomain domain);

}  // namespace edlf
