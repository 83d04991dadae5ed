#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "edlf/cone.hpp"
#include "edlf/vec.hpp"

namespace edlf {

enum class NodeRole : std::uint8_t { Exterior = 0, Interior = 1, BoundaryFixed = 2 };

enum class GridShape : std::uint8_t { Box = 0, Ball = 1, Cylinder = 2 };

// Uniform grid with a voxelized mask. Nodes are stored x-fastest:
// index = ix + nx*(iy + ny*iz). Non-box shapes mark nodes outside the mask
// Exterior; mask nodes adjacent to Exterior (or to the grid edge, for the
// directions the shape closes) become BoundaryFixed. Cylinder caps are left
// free: top/bottom z rows stay Interior (natural boundary).
struct GridDomain {
    int nx = 0, ny = 0, nz = 0;
    double h = 1.0;
    Vec3 origin{};
    GridShape shape = GridShape::Box;
    std::vector<NodeRole> roles;

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nz; }

    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(iy) + static_cast<std::size_t>(ny) * iz);
    }

    bool in_grid(int ix, int iy, int iz) const {
        return ix >= 0 && ix < nx && iy >= 0 && iy < ny && iz >= 0 && iz < nz;
    }

    Vec3 pos(int ix, int iy, int iz) const {
        return {origin.x + h * ix, origin.y + h * iy, origin.z + h * iz};
    }

    NodeRole role(int ix, int iy, int iz) const { return roles[index(ix, iy, iz)]; }

    // geometry of the mask, used for radius clamping in diagnostics
    Vec3 mask_center() const;
    double mask_radius() const;
    double dist_to_boundary(const Vec3& a) const;

    // checks the interior-neighbor invariant and basic consistency; throws
    void validate() const;
};

GridDomain make_box(int nx, int ny, int nz, double h, const Vec3& origin);

// Ball centered at the node (n/2, n/2, n/2), radius (n/2 - 1)*h, origin at
// -(n/2)*h so the center lands exactly on a grid node.
GridDomain make_ball(int n, double h);

// Cylinder with axis through the node column (n/2, n/2), transverse radius
// (n/2 - 1)*h, z spanning [0, (n-1)h]. Caps free.
GridDomain make_cylinder(int n, double h);

// Derives the mask from an already-filled {shape, dims, h, origin}.
GridDomain make_domain(GridShape shape, int nx, int ny, int nz, double h, const Vec3& origin);

// Gridded field of R^3 node values w; s = |w|, director n = [w/|w|].
struct LineFieldState {
    GridDomain domain;
    std::vector<Vec3> values;
    ConeParams params;

    LineFieldState() = default;
    LineFieldState(GridDomain d, ConeParams p)
        : domain(std::move(d)), values(domain.size()), params(std::move(p)) {}

    Vec3& at(int ix, int iy, int iz) { return values[domain.index(ix, iy, iz)]; }
    const Vec3& at(int ix, int iy, int iz) const { return values[domain.index(ix, iy, iz)]; }

    double s_at(int ix, int iy, int iz) const { return norm(at(ix, iy, iz)); }

    // assigns fn(x) on BoundaryFixed nodes
    void apply_boundary(const std::function<Vec3(const Vec3&)>& fn);

    // assigns fn(x) on every non-exterior node (analytic sampling)
    void apply_everywhere(const std::function<Vec3(const Vec3&)>& fn);

    double max_boundary_s() const;
    double median_boundary_s() const;

    void check_finite() const;
};

// Trilinear interpolation of the scalar |u|^2 = k|w|^2 field at point x.
double sample_usq_trilinear(const LineFieldState& state, const Vec3& x);

// Trilinear interpolation of s = |w| at point x.
double sample_s_trilinear(const LineFieldState& state, const Vec3& x);

// Sign-aligned trilinear interpolation of w at point x: the 8 cell corners
// are aligned to the largest-norm corner before combining, so the result is
// a valid local representative under the Dk quotient.
Vec3 sample_w_aligned(const LineFieldState& state, const Vec3& x);

}  // namespace edlf
