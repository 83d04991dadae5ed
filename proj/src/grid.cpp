#include "edlf/grid.hpp"

#include <algorithm>
#include <cmath>

#include "edlf/errors.hpp"

namespace edlf {

namespace {

constexpr double kMaskTol = 1e-12;

// 6-neighborhood offsets
constexpr int kNb[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};

}  // namespace

Vec3 GridDomain::mask_center() const {
    return pos(nx / 2, ny / 2, nz / 2);
}

double GridDomain::mask_radius() const {
    int n = std::min(nx, std::min(ny, nz));
    if (shape == GridShape::Cylinder) n = std::min(nx, ny);
    return (n / 2 - 1) * h;
}

double GridDomain::dist_to_boundary(const Vec3& a) const {
    switch (shape) {
        case GridShape::Box: {
            Vec3 lo = origin;
            Vec3 hi = pos(nx - 1, ny - 1, nz - 1);
            double d = a.x - lo.x;
            d = std::min(d, hi.x - a.x);
            d = std::min(d, a.y - lo.y);
            d = std::min(d, hi.y - a.y);
            d = std::min(d, a.z - lo.z);
            d = std::min(d, hi.z - a.z);
            return d;
        }
        case GridShape::Ball: {
            Vec3 c = mask_center();
            return mask_radius() - norm(a - c);
        }
        case GridShape::Cylinder: {
            Vec3 c = pos(nx / 2, ny / 2, 0);
            double rho = std::hypot(a.x - c.x, a.y - c.y);
            double d = mask_radius() - rho;
            d = std::min(d, a.z - origin.z);
            d = std::min(d, origin.z + h * (nz - 1) - a.z);
            return d;
        }
    }
    return 0.0;
}

void GridDomain::validate() const {
    if (nx < 2 || ny < 2 || nz < 2) throw InvalidInputError("GridDomain: dims must be >= 2");
    if (!(h > 0.0)) throw InvalidInputError("GridDomain: spacing must be positive");
    if (roles.size() != size()) throw InvalidInputError("GridDomain: role array size mismatch");
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                if (role(ix, iy, iz) != NodeRole::Interior) continue;
                for (const auto& d : kNb) {
                    int jx = ix + d[0], jy = iy + d[1], jz = iz + d[2];
                    if (!in_grid(jx, jy, jz)) continue;  // absent edge: natural boundary
                    if (role(jx, jy, jz) == NodeRole::Exterior)
                        throw InvalidInputError(
                            "GridDomain: interior node has an exterior 6-neighbor");
                }
            }
}

GridDomain make_box(int nx, int ny, int nz, double h, const Vec3& origin) {
    GridDomain d;
    d.nx = nx;
    d.ny = ny;
    d.nz = nz;
    d.h = h;
    d.origin = origin;
    d.shape = GridShape::Box;
    d.roles.assign(d.size(), NodeRole::Interior);
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                if (ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1 || iz == 0 || iz == nz - 1)
                    d.roles[d.index(ix, iy, iz)] = NodeRole::BoundaryFixed;
    d.validate();
    return d;
}

namespace {

// Fills roles from an inside predicate. closes_axis[a] tells whether leaving
// the grid along axis a counts as leaving the mask (true) or as a free,
// natural boundary (false; cylinder caps).
void voxelize(GridDomain& d, const std::function<bool(int, int, int)>& inside,
              const bool closes_axis[3]) {
    d.roles.assign(d.size(), NodeRole::Exterior);
    for (int iz = 0; iz < d.nz; ++iz)
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix) {
                if (!inside(ix, iy, iz)) continue;
                NodeRole r = NodeRole::Interior;
                for (int a = 0; a < 3 && r == NodeRole::Interior; ++a)
                    for (int s = -1; s <= 1 && r == NodeRole::Interior; s += 2) {
                        int jx = ix + (a == 0 ? s : 0);
                        int jy = iy + (a == 1 ? s : 0);
                        int jz = iz + (a == 2 ? s : 0);
                        if (!d.in_grid(jx, jy, jz)) {
                            if (closes_axis[a]) r = NodeRole::BoundaryFixed;
                        } else if (!inside(jx, jy, jz)) {
                            r = NodeRole::BoundaryFixed;
                        }
                    }
                d.roles[d.index(ix, iy, iz)] = r;
            }
}

}  // namespace

GridDomain make_ball(int n, double h) {
    GridDomain d;
    d.nx = d.ny = d.nz = n;
    d.h = h;
    double o = -(n / 2) * h;
    d.origin = {o, o, o};
    d.shape = GridShape::Ball;
    double R = (n / 2 - 1) * h;
    auto inside = [&](int ix, int iy, int iz) {
        Vec3 p = d.pos(ix, iy, iz);
        return norm(p) <= R + kMaskTol;
    };
    const bool closes[3] = {true, true, true};
    voxelize(d, inside, closes);
    d.validate();
    return d;
}

GridDomain make_cylinder(int n, double h) {
    GridDomain d;
    d.nx = d.ny = d.nz = n;
    d.h = h;
    double o = -(n / 2) * h;
    d.origin = {o, o, 0.0};
    d.shape = GridShape::Cylinder;
    double R = (n / 2 - 1) * h;
    auto inside = [&](int ix, int iy, int iz) {
        Vec3 p = d.pos(ix, iy, iz);
        (void)iz;
        return std::hypot(p.x, p.y) <= R + kMaskTol;
    };
    const bool closes[3] = {true, true, false};  // caps free
    voxelize(d, inside, closes);
    d.validate();
    return d;
}

GridDomain make_domain(GridShape shape, int nx, int ny, int nz, double h, const Vec3& origin) {
    switch (shape) {
        case GridShape::Box:
            return make_box(nx, ny, nz, h, origin);
        case GridShape::Ball: {
            GridDomain d;
            d.nx = nx;
            d.ny = ny;
            d.nz = nz;
            d.h = h;
            d.origin = origin;
            d.shape = GridShape::Ball;
            Vec3 c = d.mask_center();
            double R = d.mask_radius();
            auto inside = [&](int ix, int iy, int iz) {
                return norm(d.pos(ix, iy, iz) - c) <= R + kMaskTol;
            };
            const bool closes[3] = {true, true, true};
            voxelize(d, inside, closes);
            d.validate();
            return d;
        }
        case GridShape::Cylinder: {
            GridDomain d;
            d.nx = nx;
            d.ny = ny;
            d.nz = nz;
            d.h = h;
            d.origin = origin;
            d.shape = GridShape::Cylinder;
            Vec3 c = d.pos(nx / 2, ny / 2, 0);
            double R = d.mask_radius();
            auto inside = [&](int ix, int iy, int iz) {
                Vec3 p = d.pos(ix, iy, iz);
                (void)iz;
                return std::hypot(p.x - c.x, p.y - c.y) <= R + kMaskTol;
            };
            const bool closes[3] = {true, true, false};
            voxelize(d, inside, closes);
            d.validate();
            return d;
        }
    }
    throw InvalidInputError("make_domain: unknown shape");
}

void LineFieldState::apply_boundary(const std::function<Vec3(const Vec3&)>& fn) {
    for (int iz = 0; iz < domain.nz; ++iz)
        for (int iy = 0; iy < domain.ny; ++iy)
            for (int ix = 0; ix < domain.nx; ++ix)
                if (domain.role(ix, iy, iz) == NodeRole::BoundaryFixed)
                    at(ix, iy, iz) = fn(domain.pos(ix, iy, iz));
}

void LineFieldState::apply_everywhere(const std::function<Vec3(const Vec3&)>& fn) {
    for (int iz = 0; iz < domain.nz; ++iz)
        for (int iy = 0; iy < domain.ny; ++iy)
            for (int ix = 0; ix < domain.nx; ++ix)
                if (domain.role(ix, iy, iz) != NodeRole::Exterior)
                    at(ix, iy, iz) = fn(domain.pos(ix, iy, iz));
}

double LineFieldState::max_boundary_s() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (domain.roles[i] == NodeRole::BoundaryFixed) m = std::max(m, norm(values[i]));
    return m;
}

double LineFieldState::median_boundary_s() const {
    std::vector<double> s;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (domain.roles[i] == NodeRole::BoundaryFixed) s.push_back(norm(values[i]));
    if (s.empty()) return 0.0;
    std::size_t mid = s.size() / 2;
    std::nth_element(s.begin(), s.begin() + mid, s.end());
    return s[mid];
}

void LineFieldState::check_finite() const {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (domain.roles[i] != NodeRole::Exterior && !finite(values[i]))
            throw InvalidInputError("LineFieldState: non-finite node value");
}

namespace {

struct CellLookup {
    int i0, j0, k0;
    double fx, fy, fz;
};

CellLookup locate(const GridDomain& d, const Vec3& x) {
    auto comp = [&](double v, double o, int n) {
        double p = (v - o) / d.h;
        int i = static_cast<int>(std::floor(p));
        i = std::clamp(i, 0, n - 2);
        double f = std::clamp(p - i, 0.0, 1.0);
        return std::pair<int, double>{i, f};
    };
    auto [i0, fx] = comp(x.x, d.origin.x, d.nx);
    auto [j0, fy] = comp(x.y, d.origin.y, d.ny);
    auto [k0, fz] = comp(x.z, d.origin.z, d.nz);
    return {i0, j0, k0, fx, fy, fz};
}

}  // namespace

double sample_usq_trilinear(const LineFieldState& state, const Vec3& x) {
    const GridDomain& d = state.domain;
    CellLookup c = locate(d, x);
    double k = state.params.k;
    double acc = 0.0;
    for (int dx = 0; dx <= 1; ++dx)
        for (int dy = 0; dy <= 1; ++dy)
            for (int dz = 0; dz <= 1; ++dz) {
                double wt = (dx ? c.fx : 1.0 - c.fx) * (dy ? c.fy : 1.0 - c.fy) *
                            (dz ? c.fz : 1.0 - c.fz);
                acc += wt * k * norm_sq(state.at(c.i0 + dx, c.j0 + dy, c.k0 + dz));
            }
    return acc;
}

double sample_s_trilinear(const LineFieldState& state, const Vec3& x) {
    const GridDomain& d = state.domain;
    CellLookup c = locate(d, x);
    double acc = 0.0;
    for (int dx = 0; dx <= 1; ++dx)
        for (int dy = 0; dy <= 1; ++dy)
            for (int dz = 0; dz <= 1; ++dz) {
                double wt = (dx ? c.fx : 1.0 - c.fx) * (dy ? c.fy : 1.0 - c.fy) *
                            (dz ? c.fz : 1.0 - c.fz);
                acc += wt * norm(state.at(c.i0 + dx, c.j0 + dy, c.k0 + dz));
            }
    return acc;
}

Vec3 sample_w_aligned(const LineFieldState& state, const Vec3& x) {
    const GridDomain& d = state.domain;
    CellLookup c = locate(d, x);
    Vec3 corners[8];
    double wts[8];
    int m = 0;
    for (int dx = 0; dx <= 1; ++dx)
        for (int dy = 0; dy <= 1; ++dy)
            for (int dz = 0; dz <= 1; ++dz) {
                corners[m] = state.at(c.i0 + dx, c.j0 + dy, c.k0 + dz);
                wts[m] = (dx ? c.fx : 1.0 - c.fx) * (dy ? c.fy : 1.0 - c.fy) *
                         (dz ? c.fz : 1.0 - c.fz);
                ++m;
            }
    if (!state.params.quotient()) {
        Vec3 acc{};
        for (int i = 0; i < 8; ++i) acc += wts[i] * corners[i];
        return acc;
    }
    int ref = 0;
    double best = -1.0;
    for (int i = 0; i < 8; ++i) {
        double n2 = norm_sq(corners[i]);
        if (n2 > best) {
            best = n2;
            ref = i;
        }
    }
    Vec3 acc{};
    for (int i = 0; i < 8; ++i) {
        double sg = dot(corners[i], corners[ref]) >= 0.0 ? 1.0 : -1.0;
        acc += (wts[i] * sg) * corners[i];
    }
    return acc;
}

}  // namespace edlf
