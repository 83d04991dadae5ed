#include "edlf/energy.hpp"

#include <cmath>

#include "edlf/errors.hpp"

namespace edlf {

namespace {

constexpr double kVertexFloorFactor = 1e-14;

struct EdgeTermQ {  // quotient mode
    static double sign(const Vec3& a, const Vec3& b) { return dot(a, b) >= 0.0 ? 1.0 : -1.0; }
};

// Shared edge loop. Op(iIdx, jIdx, wi, wj) is invoked once per existing edge.
template <typename Op>
void for_each_edge(const LineFieldState& state, Op&& op) {
    const GridDomain& d = state.domain;
    const auto& roles = d.roles;
    const int nx = d.nx, ny = d.ny, nz = d.nz;
    const std::size_t sx = 1;
    const std::size_t sy = static_cast<std::size_t>(nx);
    const std::size_t sz = static_cast<std::size_t>(nx) * ny;
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy) {
            std::size_t row = d.index(0, iy, iz);
            for (int ix = 0; ix < nx; ++ix) {
                std::size_t i = row + ix;
                if (roles[i] == NodeRole::Exterior) continue;
                if (ix + 1 < nx && roles[i + sx] != NodeRole::Exterior) op(i, i + sx);
                if (iy + 1 < ny && roles[i + sy] != NodeRole::Exterior) op(i, i + sy);
                if (iz + 1 < nz && roles[i + sz] != NodeRole::Exterior) op(i, i + sz);
            }
        }
}

}  // namespace

double total_energy(const LineFieldState& state) {
    const double k = state.params.k;
    const bool quot = state.params.quotient();
    const auto& w = state.values;
    double acc = 0.0;
    for_each_edge(state, [&](std::size_t i, std::size_t j) {
        const Vec3& wi = w[i];
        const Vec3& wj = w[j];
        double si = norm(wi), sj = norm(wj);
        double dvp = dot(wi, wj);
        if (quot) dvp = std::abs(dvp);
        double ds = si - sj;
        double vec_sq = si * si + sj * sj - 2.0 * dvp;
        if (vec_sq < 0.0) vec_sq = 0.0;
        acc += (k - 1.0) * ds * ds + vec_sq;
    });
    double e = state.domain.h * acc;
    if (state.params.potential.active()) {
        const double h3 = state.domain.h * state.domain.h * state.domain.h;
        double pacc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (state.domain.roles[i] != NodeRole::Exterior)
                pacc += state.params.potential.value(norm(w[i]));
        e += h3 * pacc;
    }
    return e;
}

double energy_and_gradient(const LineFieldState& state, std::vector<Vec3>& grad) {
    const double k = state.params.k;
    const bool quot = state.params.quotient();
    const double h = state.domain.h;
    const auto& w = state.values;
    const auto& roles = state.domain.roles;
    grad.assign(w.size(), Vec3{});

    double floor = kVertexFloorFactor * state.max_boundary_s();

    double acc = 0.0;
    for_each_edge(state, [&](std::size_t i, std::size_t j) {
        const Vec3& wi = w[i];
        const Vec3& wj = w[j];
        double si = norm(wi), sj = norm(wj);
        double dp = dot(wi, wj);
        double sg = 1.0;
        if (quot && dp < 0.0) {
            sg = -1.0;
            dp = -dp;
        }
        double ds = si - sj;
        double vec_sq = si * si + sj * sj - 2.0 * dp;
        if (vec_sq < 0.0) vec_sq = 0.0;
        acc += (k - 1.0) * ds * ds + vec_sq;

        Vec3 dv = wi - sg * wj;  // d/dwi |wi - sg wj|^2 = 2 dv
        Vec3 gi = 2.0 * dv;
        Vec3 gj = -2.0 * sg * dv;
        double cs = 2.0 * (k - 1.0) * ds;
        if (si > floor) gi += (cs / si) * wi;
        if (sj > floor) gj -= (cs / sj) * wj;
        grad[i] += gi;
        grad[j] += gj;
    });

    double e = h * acc;
    for (std::size_t i = 0; i < grad.size(); ++i) {
        if (roles[i] == NodeRole::Interior)
            grad[i] *= h;
        else
            grad[i] = Vec3{};
    }

    if (state.params.potential.active()) {
        const double h3 = h * h * h;
        double pacc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (roles[i] == NodeRole::Exterior) continue;
            double s = norm(w[i]);
            pacc += state.params.potential.value(s);
            if (roles[i] == NodeRole::Interior && s > floor)
                grad[i] += (h3 * state.params.potential.derivative(s) / s) * w[i];
        }
        e += h3 * pacc;
    }
    return e;
}

void energy_gradient(const LineFieldState& state, std::vector<Vec3>& grad) {
    energy_and_gradient(state, grad);
}

double gradient_scale(const LineFieldState& state, double energy) {
    double wn2 = 0.0;
    for (std::size_t i = 0; i < state.values.size(); ++i)
        if (state.domain.roles[i] == NodeRole::Interior) wn2 += norm_sq(state.values[i]);
    double wn = std::sqrt(wn2);
    if (wn <= 0.0 || energy <= 0.0) return 0.0;
    return energy / (state.domain.h * wn);
}

double radial_variation_residual(const LineFieldState& state, const std::vector<double>& phi) {
    if (phi.size() != state.values.size())
        throw InvalidInputError("radial_variation_residual: phi size mismatch");
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (state.domain.roles[i] == NodeRole::BoundaryFixed && phi[i] != 0.0)
            throw InvalidInputError("radial_variation_residual: phi must vanish on fixed nodes");
    std::vector<Vec3> g;
    energy_and_gradient(state, g);
    double acc = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (state.domain.roles[i] == NodeRole::Interior)
            acc += phi[i] * dot(g[i], state.values[i]);
    return acc;
}

double radial_variation_residual_normalized(const LineFieldState& state,
                                            const std::vector<double>& phi) {
    double raw = radial_variation_residual(state, phi);
    double pn2 = 0.0, wn2 = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (state.domain.roles[i] == NodeRole::Interior) {
            pn2 += phi[i] * phi[i];
            wn2 += norm_sq(state.values[i]);
        }
    double e = total_energy(state);
    double scale = gradient_scale(state, e);
    double denom = std::sqrt(pn2) * std::sqrt(wn2) * scale;
    if (denom <= 0.0) return raw == 0.0 ? 0.0 : std::abs(raw);
    return std::abs(raw) / denom;
}

std::vector<double> stationarity_residual(const LineFieldState& state) {
    const GridDomain& d = state.domain;
    const double h = d.h;
    const double k = state.params.k;
    const double sk1 = std::sqrt(k - 1.0);
    const bool quot = state.params.quotient();
    const std::size_t n = d.size();

    // derivative of the embedded field, per axis, with validity flags
    std::vector<Vec4> du[3];
    std::vector<char> dvalid(n, 0);
    for (int a = 0; a < 3; ++a) du[a].assign(n, Vec4{});

    auto at = [&](std::size_t i) { return state.values[i]; };
    auto srole = [&](int ix, int iy, int iz) { return d.role(ix, iy, iz); };

    for (int iz = 0; iz < d.nz; ++iz)
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix) {
                if (srole(ix, iy, iz) == NodeRole::Exterior) continue;
                bool ok = true;
                for (int a = 0; a < 3 && ok; ++a) {
                    int px[3] = {ix, iy, iz}, mx[3] = {ix, iy, iz};
                    px[a] += 1;
                    mx[a] -= 1;
                    ok = d.in_grid(px[0], px[1], px[2]) && d.in_grid(mx[0], mx[1], mx[2]) &&
                         srole(px[0], px[1], px[2]) != NodeRole::Exterior &&
                         srole(mx[0], mx[1], mx[2]) != NodeRole::Exterior;
                }
                if (!ok) continue;
                std::size_t ci = d.index(ix, iy, iz);
                const Vec3& wc = at(ci);
                for (int a = 0; a < 3; ++a) {
                    int px[3] = {ix, iy, iz}, mx[3] = {ix, iy, iz};
                    px[a] += 1;
                    mx[a] -= 1;
                    Vec3 wp = at(d.index(px[0], px[1], px[2]));
                    Vec3 wm = at(d.index(mx[0], mx[1], mx[2]));
                    double sp = quot ? (dot(wc, wp) >= 0.0 ? 1.0 : -1.0) : 1.0;
                    double sm = quot ? (dot(wc, wm) >= 0.0 ? 1.0 : -1.0) : 1.0;
                    Vec3 dw = (sp * wp - sm * wm) / (2.0 * h);
                    double dsv = (norm(wp) - norm(wm)) / (2.0 * h);
                    du[a][ci] = {sk1 * dsv, dw.x, dw.y, dw.z};
                }
                dvalid[ci] = 1;
            }

    // stress-energy tensor T_ab = 2 du_a . du_b - delta_ab |grad u|^2
    std::vector<std::array<double, 6>> T(n);  // xx, yy, zz, xy, xz, yz
    for (std::size_t i = 0; i < n; ++i) {
        if (!dvalid[i]) continue;
        double g2 = norm_sq(du[0][i]) + norm_sq(du[1][i]) + norm_sq(du[2][i]);
        T[i] = {2.0 * norm_sq(du[0][i]) - g2, 2.0 * norm_sq(du[1][i]) - g2,
                2.0 * norm_sq(du[2][i]) - g2, 2.0 * dot(du[0][i], du[1][i]),
                2.0 * dot(du[0][i], du[2][i]), 2.0 * dot(du[1][i], du[2][i])};
    }

    auto tcomp = [&](std::size_t i, int a, int b) {
        static const int map[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
        return T[i][map[a][b]];
    };

    std::vector<double> out(n, 0.0);
    for (int iz = 0; iz < d.nz; ++iz)
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix) {
                std::size_t ci = d.index(ix, iy, iz);
                if (!dvalid[ci] || d.roles[ci] != NodeRole::Interior) continue;
                bool ok = true;
                std::size_t nb[3][2];
                for (int b = 0; b < 3 && ok; ++b) {
                    int px[3] = {ix, iy, iz}, mx[3] = {ix, iy, iz};
                    px[b] += 1;
                    mx[b] -= 1;
                    if (!d.in_grid(px[0], px[1], px[2]) || !d.in_grid(mx[0], mx[1], mx[2])) {
                        ok = false;
                        break;
                    }
                    nb[b][0] = d.index(px[0], px[1], px[2]);
                    nb[b][1] = d.index(mx[0], mx[1], mx[2]);
                    ok = dvalid[nb[b][0]] && dvalid[nb[b][1]];
                }
                if (!ok) continue;
                Vec3 divT{};
                for (int a = 0; a < 3; ++a) {
                    double acc = 0.0;
                    for (int b = 0; b < 3; ++b)
                        acc += (tcomp(nb[b][0], a, b) - tcomp(nb[b][1], a, b)) / (2.0 * h);
                    divT[a] = acc;
                }
                out[ci] = norm(divT);
            }
    return out;
}

}  // namespace edlf
