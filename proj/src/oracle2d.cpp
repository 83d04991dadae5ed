#include "edlf/oracle2d.hpp"

#include <cmath>

#include "edlf/errors.hpp"

namespace edlf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void Homogeneous2DMinimizer::validate() const {
    if (!(lambda > 0.0)) throw InvalidInputError("Homogeneous2DMinimizer: lambda must be > 0");
    if (!(k > 1.0)) throw InvalidInputError("Homogeneous2DMinimizer: k > 1 required");
    if (std::abs(norm(e1) - 1.0) > 1e-12 || std::abs(norm(e2) - 1.0) > 1e-12 ||
        std::abs(dot(e1, e2)) > 1e-12)
        throw InvalidInputError("Homogeneous2DMinimizer: frame must be orthonormal");
}

Vec3 eval_2d(const Homogeneous2DMinimizer& m, double r, double theta) {
    if (!(r >= 0.0)) throw InvalidInputError("eval_2d: r must be nonnegative");
    double amp = m.lambda * std::pow(r, m.alpha());
    double half = 0.5 * theta + m.phi0;
    return amp * std::cos(half) * m.e1 + amp * std::sin(half) * m.e2;
}

double el_residual(const std::vector<Vec3>& psi, double k, double alpha) {
    const std::size_t n = psi.size();
    if (n < 4) throw InvalidInputError("el_residual: need at least 4 samples");
    const double dth = 2.0 * kPi / static_cast<double>(n);

    std::vector<double> q(n);
    std::vector<Vec3> d1(n), d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& c = psi[i];
        double c2 = norm_sq(c);
        if (c2 <= 0.0) throw InvalidInputError("el_residual: psi vanishes at a sample (Q undefined)");
        const Vec3& p = psi[(i + 1) % n];
        const Vec3& m = psi[(i + n - 1) % n];
        double sp = dot(c, p) >= 0.0 ? 1.0 : -1.0;
        double sm = dot(c, m) >= 0.0 ? 1.0 : -1.0;
        Vec3 pa = sp * p, ma = sm * m;
        d1[i] = (pa - ma) / (2.0 * dth);
        d2[i] = (pa - 2.0 * c + ma) / (dth * dth);
        q[i] = dot(c, d1[i]) / c2;  // sign-invariant
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dq = (q[(i + 1) % n] - q[(i + n - 1) % n]) / (2.0 * dth);
        double coef = k * alpha * alpha + (k - 1.0) * dq + (k - 1.0) * q[i] * q[i];
        Vec3 res = d2[i] + coef * psi[i];
        worst = std::max(worst, norm(res));
    }
    return worst;
}

std::vector<std::complex<double>> hopf_differential(const std::vector<Vec4>& u, int nx, int ny,
                                                    double h) {
    if (nx < 2 || ny < 2 || u.size() != static_cast<std::size_t>(nx) * ny)
        throw InvalidInputError("hopf_differential: bad grid");
    auto idx = [nx](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };
    std::vector<std::complex<double>> out(u.size());
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            Vec4 ux, uy;
            if (i == 0)
                ux = (u[idx(1, j)] - u[idx(0, j)]) * (1.0 / h);
            else if (i == nx - 1)
                ux = (u[idx(nx - 1, j)] - u[idx(nx - 2, j)]) * (1.0 / h);
            else
                ux = (u[idx(i + 1, j)] - u[idx(i - 1, j)]) * (1.0 / (2.0 * h));
            if (j == 0)
                uy = (u[idx(i, 1)] - u[idx(i, 0)]) * (1.0 / h);
            else if (j == ny - 1)
                uy = (u[idx(i, ny - 1)] - u[idx(i, ny - 2)]) * (1.0 / h);
            else
                uy = (u[idx(i, j + 1)] - u[idx(i, j - 1)]) * (1.0 / (2.0 * h));
            out[idx(i, j)] = {norm_sq(ux) - norm_sq(uy), 2.0 * dot(ux, uy)};
        }
    return out;
}

std::vector<std::complex<double>> hopf_differential(const LineFieldState& planar) {
    const GridDomain& d = planar.domain;
    if (d.nz != 1) throw InvalidInputError("hopf_differential: expected a single-slice field");
    const double sk1 = std::sqrt(planar.params.k - 1.0);
    const bool quot = planar.params.quotient();
    const int nx = d.nx, ny = d.ny;
    auto embed4 = [&](const Vec3& ref, const Vec3& w) {
        double sg = (quot && dot(ref, w) < 0.0) ? -1.0 : 1.0;
        return Vec4{sk1 * norm(w), sg * w.x, sg * w.y, sg * w.z};
    };
    std::vector<std::complex<double>> out(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const Vec3& wc = planar.at(i, j, 0);
            auto dx = [&](int ia, int ib, double denom) {
                return (embed4(wc, planar.at(ib, j, 0)) - embed4(wc, planar.at(ia, j, 0))) *
                       (1.0 / denom);
            };
            auto dy = [&](int ja, int jb, double denom) {
                return (embed4(wc, planar.at(i, jb, 0)) - embed4(wc, planar.at(i, ja, 0))) *
                       (1.0 / denom);
            };
            Vec4 ux = (i == 0)        ? dx(0, 1, d.h)
                      : (i == nx - 1) ? dx(nx - 2, nx - 1, d.h)
                                      : dx(i - 1, i + 1, 2.0 * d.h);
            Vec4 uy = (j == 0)        ? dy(0, 1, d.h)
                      : (j == ny - 1) ? dy(ny - 2, ny - 1, d.h)
                                      : dy(j - 1, j + 1, 2.0 * d.h);
            out[static_cast<std::size_t>(j) * nx + i] = {norm_sq(ux) - norm_sq(uy),
                                                         2.0 * dot(ux, uy)};
        }
    return out;
}

LineFieldState lift_cylinder(const Homogeneous2DMinimizer& m, const Vec3& axis_point,
                             const Vec3& axis_dir, GridDomain domain) {
    m.validate();
    double an = norm(axis_dir);
    if (!(an > 0.0)) throw InvalidInputError("lift_cylinder: axis direction must be nonzero");
    Vec3 a = axis_dir / an;

    // deterministic orthonormal frame perpendicular to the axis; axis e3
    // yields the standard (e1, e2) plane frame
    Vec3 seed = std::abs(a.y) < 0.9 ? Vec3{0.0, 1.0, 0.0} : Vec3{0.0, 0.0, 1.0};
    Vec3 f1 = cross(seed, a);
    f1 = f1 / norm(f1);
    Vec3 f2 = cross(a, f1);

    ConeParams params;
    params.k = m.k;
    params.target_mode = TargetMode::DkQuotient;
    LineFieldState state(std::move(domain), params);
    state.apply_everywhere([&](const Vec3& x) {
        Vec3 v = x - axis_point;
        v -= dot(v, a) * a;
        double r = norm(v);
        double theta = std::atan2(dot(v, f2), dot(v, f1));
        return eval_2d(m, r, theta);
    });
    return state;
}

}  // namespace edlf
