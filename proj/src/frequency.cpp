#include "edlf/frequency.hpp"

#include <algorithm>
#include <cmath>

#include "edlf/errors.hpp"

namespace edlf {

namespace {

constexpr double kPi = 3.14159265358979323846;

double field_scale_usq(const LineFieldState& state) {
    double m = 0.0;
    for (std::size_t i = 0; i < state.values.size(); ++i)
        if (state.domain.roles[i] != NodeRole::Exterior)
            m = std::max(m, norm_sq(state.values[i]));
    return state.params.k * m;  // max |u|^2
}

// every node within distance `margin_r` of a must exist and be non-exterior
void require_ball_in_mask(const LineFieldState& state, const Vec3& a, double margin_r,
                          const char* who) {
    const GridDomain& d = state.domain;
    int lo[3], hi[3];
    double c[3] = {a.x, a.y, a.z};
    double o[3] = {d.origin.x, d.origin.y, d.origin.z};
    int n[3] = {d.nx, d.ny, d.nz};
    for (int ax = 0; ax < 3; ++ax) {
        lo[ax] = static_cast<int>(std::floor((c[ax] - margin_r - o[ax]) / d.h));
        hi[ax] = static_cast<int>(std::ceil((c[ax] + margin_r - o[ax]) / d.h));
        if (lo[ax] < 0 || hi[ax] > n[ax] - 1)
            throw InvalidInputError(std::string(who) + ": ball is not inside the grid");
    }
    double m2 = margin_r * margin_r;
    for (int iz = lo[2]; iz <= hi[2]; ++iz)
        for (int iy = lo[1]; iy <= hi[1]; ++iy)
            for (int ix = lo[0]; ix <= hi[0]; ++ix) {
                Vec3 p = d.pos(ix, iy, iz);
                if (norm_sq(p - a) > m2) continue;
                if (d.role(ix, iy, iz) == NodeRole::Exterior)
                    throw InvalidInputError(std::string(who) +
                                            ": ball is not inside the domain mask");
            }
}

// |grad u|^2 at a node from sign-aligned central differences of the embedded
// field; assumes the 6 neighbors exist and are in the mask.
double grad_usq_at(const LineFieldState& state, int ix, int iy, int iz) {
    const GridDomain& d = state.domain;
    const double k = state.params.k;
    const double km1 = k - 1.0;
    const bool quot = state.params.quotient();
    const Vec3& wc = state.at(ix, iy, iz);
    double acc = 0.0;
    for (int ax = 0; ax < 3; ++ax) {
        int pi[3] = {ix, iy, iz}, mi[3] = {ix, iy, iz};
        pi[ax] += 1;
        mi[ax] -= 1;
        const Vec3& wp = state.at(pi[0], pi[1], pi[2]);
        const Vec3& wm = state.at(mi[0], mi[1], mi[2]);
        double sp = (quot && dot(wc, wp) < 0.0) ? -1.0 : 1.0;
        double sm = (quot && dot(wc, wm) < 0.0) ? -1.0 : 1.0;
        Vec3 dw = (sp * wp - sm * wm) / (2.0 * d.h);
        double ds = (norm(wp) - norm(wm)) / (2.0 * d.h);
        acc += km1 * ds * ds + norm_sq(dw);
    }
    return acc;
}

double ball_energy(const LineFieldState& state, const Vec3& a, double r) {
    const GridDomain& d = state.domain;
    const double h = d.h;
    int lo[3], hi[3];
    double c[3] = {a.x, a.y, a.z};
    double o[3] = {d.origin.x, d.origin.y, d.origin.z};
    for (int ax = 0; ax < 3; ++ax) {
        lo[ax] = static_cast<int>(std::floor((c[ax] - r - o[ax]) / h)) - 1;
        hi[ax] = static_cast<int>(std::ceil((c[ax] + r - o[ax]) / h)) + 1;
    }
    double acc = 0.0;
    for (int iz = lo[2]; iz <= hi[2]; ++iz)
        for (int iy = lo[1]; iy <= hi[1]; ++iy)
            for (int ix = lo[0]; ix <= hi[0]; ++ix) {
                Vec3 p = d.pos(ix, iy, iz);
                double dist = norm(p - a);
                double wgt = std::clamp((r - dist) / h + 0.5, 0.0, 1.0);
                if (wgt <= 0.0) continue;
                acc += wgt * grad_usq_at(state, ix, iy, iz);
            }
    return acc * h * h * h;
}

double sphere_usq(const LineFieldState& state, const Vec3& a, double r,
                  const FrequencyOptions& opts) {
    const int nlat = std::max(32, opts.nlat);
    const int nlon = std::max(64, opts.nlon);
    const double dth = kPi / nlat;
    const double dph = 2.0 * kPi / nlon;
    double acc = 0.0;
    for (int i = 0; i < nlat; ++i) {
        double th = (i + 0.5) * dth;
        double st = std::sin(th), ct = std::cos(th);
        double band = 0.0;
        for (int j = 0; j < nlon; ++j) {
            double ph = j * dph;
            Vec3 p{a.x + r * st * std::cos(ph), a.y + r * st * std::sin(ph), a.z + r * ct};
            band += sample_usq_trilinear(state, p);
        }
        acc += band * st;
    }
    return acc * dth * dph * r * r;
}

}  // namespace

FrequencyQuantities frequency_quantities(const LineFieldState& state, const Vec3& a, double r,
                                         const FrequencyOptions& opts) {
    const double h = state.domain.h;
    if (!(r >= 4.0 * h - 1e-12))
        throw InvalidInputError("frequency_quantities: radius below 4h is refused");
    require_ball_in_mask(state, a, r + 2.0 * h, "frequency_quantities");

    FrequencyQuantities q;
    q.D = ball_energy(state, a, r);
    q.H = sphere_usq(state, a, r, opts);
    q.E = q.D / r;
    double floor = opts.h_floor_factor * field_scale_usq(state) * r * r;
    if (q.H <= floor)
        throw FrequencyUndefinedError("frequency_quantities: H below floor at r = " +
                                      std::to_string(r));
    q.N = r * q.D / q.H;
    return q;
}

FrequencyProfile make_profile(const LineFieldState& state, const Vec3& a,
                              const std::vector<double>& radii, const FrequencyOptions& opts) {
    FrequencyProfile p;
    p.center = a;
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw InvalidInputError("make_profile: radii must be ascending");
    for (double r : radii) {
        try {
            FrequencyQuantities q = frequency_quantities(state, a, r, opts);
            p.radii.push_back(r);
            p.D.push_back(q.D);
            p.E.push_back(q.E);
            p.H.push_back(q.H);
            p.N.push_back(q.N);
        } catch (const FrequencyUndefinedError&) {
            p.dropped_radii.push_back(r);
        } catch (const InvalidInputError&) {
            // outside the trustworthy window [4h, dist(a, boundary) - 2h]
            p.dropped_radii.push_back(r);
        }
    }
    return p;
}

MonotoneReport check_frequency_monotone(const FrequencyProfile& profile, double slack) {
    if (profile.radii.size() < 2)
        throw InvalidInputError("check_frequency_monotone: need at least 2 radii");
    MonotoneReport rep;
    for (std::size_t i = 0; i + 1 < profile.N.size(); ++i) {
        if (profile.N[i + 1] < profile.N[i] - slack) {
            rep.pass = false;
            rep.violations.push_back(
                {profile.radii[i], profile.radii[i + 1], profile.N[i], profile.N[i + 1]});
        }
    }
    return rep;
}

DoublingReport check_doubling(const LineFieldState& state, const Vec3& a, double r, double R,
                              double tol, const FrequencyOptions& opts) {
    if (!(0.0 < r && r < R)) throw InvalidInputError("check_doubling: need 0 < r < R");
    FrequencyQuantities qr = frequency_quantities(state, a, r, opts);
    FrequencyQuantities qR = frequency_quantities(state, a, R, opts);
    DoublingReport rep;
    rep.r = r;
    rep.R = R;
    rep.H_r = qr.H;
    rep.H_R = qR.H;
    rep.N_r = qr.N;
    rep.N_R = qR.N;
    double ratio = r / R;
    rep.lower_bound = std::pow(ratio, 2.0 + 2.0 * qR.N) * qR.H;
    rep.upper_bound = std::pow(ratio, 2.0 + 2.0 * qr.N) * qR.H;
    rep.lower_ok = rep.lower_bound <= qr.H * (1.0 + tol);
    rep.upper_ok = qr.H <= rep.upper_bound * (1.0 + tol);
    rep.pass = rep.lower_ok && rep.upper_ok;
    return rep;
}

LineFieldState blowup_rescale(const LineFieldState& state, const Vec3& a, double r,
                              double h_out) {
    const double h = state.domain.h;
    if (!(r > 0.0)) throw InvalidInputError("blowup_rescale: radius must be positive");
    require_ball_in_mask(state, a, 2.0 * r, "blowup_rescale");
    if (h_out <= 0.0) h_out = h / r;

    // mean of |u|^2 over B_r(a) with partial-volume weights
    const GridDomain& d = state.domain;
    int lo[3], hi[3];
    double c[3] = {a.x, a.y, a.z};
    double o[3] = {d.origin.x, d.origin.y, d.origin.z};
    for (int ax = 0; ax < 3; ++ax) {
        lo[ax] = static_cast<int>(std::floor((c[ax] - r - o[ax]) / h)) - 1;
        hi[ax] = static_cast<int>(std::ceil((c[ax] + r - o[ax]) / h)) + 1;
    }
    double mass = 0.0, vol = 0.0;
    const double k = state.params.k;
    for (int iz = lo[2]; iz <= hi[2]; ++iz)
        for (int iy = lo[1]; iy <= hi[1]; ++iy)
            for (int ix = lo[0]; ix <= hi[0]; ++ix) {
                Vec3 p = d.pos(ix, iy, iz);
                double wgt = std::clamp((r - norm(p - a)) / h + 0.5, 0.0, 1.0);
                if (wgt <= 0.0) continue;
                mass += wgt * k * norm_sq(state.at(ix, iy, iz));
                vol += wgt;
            }
    double scale2 = field_scale_usq(state);
    if (vol <= 0.0 || mass <= 1e-28 * std::max(scale2, 1.0) * vol)
        throw DegenerateBlowupError("blowup_rescale: zero L2 mass on the ball");
    double mean = mass / vol;
    double factor = 1.0 / std::sqrt(mean);

    int m = static_cast<int>(std::ceil(1.0 / h_out - 1e-9));
    int n = 2 * (m + 1) + 1;
    GridDomain out_dom = make_ball(n, h_out);
    LineFieldState out(std::move(out_dom), state.params);
    const GridDomain& od = out.domain;
    for (int iz = 0; iz < od.nz; ++iz)
        for (int iy = 0; iy < od.ny; ++iy)
            for (int ix = 0; ix < od.nx; ++ix) {
                if (od.role(ix, iy, iz) == NodeRole::Exterior) continue;
                Vec3 x = od.pos(ix, iy, iz);
                Vec3 src = {a.x + r * x.x, a.y + r * x.y, a.z + r * x.z};
                out.at(ix, iy, iz) = factor * sample_w_aligned(state, src);
            }
    return out;
}

double homogeneity_defect(const LineFieldState& state, const Vec3& a,
                          const std::vector<double>& radii) {
    if (radii.size() < 2) throw InvalidInputError("homogeneity_defect: need at least 2 radii");
    double rmin = *std::min_element(radii.begin(), radii.end());
    double h_out = state.domain.h / rmin;
    // keep the comparison grid manageable
    if (h_out < 2.0 / 128.0) h_out = 2.0 / 128.0;

    std::vector<LineFieldState> blowups;
    blowups.reserve(radii.size());
    for (double r : radii) blowups.push_back(blowup_rescale(state, a, r, h_out));

    const GridDomain& d = blowups.front().domain;
    double h3 = h_out * h_out * h_out;
    double worst = 0.0;
    for (std::size_t i = 0; i < blowups.size(); ++i)
        for (std::size_t j = i + 1; j < blowups.size(); ++j) {
            double acc = 0.0;
            for (int iz = 0; iz < d.nz; ++iz)
                for (int iy = 0; iy < d.ny; ++iy)
                    for (int ix = 0; ix < d.nx; ++ix) {
                        if (d.role(ix, iy, iz) == NodeRole::Exterior) continue;
                        Vec3 p = d.pos(ix, iy, iz);
                        double wgt = std::clamp((1.0 - norm(p)) / h_out + 0.5, 0.0, 1.0);
                        if (wgt <= 0.0) continue;
                        acc += wgt * edge_sq_distance(blowups[i].at(ix, iy, iz),
                                                      blowups[j].at(ix, iy, iz), state.params);
                    }
            worst = std::max(worst, std::sqrt(acc * h3));
        }
    return worst;
}

}  // namespace edlf
