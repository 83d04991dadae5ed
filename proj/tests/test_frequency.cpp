#include <cmath>

#include "doctest.h"
#include "edlf/frequency.hpp"
#include "edlf/oracle2d.hpp"

using namespace edlf;

namespace {

// analytic cylinder lift, axis through the origin along e3, on a centered box
LineFieldState make_lift(int n, double h, double k = 4.0, double lambda = 1.0) {
    double o = -(n / 2) * h;
    GridDomain dom = make_box(n, n, n, h, {o, o, o});
    Homogeneous2DMinimizer m;
    m.k = k;
    m.lambda = lambda;
    return lift_cylinder(m, {0, 0, 0}, {0, 0, 1}, std::move(dom));
}

}  // namespace

TEST_CASE("frequency of the analytic cylinder lift is alpha") {
    LineFieldState lift = make_lift(33, 1.0 / 32.0);
    for (double r : {0.125, 0.25, 0.375}) {
        FrequencyQuantities q = frequency_quantities(lift, {0, 0, 0}, r);
        CHECK(q.N == doctest::Approx(0.25).epsilon(0.12));  // 0.25 +- 0.03
        CHECK(std::abs(q.N - 0.25) <= 0.03);
    }
    // any axis point works, not just the center
    FrequencyQuantities q = frequency_quantities(lift, {0, 0, 0.125}, 0.25);
    CHECK(std::abs(q.N - 0.25) <= 0.03);
}

TEST_CASE("constant field: D = 0, N = 0, doubling is the surface ratio") {
    GridDomain dom = make_box(33, 33, 33, 1.0 / 32.0, {-0.5, -0.5, -0.5});
    ConeParams p;
    p.k = 4.0;
    LineFieldState st(std::move(dom), p);
    st.apply_everywhere([](const Vec3&) { return Vec3{0.7, 0.7, 0.1}; });
    FrequencyQuantities q = frequency_quantities(st, {0, 0, 0}, 0.2);
    CHECK(q.D == doctest::Approx(0.0));
    CHECK(q.N == doctest::Approx(0.0));

    DoublingReport rep = check_doubling(st, {0, 0, 0}, 0.15, 0.3, 0.05);
    CHECK(rep.pass);
    CHECK(rep.H_R / rep.H_r == doctest::Approx(4.0).epsilon(0.01));  // H ~ r^2
}

TEST_CASE("homogeneous field has a constant frequency profile") {
    LineFieldState lift = make_lift(33, 1.0 / 32.0);
    FrequencyProfile prof = make_profile(lift, {0, 0, 0}, {0.125, 0.1875, 0.25, 0.3125, 0.375});
    REQUIRE(prof.N.size() == 5);
    for (std::size_t i = 1; i < prof.N.size(); ++i)
        CHECK(prof.N[i] == doctest::Approx(prof.N[0]).epsilon(0.02));
    // renormalized energy E is nondecreasing in r
    for (std::size_t i = 1; i < prof.E.size(); ++i) CHECK(prof.E[i] >= prof.E[i - 1] * (1 - 1e-9));
}

TEST_CASE("monotonicity checker") {
    FrequencyProfile prof;
    prof.radii = {0.1, 0.2, 0.3};
    prof.N = {0.25, 0.25, 0.25};
    CHECK(check_frequency_monotone(prof, 0.0).pass);

    prof.N = {0.30, 0.20, 0.10};  // strictly decreasing: fails, lists both pairs
    MonotoneReport rep = check_frequency_monotone(prof, 0.05);
    CHECK_FALSE(rep.pass);
    CHECK(rep.violations.size() == 2);

    prof.N = {0.25, 0.24, 0.26};  // dip within slack
    CHECK(check_frequency_monotone(prof, 0.05).pass);

    FrequencyProfile tiny;
    tiny.radii = {0.1};
    tiny.N = {0.2};
    CHECK_THROWS_AS(check_frequency_monotone(tiny, 0.0), InvalidInputError);
}

TEST_CASE("doubling exponent of the lift is 2 + 2 alpha") {
    LineFieldState lift = make_lift(65, 1.0 / 64.0);
    for (double r : {0.1, 0.15, 0.2}) {
        FrequencyQuantities qr = frequency_quantities(lift, {0, 0, 0}, r);
        FrequencyQuantities q2 = frequency_quantities(lift, {0, 0, 0}, 2 * r);
        double ratio = q2.H / qr.H;
        CHECK(ratio == doctest::Approx(std::pow(2.0, 2.5)).epsilon(0.03));
        CHECK(check_doubling(lift, {0, 0, 0}, r, 2 * r, 0.05).pass);
    }
}

TEST_CASE("blow-up rescaling normalizes the L2 mass") {
    LineFieldState lift = make_lift(65, 1.0 / 64.0);
    LineFieldState blown = blowup_rescale(lift, {0, 0, 0}, 0.2);
    // recompute the mean of |u|^2 over B_1 on the output grid
    const GridDomain& d = blown.domain;
    double mass = 0.0, vol = 0.0;
    for (int iz = 0; iz < d.nz; ++iz)
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix) {
                if (d.role(ix, iy, iz) == NodeRole::Exterior) continue;
                Vec3 p = d.pos(ix, iy, iz);
                double wgt = std::clamp((1.0 - norm(p)) / d.h + 0.5, 0.0, 1.0);
                mass += wgt * blown.params.k * norm_sq(blown.at(ix, iy, iz));
                vol += wgt;
            }
    CHECK(mass / vol == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("blow-up at unit normalization is a pure resampling") {
    LineFieldState lift = make_lift(65, 1.0 / 64.0);
    const double r = 0.2;
    // rescale the field so the L2 mean over B_r is exactly 1; the blow-up
    // factor then degenerates to 1 and the output is just resampled w
    const GridDomain& d = lift.domain;
    double mass = 0.0, vol = 0.0;
    for (int iz = 0; iz < d.nz; ++iz)
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix) {
                Vec3 p = d.pos(ix, iy, iz);
                double wgt = std::clamp((r - norm(p)) / d.h + 0.5, 0.0, 1.0);
                mass += wgt * lift.params.k * norm_sq(lift.at(ix, iy, iz));
                vol += wgt;
            }
    double scale = 1.0 / std::sqrt(mass / vol);
    LineFieldState unit = lift;
    for (auto& w : unit.values) w = scale * w;

    LineFieldState blown = blowup_rescale(unit, {0, 0, 0}, r);
    const GridDomain& od = blown.domain;
    double worst = 0.0;
    for (int iz = 0; iz < od.nz; ++iz)
        for (int iy = 0; iy < od.ny; ++iy)
            for (int ix = 0; ix < od.nx; ++ix) {
                if (od.role(ix, iy, iz) == NodeRole::Exterior) continue;
                Vec3 x = od.pos(ix, iy, iz);
                Vec3 direct = sample_w_aligned(unit, {r * x.x, r * x.y, r * x.z});
                Vec3 got = blown.at(ix, iy, iz);
                worst = std::max(worst, std::min(norm(got - direct), norm(got + direct)));
            }
    CHECK(worst <= 1e-12);
}

TEST_CASE("blow-ups of a homogeneous field agree across radii") {
    LineFieldState lift = make_lift(65, 1.0 / 64.0);
    double hd = homogeneity_defect(lift, {0, 0, 0}, {0.1, 0.2});
    CHECK(hd <= 0.05);

    // adding a localized bump breaks homogeneity measurably
    LineFieldState bumped = lift;
    const GridDomain& d = bumped.domain;
    for (int iz = 0; iz < d.nz; ++iz)
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix) {
                Vec3 p = d.pos(ix, iy, iz) - Vec3{0.15, 0.0, 0.0};
                double r2 = norm_sq(p) / (0.05 * 0.05);
                if (r2 < 1.0) bumped.at(ix, iy, iz) += Vec3{0, 0, 0.5 * (1.0 - r2)};
            }
    double hd_bump = homogeneity_defect(bumped, {0, 0, 0}, {0.1, 0.2});
    CHECK(hd_bump > 2.0 * hd);
    CHECK(hd_bump > 0.05);
}

TEST_CASE("frequency is invariant under field scaling and sign flip") {
    LineFieldState lift = make_lift(33, 1.0 / 32.0);
    FrequencyQuantities base = frequency_quantities(lift, {0, 0, 0}, 0.25);

    LineFieldState scaled = lift;
    for (auto& w : scaled.values) w = 2.0 * w;  // exact in floating point
    FrequencyQuantities q2 = frequency_quantities(scaled, {0, 0, 0}, 0.25);
    CHECK(q2.N == doctest::Approx(base.N).epsilon(1e-13));
    CHECK(q2.D == doctest::Approx(4.0 * base.D).epsilon(1e-13));
    CHECK(q2.H == doctest::Approx(4.0 * base.H).epsilon(1e-13));

    LineFieldState flipped = lift;
    for (auto& w : flipped.values) w = -w;
    FrequencyQuantities qf = frequency_quantities(flipped, {0, 0, 0}, 0.25);
    CHECK(qf.N == doctest::Approx(base.N).epsilon(1e-13));
}

TEST_CASE("frequency is scaling-covariant through blow-ups") {
    LineFieldState lift = make_lift(65, 1.0 / 64.0);
    const double r = 0.25, rho = 0.5;
    LineFieldState blown = blowup_rescale(lift, {0, 0, 0}, r);
    FrequencyQuantities inner = frequency_quantities(blown, {0, 0, 0}, rho);
    FrequencyQuantities outer = frequency_quantities(lift, {0, 0, 0}, r * rho);
    CHECK(inner.N == doctest::Approx(outer.N).epsilon(0.03));
}

TEST_CASE("frequency preconditions and failure modes") {
    LineFieldState lift = make_lift(33, 1.0 / 32.0);
    // radius below 4h refused
    CHECK_THROWS_AS(frequency_quantities(lift, {0, 0, 0}, 0.06), InvalidInputError);
    // ball poking outside the box refused
    CHECK_THROWS_AS(frequency_quantities(lift, {0.4, 0, 0}, 0.3), InvalidInputError);

    // zero mass near the center: H floor triggers
    LineFieldState hollow = lift;
    const GridDomain& d = hollow.domain;
    for (int iz = 0; iz < d.nz; ++iz)
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix)
                if (norm(d.pos(ix, iy, iz)) < 0.3) hollow.at(ix, iy, iz) = Vec3{};
    CHECK_THROWS_AS(frequency_quantities(hollow, {0, 0, 0}, 0.15), FrequencyUndefinedError);
    CHECK_THROWS_AS(blowup_rescale(hollow, {0, 0, 0}, 0.125), DegenerateBlowupError);

    // profile drops the bad radius and flags it
    FrequencyProfile prof = make_profile(hollow, {0, 0, 0}, {0.125, 0.4});
    CHECK(prof.dropped_radii.size() == 1);
    CHECK(prof.radii.size() == 1);
}
