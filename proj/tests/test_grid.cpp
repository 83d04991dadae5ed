#include <cmath>

#include "doctest.h"
#include "edlf/grid.hpp"
#include "edlf/rng.hpp"

using namespace edlf;

TEST_CASE("box roles and validation") {
    GridDomain d = make_box(5, 4, 3, 0.5, {0, 0, 0});
    CHECK(d.size() == 5u * 4 * 3);
    CHECK(d.role(0, 0, 0) == NodeRole::BoundaryFixed);
    CHECK(d.role(2, 1, 1) == NodeRole::Interior);
    CHECK(d.role(4, 3, 2) == NodeRole::BoundaryFixed);
    CHECK(d.dist_to_boundary({1.0, 0.75, 0.5}) == doctest::Approx(0.5));

    // corrupting a role breaks the interior-neighbor invariant
    GridDomain bad = d;
    bad.roles[bad.index(2, 1, 0)] = NodeRole::Exterior;  // neighbor of (2,1,1)
    CHECK_THROWS_AS(bad.validate(), InvalidInputError);
}

TEST_CASE("cylinder caps are free") {
    GridDomain d = make_cylinder(17, 1.0 / 16.0);
    int c = 17 / 2;
    // axis node column lands exactly on x = y = 0
    Vec3 p = d.pos(c, c, 0);
    CHECK(p.x == doctest::Approx(0.0));
    CHECK(p.y == doctest::Approx(0.0));
    // cap nodes on the axis are interior (natural boundary)
    CHECK(d.role(c, c, 0) == NodeRole::Interior);
    CHECK(d.role(c, c, 16) == NodeRole::Interior);
    // lateral rim is fixed
    bool found_fixed = false;
    for (int ix = 0; ix < d.nx; ++ix)
        for (int iy = 0; iy < d.ny; ++iy)
            if (d.role(ix, iy, 8) == NodeRole::BoundaryFixed) found_fixed = true;
    CHECK(found_fixed);
    CHECK_NOTHROW(d.validate());
}

TEST_CASE("ball mask") {
    GridDomain d = make_ball(17, 1.0 / 16.0);
    int c = 17 / 2;
    CHECK(d.role(c, c, c) == NodeRole::Interior);
    CHECK(d.role(0, 0, 0) == NodeRole::Exterior);
    CHECK(d.mask_radius() == doctest::Approx((c - 1) / 16.0));
    CHECK(d.dist_to_boundary(d.mask_center()) == doctest::Approx(d.mask_radius()));
    CHECK_NOTHROW(d.validate());
}

TEST_CASE("trilinear samplers") {
    GridDomain dom = make_box(9, 9, 9, 0.25, {-1, -1, -1});
    ConeParams p;
    p.k = 4.0;
    LineFieldState st(std::move(dom), p);
    st.apply_everywhere([](const Vec3&) { return Vec3{0.3, -0.4, 1.2}; });

    Vec3 q{0.13, -0.57, 0.2};
    CHECK(sample_s_trilinear(st, q) == doctest::Approx(norm(Vec3{0.3, -0.4, 1.2})));
    CHECK(sample_usq_trilinear(st, q) == doctest::Approx(4.0 * norm_sq(Vec3{0.3, -0.4, 1.2})));
    Vec3 w = sample_w_aligned(st, q);
    CHECK(norm(w - Vec3{0.3, -0.4, 1.2}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sign-aligned sampling is stable across a representative flip") {
    // quotient-constant field with scrambled signs; aligned interpolation must
    // return a representative of the same line with full magnitude
    GridDomain dom = make_box(7, 7, 7, 0.25, {0, 0, 0});
    ConeParams p;
    p.k = 2.0;
    LineFieldState st(std::move(dom), p);
    const Vec3 base{0.6, 0.8, 0.0};
    Rng rng(23);
    for (std::size_t i = 0; i < st.values.size(); ++i)
        st.values[i] = (rng.next_double() < 0.5 ? 1.0 : -1.0) * base;

    Rng qrng(29);
    for (int trial = 0; trial < 50; ++trial) {
        Vec3 q{qrng.uniform(0.1, 1.4), qrng.uniform(0.1, 1.4), qrng.uniform(0.1, 1.4)};
        Vec3 w = sample_w_aligned(st, q);
        CHECK(std::abs(dot(w, base)) == doctest::Approx(norm_sq(base)).epsilon(1e-12));
    }
}

TEST_CASE("boundary helpers") {
    GridDomain dom = make_cylinder(9, 0.125);
    ConeParams p;
    p.k = 4.0;
    LineFieldState st(std::move(dom), p);
    st.apply_boundary([](const Vec3&) { return Vec3{2.0, 0.0, 0.0}; });
    CHECK(st.max_boundary_s() == doctest::Approx(2.0));
    CHECK(st.median_boundary_s() == doctest::Approx(2.0));

    st.at(4, 4, 4) = {std::nan(""), 0, 0};
    CHECK_THROWS_AS(st.check_finite(), InvalidInputError);
}
