#include <string>

#include "doctest.h"
#include "edlf/config.hpp"

using namespace edlf;

namespace {

bool has_error_containing(const ParseResult& res, const std::string& needle) {
    for (const auto& e : res.errors)
        if (e.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("minimal line_defect config parses with documented defaults") {
    ParseResult res = parse_config("experiment = line_defect\n");
    REQUIRE(res.ok());
    CHECK(*res.config == default_config(ExperimentKind::LineDefect));
    CHECK(res.config->shape == GridShape::Cylinder);
    CHECK(res.config->nx == 48);
    CHECK(res.config->solver.levels == 3);
    CHECK(res.config->diag.centers.size() == 3);
}

TEST_CASE("k below the cone threshold is rejected") {
    ParseResult res = parse_config(
        "experiment = line_defect\n"
        "cone.k = 0.5\n");
    CHECK_FALSE(res.ok());
    CHECK(has_error_containing(res, "k > 1"));
    CHECK(has_error_containing(res, "line 2"));
}

TEST_CASE("loop outside the domain is rejected with the offending key") {
    ParseResult res = parse_config(
        "experiment = line_defect\n"
        "diag.loops = 0,0,0.5 0.9 z 64\n");  // radius beyond the cylinder wall
    CHECK_FALSE(res.ok());
    CHECK(has_error_containing(res, "diag.loops"));
}

TEST_CASE("unknown key and malformed lines are reported with line numbers") {
    ParseResult res = parse_config(
        "experiment = custom\n"
        "grid.shape = box\n"
        "no.such.key = 1\n"
        "this line has no equals\n");
    CHECK_FALSE(res.ok());
    CHECK(has_error_containing(res, "unknown key 'no.such.key'"));
    CHECK(has_error_containing(res, "line 3"));
    CHECK(has_error_containing(res, "line 4"));
}

TEST_CASE("all errors are collected, not just the first") {
    ParseResult res = parse_config(
        "experiment = line_defect\n"
        "cone.k = 0.5\n"
        "grid.h = -1\n"
        "solver.shrink = 2\n");
    CHECK_FALSE(res.ok());
    CHECK(res.errors.size() >= 3);
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
    ParseResult res = parse_config(
        "# a comment\n"
        "\n"
        "experiment = point_defect_ck   # trailing comment\n"
        "  cone.k   =   2.5\n");
    REQUIRE(res.ok());
    CHECK(res.config->experiment == ExperimentKind::PointDefectCk);
    CHECK(res.config->k == 2.5);
    CHECK(res.config->target == TargetMode::CkNoQuotient);
}

TEST_CASE("config round-trip is the identity") {
    // exercise every serialized field with non-default values
    ExperimentConfig c = default_config(ExperimentKind::LineDefect);
    c.k = 2.25;
    c.s0 = 1.5;
    c.nx = 40;
    c.ny = 44;
    c.nz = 52;
    c.h = 0.0217;
    c.origin_auto = false;
    c.origin = {-0.4, -0.45, 0.01};
    c.solver.max_iters = 1234;
    c.solver.grad_tol = 3.5e-7;
    c.solver.seed = 987654321;
    c.solver.levels = 2;
    c.solver.init_mode = InitMode::Random;
    c.diag.radii = {0.1, 0.17};
    c.diag.loops = {{{0.0, 0.0, 0.4}, 0.2, 'z', 64}};
    c.diag.spheres = {{{0.0, 0.0, 0.5}, 0.25}};
    c.diag.eps_z = 0.5;
    c.output_dir = "artifacts/run1";

    std::string text = serialize_config(c);
    ParseResult res = parse_config(text);
    REQUIRE(res.ok());
    CHECK(*res.config == c);
    // a second round trip is byte-stable too
    CHECK(serialize_config(*res.config) == text);
}

TEST_CASE("overrides apply on top of a base config") {
    ExperimentConfig base = default_config(ExperimentKind::LineDefect);
    ParseResult res = apply_overrides(base, {"cone.k = 9", "solver.seed = 42"});
    REQUIRE(res.ok());
    CHECK(res.config->k == 9.0);
    CHECK(res.config->solver.seed == 42);
    CHECK(res.config->nx == base.nx);

    ParseResult bad = apply_overrides(base, {"cone.k = 0.2"});
    CHECK_FALSE(bad.ok());
}

TEST_CASE("from_file init requires a path") {
    ParseResult res = parse_config(
        "experiment = custom\n"
        "solver.init = from_file\n");
    CHECK_FALSE(res.ok());
    CHECK(has_error_containing(res, "init_file"));
}
