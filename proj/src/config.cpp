#include "edlf/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "edlf/errors.hpp"

namespace edlf {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_double(const std::string& s, double& out) {
    const char* p = s.c_str();
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p || *end != '\0' || !std::isfinite(v)) return false;
    out = v;
    return true;
}

bool parse_int(const std::string& s, long long& out) {
    const char* p = s.c_str();
    char* end = nullptr;
    long long v = std::strtoll(p, &end, 10);
    if (end == p || *end != '\0') return false;
    out = v;
    return true;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    const char* p = s.c_str();
    char* end = nullptr;
    unsigned long long v = std::strtoull(p, &end, 10);
    if (end == p || *end != '\0') return false;
    out = v;
    return true;
}

bool parse_vec3(const std::string& s, Vec3& out) {
    auto parts = split(s, ',');
    if (parts.size() != 3) return false;
    return parse_double(parts[0], out.x) && parse_double(parts[1], out.y) &&
           parse_double(parts[2], out.z);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(const Vec3& v) { return fmt(v.x) + "," + fmt(v.y) + "," + fmt(v.z); }

}  // namespace

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::LineDefect:
            return "line_defect";
        case ExperimentKind::PointDefectCk:
            return "point_defect_ck";
        case ExperimentKind::CylinderOracle:
            return "cylinder_oracle";
        case ExperimentKind::Custom:
            return "custom";
    }
    return "?";
}

Vec3 ExperimentConfig::resolved_origin() const {
    if (!origin_auto) return origin;
    double ox = -(nx / 2) * h;
    double oy = -(ny / 2) * h;
    double oz = (shape == GridShape::Cylinder) ? 0.0 : -(nz / 2) * h;
    return {ox, oy, oz};
}

GridDomain ExperimentConfig::build_domain() const {
    return make_domain(shape, nx, ny, nz, h, resolved_origin());
}

ConeParams ExperimentConfig::cone_params() const {
    ConeParams p;
    p.k = k;
    p.target_mode = target;
    return p;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
    return experiment == o.experiment && k == o.k && target == o.target && shape == o.shape &&
           nx == o.nx && ny == o.ny && nz == o.nz && h == o.h && origin_auto == o.origin_auto &&
           (origin_auto || origin == o.origin) && boundary_generator == o.boundary_generator &&
           s0 == o.s0 && boundary_value == o.boundary_value && solver == o.solver &&
           diag == o.diag && output_dir == o.output_dir;
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
        case ExperimentKind::LineDefect:
            c.shape = GridShape::Cylinder;
            c.target = TargetMode::DkQuotient;
            c.boundary_generator = "planar_half_turn";
            c.nx = c.ny = c.nz = 48;
            c.h = 1.0 / 47.0;
            c.solver.levels = 3;
            c.solver.grad_tol = 2e-6;
            c.diag.eps_z = 0.62;
            c.diag.centers = {{0.0, 0.0, 0.45}, {0.0, 0.0, 0.5}, {0.0, 0.0, 0.55}};
            c.diag.spheres = {{{0.0, 0.0, 0.45}, 0.3}, {{0.0, 0.0, 0.5}, 0.3},
                              {{0.0, 0.0, 0.55}, 0.3}};
            break;
        case ExperimentKind::PointDefectCk:
            c.shape = GridShape::Ball;
            c.target = TargetMode::CkNoQuotient;
            c.boundary_generator = "radial_hedgehog";
            c.nx = c.ny = c.nz = 48;
            c.h = 1.0 / 47.0;
            c.solver.levels = 3;
            c.solver.grad_tol = 2e-6;
            c.diag.eps_z = 0.35;
            break;
        case ExperimentKind::CylinderOracle:
            c.shape = GridShape::Box;
            c.target = TargetMode::DkQuotient;
            c.boundary_generator = "oracle_lift";
            c.nx = c.ny = c.nz = 65;
            c.h = 1.0 / 64.0;
            c.diag.eps_z = 0.1;
            c.diag.centers = {{0.0, 0.0, 0.0}};
            c.diag.radii = {0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
            break;
        case ExperimentKind::Custom:
            break;
    }
    return c;
}

namespace {

struct Parser {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    std::map<std::string, int> key_line;

    void fail(int line, const std::string& msg) {
        errors.push_back("line " + std::to_string(line) + ": " + msg);
    }

    void apply(const std::string& key, const std::string& val, int line) {
        key_line[key] = line;
        if (key == "experiment") {
            // handled in the pre-scan
        } else if (key == "cone.k") {
            if (!parse_double(val, cfg.k)) fail(line, "cone.k: invalid number '" + val + "'");
        } else if (key == "cone.target") {
            if (val == "Dk")
                cfg.target = TargetMode::DkQuotient;
            else if (val == "Ck")
                cfg.target = TargetMode::CkNoQuotient;
            else
                fail(line, "cone.target: expected Dk or Ck, got '" + val + "'");
        } else if (key == "grid.shape") {
            if (val == "box")
                cfg.shape = GridShape::Box;
            else if (val == "ball")
                cfg.shape = GridShape::Ball;
            else if (val == "cylinder")
                cfg.shape = GridShape::Cylinder;
            else
                fail(line, "grid.shape: expected box, ball or cylinder, got '" + val + "'");
        } else if (key == "grid.n") {
            long long n;
            if (!parse_int(val, n) || n < 2 || n > 4096)
                fail(line, "grid.n: invalid node count '" + val + "'");
            else
                cfg.nx = cfg.ny = cfg.nz = static_cast<int>(n);
        } else if (key == "grid.nx" || key == "grid.ny" || key == "grid.nz") {
            long long n;
            if (!parse_int(val, n) || n < 2 || n > 4096)
                fail(line, key + ": invalid node count '" + val + "'");
            else if (key == "grid.nx")
                cfg.nx = static_cast<int>(n);
            else if (key == "grid.ny")
                cfg.ny = static_cast<int>(n);
            else
                cfg.nz = static_cast<int>(n);
        } else if (key == "grid.h") {
            if (!parse_double(val, cfg.h) || !(cfg.h > 0.0))
                fail(line, "grid.h: spacing must be a positive number");
        } else if (key == "grid.origin") {
            if (val == "auto") {
                cfg.origin_auto = true;
            } else if (parse_vec3(val, cfg.origin)) {
                cfg.origin_auto = false;
            } else {
                fail(line, "grid.origin: expected auto or x,y,z");
            }
        } else if (key == "boundary.generator") {
            if (val == "planar_half_turn" || val == "radial_hedgehog" || val == "constant" ||
                val == "oracle_lift")
                cfg.boundary_generator = val;
            else
                fail(line, "boundary.generator: unknown generator '" + val + "'");
        } else if (key == "boundary.s0") {
            if (!parse_double(val, cfg.s0) || !(cfg.s0 > 0.0))
                fail(line, "boundary.s0: must be a positive number");
        } else if (key == "boundary.value") {
            if (!parse_vec3(val, cfg.boundary_value)) fail(line, "boundary.value: expected x,y,z");
        } else if (key == "solver.max_iters") {
            long long n;
            if (!parse_int(val, n) || n < 0)
                fail(line, "solver.max_iters: invalid count");
            else
                cfg.solver.max_iters = static_cast<int>(n);
        } else if (key == "solver.grad_tol") {
            if (!parse_double(val, cfg.solver.grad_tol) || !(cfg.solver.grad_tol > 0.0))
                fail(line, "solver.grad_tol: must be positive");
        } else if (key == "solver.step0") {
            if (!parse_double(val, cfg.solver.step0) || !(cfg.solver.step0 > 0.0))
                fail(line, "solver.step0: must be positive");
        } else if (key == "solver.shrink") {
            if (!parse_double(val, cfg.solver.shrink) || !(cfg.solver.shrink > 0.0) ||
                !(cfg.solver.shrink < 1.0))
                fail(line, "solver.shrink: must lie in (0,1)");
        } else if (key == "solver.armijo_c") {
            if (!parse_double(val, cfg.solver.armijo_c) || !(cfg.solver.armijo_c > 0.0) ||
                !(cfg.solver.armijo_c < 1.0))
                fail(line, "solver.armijo_c: must lie in (0,1)");
        } else if (key == "solver.seed") {
            if (!parse_u64(val, cfg.solver.seed)) fail(line, "solver.seed: invalid integer");
        } else if (key == "solver.init") {
            if (val == "boundary_harmonic_fill")
                cfg.solver.init_mode = InitMode::BoundaryHarmonicFill;
            else if (val == "random")
                cfg.solver.init_mode = InitMode::Random;
            else if (val == "from_file")
                cfg.solver.init_mode = InitMode::FromFile;
            else
                fail(line, "solver.init: unknown mode '" + val + "'");
        } else if (key == "solver.init_file") {
            cfg.solver.init_file = val;
        } else if (key == "solver.levels") {
            long long n;
            if (!parse_int(val, n) || n < 1 || n > 10)
                fail(line, "solver.levels: must be in [1,10]");
            else
                cfg.solver.levels = static_cast<int>(n);
        } else if (key == "solver.fill_sweeps") {
            long long n;
            if (!parse_int(val, n) || n < 0)
                fail(line, "solver.fill_sweeps: invalid count");
            else
                cfg.solver.fill_sweeps = static_cast<int>(n);
        } else if (key == "diag.centers") {
            cfg.diag.centers.clear();
            if (!val.empty())
                for (const std::string& item : split(val, ';')) {
                    Vec3 v;
                    if (!parse_vec3(item, v))
                        fail(line, "diag.centers: expected x,y,z entries, got '" + item + "'");
                    else
                        cfg.diag.centers.push_back(v);
                }
        } else if (key == "diag.radii") {
            cfg.diag.radii.clear();
            if (!val.empty())
                for (const std::string& item : split(val, ',')) {
                    double r;
                    if (!parse_double(item, r) || !(r > 0.0))
                        fail(line, "diag.radii: expected positive numbers, got '" + item + "'");
                    else
                        cfg.diag.radii.push_back(r);
                }
        } else if (key == "diag.loops") {
            cfg.diag.loops.clear();
            if (!val.empty())
                for (const std::string& item : split(val, ';')) {
                    std::istringstream ss(item);
                    std::string cstr, axis;
                    double r;
                    int nsamp;
                    LoopRequest L;
                    if (!(ss >> cstr >> r >> axis >> nsamp) || !parse_vec3(cstr, L.center) ||
                        !(r > 0.0) || axis.size() != 1 ||
                        (axis[0] != 'x' && axis[0] != 'y' && axis[0] != 'z') || nsamp < 8) {
                        fail(line, "diag.loops: expected 'cx,cy,cz r axis samples', got '" +
                                       item + "'");
                    } else {
                        L.radius = r;
                        L.axis = axis[0];
                        L.samples = nsamp;
                        cfg.diag.loops.push_back(L);
                    }
                }
        } else if (key == "diag.spheres") {
            cfg.diag.spheres.clear();
            if (!val.empty())
                for (const std::string& item : split(val, ';')) {
                    std::istringstream ss(item);
                    std::string cstr;
                    double r;
                    SphereRequest S;
                    if (!(ss >> cstr >> r) || !parse_vec3(cstr, S.center) || !(r > 0.0)) {
                        fail(line, "diag.spheres: expected 'cx,cy,cz r', got '" + item + "'");
                    } else {
                        S.radius = r;
                        cfg.diag.spheres.push_back(S);
                    }
                }
        } else if (key == "diag.eps_z") {
            if (!parse_double(val, cfg.diag.eps_z)) fail(line, "diag.eps_z: invalid number");
        } else if (key == "diag.s_floor") {
            if (!parse_double(val, cfg.diag.s_floor)) fail(line, "diag.s_floor: invalid number");
        } else if (key == "output.dir") {
            cfg.output_dir = val;
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    int line_of(const std::string& key) const {
        auto it = key_line.find(key);
        return it == key_line.end() ? 0 : it->second;
    }

    void validate() {
        if (!(cfg.k > 1.0))
            fail(line_of("cone.k"), "cone.k: k > 1 required by the cone target");
        if (!(cfg.diag.eps_z > 0.0 && cfg.diag.eps_z < 1.0))
            fail(line_of("diag.eps_z"), "diag.eps_z: must lie in (0,1)");
        if (!(cfg.diag.s_floor > 0.0 && cfg.diag.s_floor < 1.0))
            fail(line_of("diag.s_floor"), "diag.s_floor: must lie in (0,1)");
        if (cfg.solver.init_mode == InitMode::FromFile && cfg.solver.init_file.empty())
            fail(line_of("solver.init"), "solver.init: from_file requires solver.init_file");
        if (cfg.nx < 8 || cfg.ny < 8 || cfg.nz < 8)
            fail(line_of("grid.n"), "grid dims: need at least 8 nodes per axis");
        if (!errors.empty()) return;

        // geometric checks need the domain
        GridDomain dom;
        try {
            dom = cfg.build_domain();
        } catch (const Error& e) {
            fail(line_of("grid.shape"), std::string("grid: ") + e.what());
            return;
        }
        for (std::size_t i = 0; i < cfg.diag.centers.size(); ++i)
            if (dom.dist_to_boundary(cfg.diag.centers[i]) <= 0.0)
                fail(line_of("diag.centers"),
                     "diag.centers: center " + std::to_string(i) + " lies outside the domain");
        for (std::size_t i = 0; i < cfg.diag.loops.size(); ++i) {
            const LoopRequest& L = cfg.diag.loops[i];
            Vec3 n = L.axis == 'x' ? Vec3{1, 0, 0} : L.axis == 'y' ? Vec3{0, 1, 0} : Vec3{0, 0, 1};
            Vec3 seed = std::abs(n.y) < 0.9 ? Vec3{0, 1, 0} : Vec3{0, 0, 1};
            Vec3 f1 = cross(seed, n);
            f1 = f1 / norm(f1);
            Vec3 f2 = cross(n, f1);
            bool ok = true;
            for (int s = 0; s < 32 && ok; ++s) {
                double t = 2.0 * 3.14159265358979323846 * s / 32;
                Vec3 p = L.center + L.radius * std::cos(t) * f1 + L.radius * std::sin(t) * f2;
                ok = dom.dist_to_boundary(p) > 0.0;
            }
            if (!ok)
                fail(line_of("diag.loops"),
                     "diag.loops: loop " + std::to_string(i) + " leaves the domain");
        }
        for (std::size_t i = 0; i < cfg.diag.spheres.size(); ++i)
            if (dom.dist_to_boundary(cfg.diag.spheres[i].center) < cfg.diag.spheres[i].radius)
                fail(line_of("diag.spheres"),
                     "diag.spheres: sphere " + std::to_string(i) + " leaves the domain");
    }
};

std::vector<std::pair<int, std::pair<std::string, std::string>>> tokenize(
    const std::string& text, std::vector<std::string>& errors) {
    std::vector<std::pair<int, std::pair<std::string, std::string>>> out;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) {
            errors.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        out.push_back({lineno, {key, val}});
    }
    return out;
}

}  // namespace

ParseResult parse_config(const std::string& text) {
    ParseResult res;
    std::vector<std::string> tok_errors;
    auto entries = tokenize(text, tok_errors);

    ExperimentKind kind = ExperimentKind::Custom;
    bool kind_seen = false;
    for (const auto& [line, kv] : entries) {
        if (kv.first != "experiment") continue;
        if (kv.second == "line_defect")
            kind = ExperimentKind::LineDefect;
        else if (kv.second == "point_defect_ck")
            kind = ExperimentKind::PointDefectCk;
        else if (kv.second == "cylinder_oracle")
            kind = ExperimentKind::CylinderOracle;
        else if (kv.second == "custom")
            kind = ExperimentKind::Custom;
        else
            tok_errors.push_back("line " + std::to_string(line) + ": experiment: unknown name '" +
                                 kv.second + "'");
        kind_seen = true;
    }
    (void)kind_seen;

    Parser p;
    p.cfg = default_config(kind);
    p.errors = tok_errors;
    for (const auto& [line, kv] : entries) p.apply(kv.first, kv.second, line);
    p.validate();

    res.errors = p.errors;
    if (res.errors.empty()) res.config = p.cfg;
    return res;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "experiment = " << experiment_name(c.experiment) << "\n";
    out << "cone.k = " << fmt(c.k) << "\n";
    out << "cone.target = " << (c.target == TargetMode::DkQuotient ? "Dk" : "Ck") << "\n";
    out << "grid.shape = "
        << (c.shape == GridShape::Box ? "box" : c.shape == GridShape::Ball ? "ball" : "cylinder")
        << "\n";
    out << "grid.nx = " << c.nx << "\n";
    out << "grid.ny = " << c.ny << "\n";
    out << "grid.nz = " << c.nz << "\n";
    out << "grid.h = " << fmt(c.h) << "\n";
    out << "grid.origin = " << (c.origin_auto ? std::string("auto") : fmt(c.origin)) << "\n";
    out << "boundary.generator = " << c.boundary_generator << "\n";
    out << "boundary.s0 = " << fmt(c.s0) << "\n";
    out << "boundary.value = " << fmt(c.boundary_value) << "\n";
    out << "solver.max_iters = " << c.solver.max_iters << "\n";
    out << "solver.grad_tol = " << fmt(c.solver.grad_tol) << "\n";
    out << "solver.step0 = " << fmt(c.solver.step0) << "\n";
    out << "solver.shrink = " << fmt(c.solver.shrink) << "\n";
    out << "solver.armijo_c = " << fmt(c.solver.armijo_c) << "\n";
    out << "solver.seed = " << c.solver.seed << "\n";
    const char* init = c.solver.init_mode == InitMode::BoundaryHarmonicFill
                           ? "boundary_harmonic_fill"
                           : (c.solver.init_mode == InitMode::Random ? "random" : "from_file");
    out << "solver.init = " << init << "\n";
    if (!c.solver.init_file.empty()) out << "solver.init_file = " << c.solver.init_file << "\n";
    out << "solver.levels = " << c.solver.levels << "\n";
    out << "solver.fill_sweeps = " << c.solver.fill_sweeps << "\n";
    out << "diag.centers = ";
    for (std::size_t i = 0; i < c.diag.centers.size(); ++i)
        out << (i ? "; " : "") << fmt(c.diag.centers[i]);
    out << "\n";
    out << "diag.radii = ";
    for (std::size_t i = 0; i < c.diag.radii.size(); ++i)
        out << (i ? "," : "") << fmt(c.diag.radii[i]);
    out << "\n";
    out << "diag.loops = ";
    for (std::size_t i = 0; i < c.diag.loops.size(); ++i) {
        const auto& L = c.diag.loops[i];
        out << (i ? "; " : "") << fmt(L.center) << " " << fmt(L.radius) << " " << L.axis << " "
            << L.samples;
    }
    out << "\n";
    out << "diag.spheres = ";
    for (std::size_t i = 0; i < c.diag.spheres.size(); ++i)
        out << (i ? "; " : "") << fmt(c.diag.spheres[i].center) << " "
            << fmt(c.diag.spheres[i].radius);
    out << "\n";
    out << "diag.eps_z = " << fmt(c.diag.eps_z) << "\n";
    out << "diag.s_floor = " << fmt(c.diag.s_floor) << "\n";
    out << "output.dir = " << c.output_dir << "\n";
    return out.str();
}

ParseResult apply_overrides(const ExperimentConfig& base,
                            const std::vector<std::string>& assignments) {
    std::string text = serialize_config(base);
    for (const std::string& a : assignments) text += a + "\n";
    return parse_config(text);
}

}  // namespace edlf
