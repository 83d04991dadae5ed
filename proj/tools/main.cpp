// edlf: numerical laboratory for line and point defects of cone-valued
// harmonic maps (variable degree of orientation liquid crystals).
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "edlf/config.hpp"
#include "edlf/defects.hpp"
#include "edlf/energy.hpp"
#include "edlf/errors.hpp"
#include "edlf/experiments.hpp"
#include "edlf/field_io.hpp"
#include "edlf/frequency.hpp"
#include "edlf/oracle2d.hpp"
#include "edlf/solver.hpp"

namespace {

using namespace edlf;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitIo = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig load_config(const std::string& config_path, ExperimentKind fallback,
                             const std::vector<std::string>& overrides) {
    ParseResult res;
    if (!config_path.empty()) {
        res = parse_config(slurp(config_path));
    } else {
        res.config = default_config(fallback);
    }
    if (!res.errors.empty()) throw ConfigError(res.errors);
    if (!overrides.empty()) {
        res = apply_overrides(*res.config, overrides);
        if (!res.errors.empty()) throw ConfigError(res.errors);
    }
    return *res.config;
}

bool parse_vec3_arg(const std::string& s, Vec3& out) {
    return std::sscanf(s.c_str(), "%lf,%lf,%lf", &out.x, &out.y, &out.z) == 3;
}

int cmd_minimize(const std::string& config_path, const std::vector<std::string>& overrides,
                 const std::string& out_dir) {
    ExperimentConfig cfg = load_config(config_path, ExperimentKind::Custom, overrides);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    std::filesystem::create_directories(cfg.output_dir);

    GridDomain domain = cfg.build_domain();
    ProblemSpec spec;
    spec.params = cfg.cone_params();
    spec.h_finest = cfg.h;
    spec.boundary = make_boundary_generator(cfg, domain);
    ExperimentConfig level_cfg = cfg;
    spec.domain_for_h = [level_cfg](double hh) {
        int ratio = std::max(1, static_cast<int>(std::llround(hh / level_cfg.h)));
        ExperimentConfig lc = level_cfg;
        lc.nx = (level_cfg.nx - 1) / ratio + 1;
        lc.ny = (level_cfg.ny - 1) / ratio + 1;
        lc.nz = (level_cfg.nz - 1) / ratio + 1;
        lc.h = hh;
        return lc.build_domain();
    };

    SolveReport rep;
    LineFieldState state = coarse_to_fine(spec, cfg.solver, &rep);
    std::string field_path = (std::filesystem::path(cfg.output_dir) / "field.edlf").string();
    save_field(field_path, state);
    write_energy_trace_csv(
        (std::filesystem::path(cfg.output_dir) / "energy_trace.csv").string(), rep.energy_trace);
    write_solve_report_txt(
        (std::filesystem::path(cfg.output_dir) / "solve_report.txt").string(), rep);
    std::cout << "field: " << field_path << "\n"
              << "energy: " << rep.final_energy << "  iterations: " << rep.iterations
              << "  rel_grad: " << rep.final_rel_grad
              << "  converged: " << (rep.converged ? "yes" : "no")
              << "  wall_s: " << rep.wall_seconds << "\n";
    return rep.converged ? kExitOk : kExitNoConvergence;
}

int cmd_experiment(const std::string& name, const std::string& config_path,
                   const std::vector<std::string>& overrides, const std::string& out_dir) {
    ExperimentKind kind;
    if (name == "line_defect")
        kind = ExperimentKind::LineDefect;
    else if (name == "point_defect_ck")
        kind = ExperimentKind::PointDefectCk;
    else if (name == "cylinder_oracle")
        kind = ExperimentKind::CylinderOracle;
    else if (name == "custom")
        kind = ExperimentKind::Custom;
    else
        throw InvalidInputError("unknown experiment '" + name + "'");

    std::vector<std::string> all = {"experiment = " + name};
    for (const auto& o : overrides) all.push_back(o);
    ExperimentConfig cfg = load_config(config_path, kind, all);
    cfg.experiment = kind;
    if (!out_dir.empty()) cfg.output_dir = out_dir;

    ArtifactBundle bundle = run_experiment(cfg);
    for (const auto& e : bundle.report)
        std::cout << (e.pass ? "PASS " : "FAIL ") << e.name
                  << (e.details.empty() ? "" : ": " + e.details) << "\n";
    std::cout << "artifacts in " << bundle.dir << "\n";
    if (cfg.experiment != ExperimentKind::CylinderOracle && !bundle.solve.converged)
        return kExitNoConvergence;
    return kExitOk;
}

int cmd_diagnose(const std::string& field_path, const std::string& center_str,
                 const std::string& radii_str, const std::string& out_dir, double slack) {
    LineFieldState state = load_field(field_path);
    Vec3 center;
    if (!parse_vec3_arg(center_str, center))
        throw InvalidInputError("diagnose: --center expects x,y,z");
    std::vector<double> radii;
    {
        std::istringstream ss(radii_str);
        std::string item;
        while (std::getline(ss, item, ',')) radii.push_back(std::stod(item));
    }
    if (radii.empty()) throw InvalidInputError("diagnose: --radii expects r1,r2,...");
    FrequencyProfile prof = make_profile(state, center, radii);
    std::string out = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(out);
    std::string path = (std::filesystem::path(out) / "profile.csv").string();
    write_profile_csv(path, prof);
    std::cout << "r,D,E,H,N\n";
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
        std::printf("%.17g,%.17g,%.17g,%.17g,%.17g\n", prof.radii[i], prof.D[i], prof.E[i],
                    prof.H[i], prof.N[i]);
    for (double r : prof.dropped_radii)
        std::cout << "# dropped radius (H floor): " << r << "\n";
    if (prof.radii.size() >= 2) {
        MonotoneReport rep = check_frequency_monotone(prof, slack);
        std::cout << "# monotone(slack=" << slack << "): " << (rep.pass ? "pass" : "fail") << "\n";
    }
    std::cout << "# wrote " << path << "\n";
    return kExitOk;
}

int cmd_blowup(const std::string& field_path, const std::string& center_str, double radius,
               const std::string& out_path) {
    LineFieldState state = load_field(field_path);
    Vec3 center;
    if (!parse_vec3_arg(center_str, center))
        throw InvalidInputError("blowup: --center expects x,y,z");
    LineFieldState rescaled = blowup_rescale(state, center, radius);
    save_field(out_path, rescaled);
    std::cout << "wrote " << out_path << " (" << rescaled.domain.nx << "^3 unit-ball grid)\n";
    return kExitOk;
}

int cmd_oracle2d(double k, double lambda, double phi0, int samples, double h, int n,
                 const std::string& out_dir) {
    Homogeneous2DMinimizer m;
    m.k = k;
    m.lambda = lambda;
    m.phi0 = phi0;
    m.validate();
    std::string out = out_dir.empty() ? "oracle2d_out" : out_dir;
    std::filesystem::create_directories(out);

    // planar sample in the standard field format
    GridDomain planar;
    planar.nx = n;
    planar.ny = n;
    planar.nz = 1;
    planar.h = h;
    planar.origin = {-(n / 2) * h, -(n / 2) * h, 0.0};
    planar.shape = GridShape::Box;
    planar.roles.assign(planar.size(), NodeRole::Interior);
    ConeParams params;
    params.k = k;
    LineFieldState state(std::move(planar), params);
    state.apply_everywhere([&](const Vec3& x) {
        return eval_2d(m, std::hypot(x.x, x.y), std::atan2(x.y, x.x));
    });
    std::string field_path = (std::filesystem::path(out) / "oracle2d.edlf").string();
    save_field(field_path, state);

    std::string el_path = (std::filesystem::path(out) / "el_residual.csv").string();
    std::ofstream el(el_path, std::ios::trunc);
    el << "samples,residual\n";
    for (int ns : {samples / 2, samples}) {
        std::vector<Vec3> psi(ns);
        for (int i = 0; i < ns; ++i)
            psi[i] = eval_2d(m, 1.0, 2.0 * 3.14159265358979323846 * i / ns);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%d,%.17g\n", ns, el_residual(psi, k, m.alpha()));
        el << buf;
    }
    el.close();

    auto omega = hopf_differential(state);
    double worst = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            Vec3 p = state.domain.pos(ix, iy, 0);
            double r = std::hypot(p.x, p.y);
            if (r < 0.3 || r > 0.9) continue;
            worst = std::max(worst, std::abs(omega[state.domain.index(ix, iy, 0)]));
        }
    std::string hopf_path = (std::filesystem::path(out) / "hopf.csv").string();
    std::ofstream hf(hopf_path, std::ios::trunc);
    char buf[96];
    std::snprintf(buf, sizeof buf, "h,max_abs_omega\n%.17g,%.17g\n", h, worst);
    hf << buf;
    hf.close();

    std::cout << "wrote " << field_path << ", " << el_path << ", " << hopf_path << "\n";
    return kExitOk;
}

int cmd_topology(const std::string& field_path, const std::vector<std::string>& loops,
                 const std::vector<std::string>& spheres, double eps_z, double s_floor) {
    LineFieldState state = load_field(field_path);
    for (const std::string& spec : loops) {
        std::istringstream ss(spec);
        std::string cstr, axis;
        double r;
        int nsamp;
        if (!(ss >> cstr >> r >> axis >> nsamp))
            throw InvalidInputError("topology: --loop expects 'cx,cy,cz r axis samples'");
        Vec3 c;
        if (!parse_vec3_arg(cstr, c)) throw InvalidInputError("topology: bad loop center");
        Vec3 nrm = axis == "x" ? Vec3{1, 0, 0} : axis == "y" ? Vec3{0, 1, 0} : Vec3{0, 0, 1};
        try {
            int cls = loop_class(state, circle_loop(c, r, nrm, nsamp), s_floor);
            std::cout << "loop " << spec << " class " << cls << "\n";
        } catch (const ClassUndefinedError& e) {
            std::cout << "loop " << spec << " undefined: " << e.what() << "\n";
        } catch (const AmbiguityError& e) {
            std::cout << "loop " << spec << " ambiguous: " << e.what() << "\n";
        }
    }
    if (!spheres.empty()) {
        DefectGraph graph = extract_zero_set(state, eps_z);
        classify_components(state, graph, {4.0 * state.domain.h});
        for (const std::string& spec : spheres) {
            std::istringstream ss(spec);
            std::string cstr;
            double r;
            if (!(ss >> cstr >> r))
                throw InvalidInputError("topology: --sphere expects 'cx,cy,cz r'");
            Vec3 c;
            if (!parse_vec3_arg(cstr, c)) throw InvalidInputError("topology: bad sphere center");
            ParityReport rep = sphere_crossing_parity(state, c, r, graph);
            std::cout << "sphere " << spec << " crossings " << rep.crossings.size()
                      << " class1 " << rep.class1_count << " parity "
                      << (rep.even_ok ? "even" : "odd") << "\n";
        }
    }
    return kExitOk;
}

int cmd_defects(const std::string& field_path, double eps_z, const std::string& scales_str,
                const std::string& out_dir) {
    LineFieldState state = load_field(field_path);
    DefectGraph graph = extract_zero_set(state, eps_z);
    std::vector<double> scales;
    if (!scales_str.empty()) {
        std::istringstream ss(scales_str);
        std::string item;
        while (std::getline(ss, item, ',')) scales.push_back(std::stod(item));
    } else {
        scales = {4.0 * state.domain.h, 8.0 * state.domain.h};
    }
    classify_components(state, graph, scales);
    std::string out = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(out);
    write_defect_graph((std::filesystem::path(out) / "defects.txt").string(), graph);
    write_defect_summary_csv((std::filesystem::path(out) / "defects_summary.csv").string(),
                             graph);
    int curves = 0, isolated = 0;
    for (const auto& c : graph.components) {
        if (c.label == ComponentLabel::CurveLike) ++curves;
        if (c.label == ComponentLabel::IsolatedCandidate) ++isolated;
    }
    std::cout << graph.components.size() << " components (" << curves << " curve-like, "
              << isolated << " isolated candidates, "
              << graph.components.size() - curves - isolated << " ambiguous), "
              << graph.junctions.size() << " junctions\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"edlf: defect laboratory for cone-valued harmonic maps"};
    app.require_subcommand(1);

    std::string config_path, out_dir, field_path, center_str, radii_str, out_path, scales_str;
    std::vector<std::string> overrides, loop_specs, sphere_specs;
    double radius = 0.1, slack = 0.05, eps_z = 0.35, s_floor = 0.02;
    double k = 4.0, lambda = 1.0, phi0 = 0.0, h = 1.0 / 128.0;
    int samples = 4096, n = 257;
    std::string experiment_name_arg;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (key = value lines)");
        cmd->add_option("--set", overrides, "override a config key, e.g. --set cone.k=4");
        cmd->add_option("--out", out_dir, "output directory");
    };

    CLI::App* c_min = app.add_subcommand("minimize", "solve the configured problem");
    add_common(c_min);

    CLI::App* c_exp = app.add_subcommand("experiment", "run a canned experiment");
    c_exp->add_option("name", experiment_name_arg,
                      "line_defect | point_defect_ck | cylinder_oracle | custom")
        ->required();
    add_common(c_exp);

    CLI::App* c_diag = app.add_subcommand("diagnose", "frequency profile of a saved field");
    c_diag->add_option("--field", field_path, "field file")->required();
    c_diag->add_option("--center", center_str, "x,y,z")->required();
    c_diag->add_option("--radii", radii_str, "r1,r2,...")->required();
    c_diag->add_option("--slack", slack, "monotonicity slack");
    c_diag->add_option("--out", out_dir, "output directory");

    CLI::App* c_blow = app.add_subcommand("blowup", "L2-normalized rescaling onto the unit ball");
    c_blow->add_option("--field", field_path)->required();
    c_blow->add_option("--center", center_str, "x,y,z")->required();
    c_blow->add_option("--radius", radius)->required();
    c_blow->add_option("--out", out_path, "output field file")->required();

    CLI::App* c_oracle = app.add_subcommand("oracle2d", "analytic 2D minimizer diagnostics");
    c_oracle->add_option("--k", k);
    c_oracle->add_option("--lambda", lambda);
    c_oracle->add_option("--phi0", phi0);
    c_oracle->add_option("--samples", samples);
    c_oracle->add_option("--spacing", h, "planar grid spacing");
    c_oracle->add_option("--n", n, "planar grid nodes per side");
    c_oracle->add_option("--out", out_dir);

    CLI::App* c_topo = app.add_subcommand("topology", "loop classes and crossing parity");
    c_topo->add_option("--field", field_path)->required();
    c_topo->add_option("--loop", loop_specs, "'cx,cy,cz r axis samples' (repeatable)");
    c_topo->add_option("--sphere", sphere_specs, "'cx,cy,cz r' (repeatable)");
    c_topo->add_option("--eps-z", eps_z);
    c_topo->add_option("--s-floor", s_floor);

    CLI::App* c_def = app.add_subcommand("defects", "extract and classify the zero set");
    c_def->add_option("--field", field_path)->required();
    c_def->add_option("--eps-z", eps_z);
    c_def->add_option("--scales", scales_str, "flatness scales r1,r2,...");
    c_def->add_option("--out", out_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_min->parsed()) return cmd_minimize(config_path, overrides, out_dir);
        if (c_exp->parsed())
            return cmd_experiment(experiment_name_arg, config_path, overrides, out_dir);
        if (c_diag->parsed())
            return cmd_diagnose(field_path, center_str, radii_str, out_dir, slack);
        if (c_blow->parsed()) return cmd_blowup(field_path, center_str, radius, out_path);
        if (c_oracle->parsed()) return cmd_oracle2d(k, lambda, phi0, samples, h, n, out_dir);
        if (c_topo->parsed())
            return cmd_topology(field_path, loop_specs, sphere_specs, eps_z, s_floor);
        if (c_def->parsed()) return cmd_defects(field_path, eps_z, scales_str, out_dir);
    } catch (const ConfigError& e) {
        for (const auto& msg : e.items) std::cerr << "config error: " << msg << "\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
