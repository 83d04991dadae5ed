#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

std::string cli() { return EDLF_CLI_PATH; }

int run(const std::string& args) {
    std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const char* name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

const char* kTinyConfig =
    "experiment = custom\n"
    "cone.k = 4\n"
    "grid.shape = cylinder\n"
    "grid.n = 13\n"
    "grid.h = 0.0833333333333333287\n"
    "boundary.generator = planar_half_turn\n"
    "solver.levels = 1\n"
    "solver.max_iters = 800\n"
    "diag.centers = 0,0,0.5\n"
    "diag.radii = 0.2\n"
    "diag.eps_z = 0.65\n";

}  // namespace

TEST_CASE("cli: oracle2d writes its artifact files") {
    fs::path dir = fresh_dir("edlf_cli_oracle");
    CHECK(run("oracle2d --k 4 --samples 1024 --n 65 --spacing 0.03125 --out " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "oracle2d.edlf"));
    CHECK(fs::exists(dir / "el_residual.csv"));
    CHECK(fs::exists(dir / "hopf.csv"));
}

TEST_CASE("cli: minimize then diagnose and defects on the saved field") {
    fs::path dir = fresh_dir("edlf_cli_min");
    write_file(dir / "run.cfg", kTinyConfig);
    CHECK(run("minimize --config " + (dir / "run.cfg").string() + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "field.edlf"));
    CHECK(fs::exists(dir / "energy_trace.csv"));

    CHECK(run("diagnose --field " + (dir / "field.edlf").string() +
              " --center 0,0,0.5 --radii 0.17,0.2 --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "profile.csv"));

    CHECK(run("defects --field " + (dir / "field.edlf").string() + " --eps-z 0.65 --out " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "defects.txt"));
    CHECK(fs::exists(dir / "defects_summary.csv"));

    CHECK(run("topology --field " + (dir / "field.edlf").string() +
              " --loop \"0,0,0.5 0.4 z 64\"") == 0);

    CHECK(run("blowup --field " + (dir / "field.edlf").string() +
              " --center 0,0,0.5 --radius 0.2 --out " + (dir / "blow.edlf").string()) == 0);
    CHECK(fs::exists(dir / "blow.edlf"));
}

TEST_CASE("cli: reruns with a fixed seed are byte-identical") {
    fs::path a = fresh_dir("edlf_cli_rerun_a");
    fs::path b = fresh_dir("edlf_cli_rerun_b");
    write_file(a / "run.cfg", kTinyConfig);
    CHECK(run("minimize --config " + (a / "run.cfg").string() + " --out " + a.string()) == 0);
    CHECK(run("minimize --config " + (a / "run.cfg").string() + " --out " + b.string()) == 0);
    CHECK(read_bytes((a / "energy_trace.csv").string()) ==
          read_bytes((b / "energy_trace.csv").string()));
    CHECK(read_bytes((a / "field.edlf").string()) == read_bytes((b / "field.edlf").string()));
}

TEST_CASE("cli: exit codes") {
    fs::path dir = fresh_dir("edlf_cli_err");
    // validation error (k <= 1) -> 1
    write_file(dir / "bad.cfg", "experiment = custom\ncone.k = 0.5\n");
    CHECK(run("minimize --config " + (dir / "bad.cfg").string() + " --out " + dir.string()) == 1);
    // unreadable field -> 3
    CHECK(run("diagnose --field /nonexistent.edlf --center 0,0,0 --radii 0.2") == 3);
    // unknown experiment name -> 1
    CHECK(run("experiment not_a_thing") == 1);
    // solver non-convergence -> 2
    write_file(dir / "stall.cfg", std::string(kTinyConfig) + "solver.max_iters = 1\n");
    CHECK(run("minimize --config " + (dir / "stall.cfg").string() + " --out " + dir.string()) ==
          2);
}
