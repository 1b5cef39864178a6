#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "decwave/driver.hpp"
#include "decwave/errors.hpp"
#include "oracles.hpp"

#include <sys/wait.h>

using namespace decwave;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<double> csv_field(const fs::path& p)
{
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    std::vector<double> u;
    while (std::getline(in, line))
        u.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    return u;
}

std::size_t count_frames(const fs::path& dir)
{
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().filename().string().rfind("frame_", 0) == 0)
            ++n;
    return n;
}

SimulationConfig config_in(const std::string& text, const fs::path& dir)
{
    SimulationConfig cfg = parse_config(text);
    cfg.output_dir = dir;
    return cfg;
}

int run_cli(const std::string& args, const fs::path& log)
{
    const std::string cmd = std::string(DECWAVE_CLI) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("icosphere wave run with a pulse")
{
    const auto dir = oracle::scratch_dir("driver_wave");
    const auto cfg = config_in("[mesh]\ngenerator = icosphere\nsubdivisions = 2\n[model]\ntype = wave\nsteps = 300\n"
                               "snapshot_every = 10\n[source]\nkind = gaussian_pulse\nvertex = 0\n",
                               dir);
    const RunSummary s = run(cfg);
    CHECK(s.frames == 31);
    CHECK(count_frames(dir) == 31);
    CHECK(s.status == "ok");
    CHECK(s.dt_auto);
    CHECK(s.dt == doctest::Approx(0.9 * s.stability_bound).epsilon(1e-15));
    CHECK(s.steps_completed == 300);
    CHECK(s.final_time == doctest::Approx(300 * s.dt));
    CHECK(fs::exists(dir / "frame_000300.vtk"));

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["frames"] == 31);
    CHECK(summary["dt"].get<double>() == s.dt);
    CHECK(summary["status"] == "ok");

    std::istringstream manifest(slurp(dir / "manifest.csv"));
    std::string line;
    std::getline(manifest, line);
    CHECK(line == "frame,step,time");
    std::size_t rows = 0;
    while (std::getline(manifest, line))
        ++rows;
    CHECK(rows == 31);
}

TEST_CASE("frame count formula")
{
    for (long steps : {1L, 7L, 10L, 23L})
        for (long every : {1L, 3L, 10L, 40L}) {
            const auto dir = oracle::scratch_dir("frames");
            auto cfg = config_in("[mesh]\ngenerator = tetrahedron\n[model]\ntype = heat\n[initial]\nkind = random\n", dir);
            cfg.steps = steps;
            cfg.snapshot_every = every;
            const RunSummary s = run(cfg);
            CHECK(s.frames == expected_frame_count(steps, every));
            CHECK(count_frames(dir) == static_cast<std::size_t>(steps / every + 1));

            cfg.model = Model::wave;
            const auto wdir = oracle::scratch_dir("frames_wave");
            cfg.output_dir = wdir;
            CHECK(run(cfg).frames == expected_frame_count(steps, every));
            CHECK(count_frames(wdir) == static_cast<std::size_t>(steps / every + 1));
        }
}

TEST_CASE("summary max|u| equals the max over frames")
{
    const auto dir = oracle::scratch_dir("maxu");
    const auto cfg = config_in("[mesh]\ngenerator = icosphere\nsubdivisions = 1\n[model]\ntype = wave\nsteps = 40\n"
                               "snapshot_every = 1\n[initial]\nkind = random\n[output]\nformat = csv\n",
                               dir);
    const RunSummary s = run(cfg);
    double m = 0.0;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".csv" && entry.path().filename() != "manifest.csv")
            m = std::max(m, oracle::max_abs(csv_field(entry.path())));
    CHECK(s.max_abs_u == m);
}

TEST_CASE("laplace run on the tetrahedron")
{
    const auto dir = oracle::scratch_dir("laplace");
    const auto cfg = config_in("[mesh]\ngenerator = tetrahedron\n[model]\ntype = laplace\nconstraints = 0:5\n"
                               "[output]\nformat = csv\n",
                               dir);
    const RunSummary s = run(cfg);
    CHECK(s.frames == 1);
    CHECK(count_frames(dir) == 1);
    for (double x : csv_field(dir / "frame_000000.csv"))
        CHECK(std::abs(x - 5.0) < 1e-10);
}

TEST_CASE("unstable wave run reports the overflow step")
{
    const auto dir = oracle::scratch_dir("overflow");
    auto cfg = config_in("[mesh]\ngenerator = icosphere\nsubdivisions = 2\n[model]\ntype = wave\nsteps = 2000\n"
                         "[initial]\nkind = random\n",
                         dir);
    const SurfaceMesh m = build_mesh(cfg.mesh);
    cfg.dt = 2.0 * cfl_bound(assemble_laplacian(m, build_dual_metrics(m)), 1.0).dt_max;
    std::size_t step = 0;
    try {
        run(cfg);
        FAIL("expected overflow");
    } catch (const OverflowError& e) {
        step = e.time_index();
    }
    CHECK(step > 1);
    CHECK(step < 2000);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["status"] == "overflow");
    CHECK(summary["overflow_step"] == step);
}

TEST_CASE("runs are byte-identical")
{
    const std::string text = "[mesh]\ngenerator = icosphere\nsubdivisions = 2\n[model]\ntype = wave\nsteps = 50\n"
                             "snapshot_every = 25\n[initial]\nkind = random\n[source]\nkind = sine\nfrequency = 2\n";
    const auto a = oracle::scratch_dir("det_a"), b = oracle::scratch_dir("det_b");
    run(config_in(text, a));
    run(config_in(text, b));
    for (const char* f : {"frame_000000.vtk", "frame_000025.vtk", "frame_000050.vtk", "manifest.csv"})
        CHECK(slurp(a / f) == slurp(b / f));

    const auto c = oracle::scratch_dir("det_c");
    RunOptions other;
    other.seed = 7;
    run(config_in(text, c), other);
    CHECK(slurp(a / "frame_000000.vtk") != slurp(c / "frame_000000.vtk"));
}

TEST_CASE("analyze prints the closed forms")
{
    const auto cfg = parse_config("[mesh]\ngenerator = tetrahedron\n[model]\ntype = wave\n");
    std::ostringstream out;
    analyze(cfg, {}, out);
    const std::string text = out.str();
    CHECK(text.find("cfl_dt_max: 0.707106781") != std::string::npos);
    CHECK(text.find("lambda_max: 5.33333333") != std::string::npos);
    CHECK(text.find("gershgorin_bound: 8\n") != std::string::npos);
    CHECK(text.find("audit_ratio: 0.81649658") != std::string::npos);
}

TEST_CASE("mesh-info report")
{
    const auto dir = oracle::scratch_dir("info");
    write_mesh(generate_flat_grid(3, 3, 1.0), dir / "g.obj", MeshFormat::obj);
    std::ostringstream out;
    mesh_info(dir / "g.obj", std::nullopt, out);
    CHECK(out.str().find("closed: no") != std::string::npos);
    CHECK(out.str().find("right_triangles: 8") != std::string::npos);
    CHECK_THROWS_AS(mesh_info(dir / "g.xyz", std::nullopt, out), ConfigError);
}

TEST_CASE("command-line exit codes")
{
    const auto dir = oracle::scratch_dir("cli");
    const auto log = dir / "log.txt";
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(dir / name) << text;
        return (dir / name).string();
    };

    const auto ok = write("ok.cfg", "[mesh]\ngenerator = tetrahedron\n[model]\ntype = wave\nsteps = 20\n"
                                    "[initial]\nkind = random\n[output]\ndir = " + (dir / "out_ok").string() + "\n");
    CHECK(run_cli("simulate " + ok + " --quiet", log) == 0);
    CHECK(fs::exists(dir / "out_ok" / "frame_000020.vtk"));

    CHECK(run_cli("simulate " + ok + " --output-dir " + (dir / "other").string() + " --quiet", log) == 0);
    CHECK(fs::exists(dir / "other" / "summary.json"));

    const auto bad = write("bad.cfg", "[mesh]\ngenerator = tetrahedron\n[model]\ntype = wave\nbogus = 1\n");
    CHECK(run_cli("simulate " + bad, log) == 1);
    CHECK(slurp(log).find("unknown key") != std::string::npos);
    CHECK(run_cli("simulate " + (dir / "missing.cfg").string(), log) == 1);
    CHECK(run_cli("frobnicate", log) == 1);
    CHECK(run_cli("solve " + ok, log) == 1);

    std::ofstream(dir / "nm.off") << "OFF\n5 3 0\n0 0 0\n1 0 0\n0 1 0\n0 -1 0\n0 0 1\n3 0 1 2\n3 1 0 3\n3 0 1 4\n";
    const auto mesh_bad = write("mesh.cfg", "[mesh]\npath = nm.off\n[model]\ntype = wave\n");
    CHECK(run_cli("simulate " + mesh_bad, log) == 2);
    CHECK(run_cli("mesh-info " + (dir / "nm.off").string(), log) == 2);

    const auto unstable = write("unstable.cfg", "[mesh]\ngenerator = icosphere\nsubdivisions = 2\n[model]\ntype = wave\n"
                                                "dt = 0.5\nsteps = 2000\n[initial]\nkind = random\n[output]\ndir = " + (dir / "out_u").string() + "\n");
    CHECK(run_cli("simulate " + unstable + " --quiet", log) == 3);
    CHECK(slurp(log).find("overflow_step: ") != std::string::npos);

    const auto incompatible = write("poisson.cfg", "[mesh]\ngenerator = icosphere\nsubdivisions = 1\n[model]\n"
                                                   "type = poisson\nrhs = 1\n[output]\ndir = " + (dir / "out_p").string() + "\n");
    CHECK(run_cli("solve " + incompatible, log) == 4);

    const auto laplace = write("laplace.cfg", "[mesh]\ngenerator = tetrahedron\n[model]\ntype = laplace\n"
                                              "constraints = 0:7.5\n[output]\ndir = " + (dir / "out_l").string() + "\n");
    CHECK(run_cli("solve " + laplace, log) == 0);
    CHECK(run_cli("analyze --config " + ok, log) == 0);
    CHECK(slurp(log).find("lambda_max: 5.33333333") != std::string::npos);
}
