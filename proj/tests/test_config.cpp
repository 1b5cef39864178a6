#include <doctest.h>

#include <fstream>

#include "decwave/config.hpp"
#include "decwave/errors.hpp"
#include "oracles.hpp"

using namespace decwave;

namespace {

bool has_warning(const SimulationConfig& cfg, std::string_view needle)
{
    for (const auto& w : cfg.warnings)
        if (w.find(needle) != std::string::npos)
            return true;
    return false;
}

} // namespace

TEST_CASE("minimal config takes the documented defaults")
{
    const SimulationConfig cfg = parse_config("[mesh]\ngenerator = icosphere\n[model]\ntype = wave\n");
    CHECK(cfg.model == Model::wave);
    CHECK_FALSE(cfg.dt.has_value());
    CHECK(cfg.steps == 1000);
    CHECK(cfg.snapshot_every == 10);
    CHECK(cfg.source.kind == SourceKind::none);
    CHECK(cfg.c == 1.0);
    CHECK(cfg.mesh.generator == MeshGenerator::icosphere);
    CHECK(cfg.mesh.subdivisions == 3);
    CHECK(cfg.mesh.radius == 1.0);
    CHECK(cfg.output_dir == "output");
    CHECK(cfg.output_format == OutputFormat::vtk);
    CHECK(cfg.initial.kind == InitialKind::zero);
    CHECK(cfg.warnings.empty());
}

TEST_CASE("full config")
{
    const SimulationConfig cfg = parse_config(R"(# demo
[mesh]
generator = flat_grid
nx = 5       # columns
ny = 4
spacing = 0.25

[model]
type = heat
c = 0.5
dt = 0.001
steps = 20
snapshot_every = 5

[source]
kind = sine
vertex = 3
amplitude = 2
frequency = 1.5
injection = additive

[initial]
kind = gaussian_bump
vertex = 2
width = 0.3

[output]
dir = out/heat
format = csv
)");
    CHECK(cfg.model == Model::heat);
    CHECK(cfg.mesh.nx == 5);
    CHECK(cfg.mesh.ny == 4);
    CHECK(cfg.mesh.spacing == 0.25);
    CHECK(cfg.c == 0.5);
    CHECK(cfg.dt == 0.001);
    CHECK(cfg.steps == 20);
    CHECK(cfg.snapshot_every == 5);
    CHECK(cfg.source.kind == SourceKind::sine);
    CHECK(cfg.source.vertex == 3);
    CHECK(cfg.source.frequency == 1.5);
    CHECK(cfg.source.injection == Injection::additive);
    CHECK(cfg.initial.kind == InitialKind::gaussian_bump);
    CHECK(cfg.initial.width == 0.3);
    CHECK(cfg.output_dir == "out/heat");
    CHECK(cfg.output_format == OutputFormat::csv);
}

TEST_CASE("gaussian pulse defaults")
{
    const auto cfg = parse_config("[mesh]\ngenerator = icosphere\n[model]\ntype = wave\n[source]\nkind = gaussian_pulse\n");
    CHECK(cfg.source.width == 0.1);
    CHECK(cfg.source.center_time == 0.4);
    CHECK(cfg.source.injection == Injection::hard);
}

TEST_CASE("elliptic config")
{
    const auto cfg = parse_config("[mesh]\ngenerator = tetrahedron\n[model]\ntype = poisson\nconstraints = 0:5, 2:-1.5\nrhs = 2\n");
    CHECK(cfg.model == Model::poisson);
    REQUIRE(cfg.constraints.constrained.size() == 2);
    CHECK(cfg.constraints.constrained[0] == std::pair<Index, double>{0, 5.0});
    CHECK(cfg.constraints.constrained[1] == std::pair<Index, double>{2, -1.5});
    CHECK(cfg.rhs == 2.0);
}

TEST_CASE("warnings for ignored keys")
{
    auto cfg = parse_config("[mesh]\ngenerator = icosphere\n[model]\ntype = wave\nconstraints = 0:1\n");
    CHECK(has_warning(cfg, "constraints ignored for wave"));

    cfg = parse_config("[mesh]\ngenerator = tetrahedron\n[model]\ntype = laplace\nsteps = 4\n[source]\nkind = sine\n");
    CHECK(has_warning(cfg, "model.steps ignored for laplace"));
    CHECK(has_warning(cfg, "source ignored for laplace"));

    cfg = parse_config("[mesh]\ngenerator = tetrahedron\nformat = off\n[model]\ntype = heat\nrhs = 1\n");
    CHECK(has_warning(cfg, "mesh.format ignored"));
    CHECK(has_warning(cfg, "rhs ignored for heat"));
}

TEST_CASE("config errors")
{
    const std::string mesh = "[mesh]\ngenerator = icosphere\n";
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = wave\ndt = -0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = wave\ndt = 0.1\ndt = auto\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = wave\nspeed = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = wave\n[solver]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = wave\nsteps = ten\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = wave\nsteps = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = wave\nsnapshot_every = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = nonlinear\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = maxwell\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\nc = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[model]\ntype = wave\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[mesh]\ngenerator = icosphere\npath = a.off\n[model]\ntype = wave\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = poisson\nconstraints = 0=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = poisson\nconstraints = 0:1, 0:2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(mesh + "[model]\ntype = wave\n[source]\nkind = gaussian_pulse\nsigma = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("generator = icosphere\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[mesh\ngenerator = icosphere\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[mesh]\ngenerator icosphere\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[mesh]\ngenerator = cube\n[model]\ntype = wave\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[mesh]\npath = bunny.stl\n[model]\ntype = wave\n"), ConfigError);

    try {
        parse_config(mesh + "[model]\ntype = wave\nspeed = 2\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 5") != std::string::npos);
        CHECK(e.exit_code() == ExitCode::config_error);
    }
}

TEST_CASE("load_config resolves mesh paths next to the config")
{
    const auto dir = oracle::scratch_dir("config");
    std::filesystem::create_directories(dir / "meshes");
    write_mesh(generate_tetrahedron(1.0), dir / "meshes" / "tet.off", MeshFormat::off);
    {
        std::ofstream(dir / "run.cfg") << "[mesh]\npath = meshes/tet.off\n[model]\ntype = laplace\nconstraints = 0:1\n";
    }
    const SimulationConfig cfg = load_config(dir / "run.cfg");
    REQUIRE(cfg.mesh.path.has_value());
    CHECK(cfg.mesh.format == MeshFormat::off);
    CHECK(build_mesh(cfg.mesh).num_vertices() == 4);
    CHECK_THROWS_AS(load_config(dir / "absent.cfg"), ConfigError);
}

TEST_CASE("initial fields")
{
    const SurfaceMesh m = generate_icosphere(1.0, 2);
    InitialCondition init;
    CHECK(oracle::max_abs(initial_field(init, m, 1)) == 0.0);

    init.kind = InitialKind::constant;
    init.value = 2.0;
    for (double x : initial_field(init, m, 1))
        CHECK(x == 2.0);

    init.kind = InitialKind::gaussian_bump;
    init.vertex = 7;
    init.amplitude = 3.0;
    const auto bump = initial_field(init, m, 1);
    CHECK(bump[7] == 3.0);
    CHECK(oracle::max_abs(bump) == 3.0);

    init.kind = InitialKind::random;
    init.amplitude = 0.5;
    const auto a = initial_field(init, m, 42), b = initial_field(init, m, 42), c = initial_field(init, m, 43);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(oracle::max_abs(a) <= 0.5);

    init.kind = InitialKind::gaussian_bump;
    init.vertex = 100000;
    CHECK_THROWS_AS(initial_field(init, m, 1), ConfigError);
}
