#ifndef DECWAVE_CONFIG_HPP
#define DECWAVE_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decwave/mesh.hpp"
#include "decwave/mesh_io.hpp"
#include "decwave/snapshot.hpp"
#include "decwave/solvers.hpp"

namespace decwave {

enum class Model { wave, heat, laplace, poisson };

std::string_view to_string(Model model);

enum class MeshGenerator { tetrahedron, icosphere, flat_grid };

struct MeshSpec {
    // exactly one of path / generator
    std::optional<std::filesystem::path> path;
    std::optional<MeshFormat> format; // deduced from the extension when unset
    std::optional<MeshGenerator> generator;

    double edge_length = 1.0; // tetrahedron
    double radius = 1.0;      // icosphere
    int subdivisions = 3;     // icosphere
    int nx = 17;              // flat_grid
    int ny = 17;
    double spacing = 1.0;
};

enum class InitialKind { zero, gaussian_bump, constant, random };

struct InitialCondition {
    InitialKind kind = InitialKind::zero;
    Index vertex = 0;       // gaussian_bump centre
    double amplitude = 1.0; // gaussian_bump peak, random half-range
    double width = 0.2;     // gaussian_bump spatial sigma (length units)
    double value = 0.0;     // constant
};

struct SimulationConfig {
    MeshSpec mesh;
    Model model = Model::wave;
    double c = 1.0;
    std::optional<double> dt; // empty = auto
    long steps = 1000;
    long snapshot_every = 10;
    SourceSignal source;
    InitialCondition initial;
    DirichletCondition constraints;
    double rhs = 0.0; // poisson: uniform right-hand side
    std::filesystem::path output_dir = "output";
    OutputFormat output_format = OutputFormat::vtk;

    /// Non-fatal findings from parsing (ignored keys and the like).
    std::vector<std::string> warnings;
};

/// Parses the "[section]" / "key = value" format. Sections: mesh, model,
/// source, initial, output. Throws ConfigError for unknown sections or
/// keys, malformed values, missing mesh or model, or contradictory keys.
SimulationConfig parse_config(std::string_view text);
SimulationConfig load_config(const std::filesystem::path& path);

SurfaceMesh build_mesh(const MeshSpec& spec);

/// Initial field for the config's `initial` section (`seed` drives `random`).
std::vector<double> initial_field(const InitialCondition& initial, const SurfaceMesh& mesh, std::uint64_t seed);

} // namespace decwave

#endif
