#ifndef DECWAVE_DRIVER_HPP
#define DECWAVE_DRIVER_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "decwave/analysis.hpp"
#include "decwave/config.hpp"

namespace decwave {

/// Fraction of the stability bound used when dt = auto.
inline constexpr double auto_dt_fraction = 0.9;

struct RunOptions {
    std::uint64_t seed = default_seed;
    /// Progress lines (about ten per run); null disables them.
    std::ostream* progress = nullptr;
};

struct RunSummary {
    Model model = Model::wave;
    std::string status = "ok"; // "ok" or "overflow"
    std::size_t steps_completed = 0;
    double final_time = 0.0;
    double dt = 0.0;
    bool dt_auto = false;
    /// CFL bound (wave) or explicit heat bound; 0 for elliptic models.
    double stability_bound = 0.0;
    double max_abs_u = 0.0;
    double wall_seconds = 0.0;
    std::size_t frames = 0;
    std::optional<std::size_t> overflow_step;
    // laplace / poisson
    std::size_t solver_iterations = 0;
    double solver_residual = 0.0;
    bool gauge_fixed = false;
};

/// Runs the configured model, writing frame files, "manifest.csv" (frame,
/// step, time; written last) and "summary.json" into config.output_dir.
/// Overflow is rethrown as OverflowError after the summary is written.
RunSummary run(const SimulationConfig& config, const RunOptions& options = {});

/// Number of frames a time-dependent run writes: floor(steps / every) + 1.
std::size_t expected_frame_count(long steps, long snapshot_every);

struct AnalyzeOptions {
    std::uint64_t seed = default_seed;
    bool convergence = false;
    int levels = 3;
};

/// Prints stability and spectral diagnostics for the configured mesh and
/// speed; with `convergence` also runs both convergence studies and writes
/// "convergence_<problem>.csv" into config.output_dir.
void analyze(const SimulationConfig& config, const AnalyzeOptions& options, std::ostream& out);

/// Prints the mesh quality report of a mesh file.
void mesh_info(const std::filesystem::path& path, std::optional<MeshFormat> format, std::ostream& out);

} // namespace decwave

#endif
