// decwave command-line driver.
//
//   decwave simulate <config> [--output-dir DIR] [--seed N] [--quiet]
//   decwave solve    <config> [--output-dir DIR] [--quiet]
//   decwave analyze  <config> [--convergence] [--levels N] [--seed N]
//   decwave mesh-info <path> [--format off|obj]
//
// Exit codes: 0 success, 1 config error, 2 mesh error, 3 numerical
// overflow, 4 solver failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "decwave/config.hpp"
#include "decwave/driver.hpp"
#include "decwave/errors.hpp"
#include "decwave/log.hpp"

namespace {

using namespace decwave;

struct CommonArgs {
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = default_seed;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("config,--config", args.config_path, "Simulation config file");
    cmd->add_option("--output-dir", args.output_dir, "Override output.dir from the config");
    cmd->add_option("--seed", args.seed, "Seed for random initial data and the spectrum estimate")->capture_default_str();
    cmd->add_flag("--quiet", args.quiet, "Suppress warnings and progress output");
}

SimulationConfig load(const CommonArgs& args)
{
    if (args.config_path.empty())
        throw ConfigError("no config file given");
    SimulationConfig cfg = load_config(args.config_path);
    if (!args.output_dir.empty())
        cfg.output_dir = args.output_dir;
    if (!args.quiet)
        for (const std::string& w : cfg.warnings)
            warn(w);
    return cfg;
}

void print_summary(const RunSummary& s)
{
    std::cout << "model: " << to_string(s.model) << '\n'
              << "status: " << s.status << '\n'
              << "frames: " << s.frames << '\n'
              << "max_abs_u: " << s.max_abs_u << '\n';
    if (s.model == Model::wave || s.model == Model::heat)
        std::cout << "steps: " << s.steps_completed << '\n'
                  << "final_time: " << s.final_time << '\n'
                  << "dt: " << s.dt << (s.dt_auto ? " (auto)" : "") << '\n'
                  << "stability_bound: " << s.stability_bound << '\n';
    else
        std::cout << "solver_iterations: " << s.solver_iterations << '\n'
                  << "solver_residual: " << s.solver_residual << '\n'
                  << "gauge_fixed: " << (s.gauge_fixed ? "yes" : "no") << '\n';
    std::cout << "wall_seconds: " << s.wall_seconds << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete exterior calculus wave, heat, Laplace and Poisson solver on triangle meshes"};
    app.require_subcommand(1);

    CommonArgs sim_args, solve_args, analyze_args;
    auto* simulate = app.add_subcommand("simulate", "Run a wave or heat simulation and write snapshots");
    add_common(simulate, sim_args);
    auto* solve = app.add_subcommand("solve", "Solve a Laplace or Poisson problem");
    add_common(solve, solve_args);
    auto* analyze_cmd = app.add_subcommand("analyze", "Stability and spectral diagnostics");
    add_common(analyze_cmd, analyze_args);
    bool convergence = false;
    int levels = 3;
    analyze_cmd->add_flag("--convergence", convergence, "Run the convergence studies");
    analyze_cmd->add_option("--levels", levels, "Refinement levels for --convergence")
        ->check(CLI::Range(1, 6))
        ->capture_default_str();

    std::string mesh_path;
    std::string mesh_format;
    bool info_quiet = false;
    auto* info = app.add_subcommand("mesh-info", "Print a mesh quality report");
    info->add_option("path", mesh_path, "OFF or OBJ mesh file")->required();
    info->add_option("--format", mesh_format, "off or obj (default: from extension)");
    info->add_flag("--quiet", info_quiet, "Suppress warnings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::config_error);
    }

    const bool quiet = (simulate->parsed() && sim_args.quiet) || (solve->parsed() && solve_args.quiet) ||
                       (analyze_cmd->parsed() && analyze_args.quiet) || (info->parsed() && info_quiet);
    if (quiet)
        set_warning_sink({});

    try {
        if (simulate->parsed()) {
            const SimulationConfig cfg = load(sim_args);
            if (cfg.model != Model::wave && cfg.model != Model::heat)
                throw ConfigError("simulate runs wave or heat models; use 'solve' for " +
                                  std::string(to_string(cfg.model)));
            RunOptions options;
            options.seed = sim_args.seed;
            options.progress = quiet ? nullptr : &std::clog;
            print_summary(run(cfg, options));
        } else if (solve->parsed()) {
            const SimulationConfig cfg = load(solve_args);
            if (cfg.model != Model::laplace && cfg.model != Model::poisson)
                throw ConfigError("solve handles laplace or poisson models; use 'simulate' for " +
                                  std::string(to_string(cfg.model)));
            RunOptions options;
            options.seed = solve_args.seed;
            print_summary(run(cfg, options));
        } else if (analyze_cmd->parsed()) {
            SimulationConfig cfg = load(analyze_args);
            AnalyzeOptions options;
            options.seed = analyze_args.seed;
            options.convergence = convergence;
            options.levels = levels;
            analyze(cfg, options, std::cout);
        } else {
            std::optional<MeshFormat> format;
            if (!mesh_format.empty()) {
                format = parse_mesh_format(mesh_format);
                if (!format)
                    throw ConfigError("unknown mesh format '" + mesh_format + "'");
            }
            mesh_info(mesh_path, format, std::cout);
        }
    } catch (const OverflowError& e) {
        std::cerr << "error: " << e.what() << '\n' << "overflow_step: " << e.time_index() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config_error);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config_error);
    }
    return 0;
}
