#include "decwave/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "decwave/errors.hpp"
#include "decwave/log.hpp"

namespace decwave {

namespace {

std::string fmt(double value, int digits = 9)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

double max_abs(std::span<const double> u)
{
    double m = 0.0;
    for (double x : u)
        m = std::max(m, std::abs(x));
    return m;
}

struct FrameWriter {
    const SurfaceMesh& mesh;
    const SimulationConfig& config;
    std::vector<std::pair<std::size_t, double>> written;

    void write(std::size_t step, double time, std::span<const double> u)
    {
        const auto path = config.output_dir / frame_filename(step, config.output_format);
        if (config.output_format == OutputFormat::vtk) {
            const std::string title = "decwave " + std::string(to_string(config.model)) + " step " +
                                      std::to_string(step) + " t=" + fmt(time, 17);
            write_vtk(mesh, u, path, title);
        } else {
            write_csv(mesh, u, path);
        }
        written.emplace_back(step, time);
    }

    void write_manifest() const
    {
        std::ofstream out(config.output_dir / "manifest.csv", std::ios::binary);
        out << "frame,step,time\n";
        for (const auto& [step, time] : written)
            out << frame_filename(step, config.output_format) << ',' << step << ',' << fmt(time, 17) << '\n';
        if (!out)
            throw std::runtime_error("I/O error while writing the manifest");
    }
};

void write_summary(const RunSummary& s, const std::filesystem::path& path)
{
    nlohmann::ordered_json j;
    j["model"] = std::string(to_string(s.model));
    j["status"] = s.status;
    j["steps_completed"] = s.steps_completed;
    j["final_time"] = s.final_time;
    j["dt"] = s.dt;
    j["dt_auto"] = s.dt_auto;
    j["stability_bound"] = s.stability_bound;
    j["max_abs_u"] = s.max_abs_u;
    j["wall_seconds"] = s.wall_seconds;
    j["frames"] = s.frames;
    if (s.overflow_step)
        j["overflow_step"] = *s.overflow_step;
    if (s.model == Model::laplace || s.model == Model::poisson) {
        j["solver_iterations"] = s.solver_iterations;
        j["solver_residual"] = s.solver_residual;
        j["gauge_fixed"] = s.gauge_fixed;
    }
    std::ofstream out(path);
    out << j.dump(2) << '\n';
    if (!out)
        throw std::runtime_error("I/O error while writing '" + path.string() + "'");
}

class Progress {
public:
    Progress(std::ostream* out, long steps) : out_(out), every_(std::max(1L, steps / 10)) {}

    void report(std::size_t step, long steps, double time, double max_u) const
    {
        if (!out_ || (static_cast<long>(step) % every_ != 0 && static_cast<long>(step) != steps))
            return;
        *out_ << "step " << step << '/' << steps << "  t = " << fmt(time, 6) << "  max|u| = " << fmt(max_u, 6)
              << '\n';
    }

private:
    std::ostream* out_;
    long every_;
};

} // namespace

std::size_t expected_frame_count(long steps, long snapshot_every)
{
    return static_cast<std::size_t>(steps / snapshot_every) + 1;
}

RunSummary run(const SimulationConfig& config, const RunOptions& options)
{
    const auto started = std::chrono::steady_clock::now();
    const SurfaceMesh mesh = build_mesh(config.mesh);
    const LaplaceOperator op = assemble_laplacian(mesh, build_dual_metrics(mesh));

    std::filesystem::create_directories(config.output_dir);
    FrameWriter frames{mesh, config, {}};
    RunSummary summary;
    summary.model = config.model;

    auto finish = [&] {
        summary.frames = frames.written.size();
        summary.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_summary(summary, config.output_dir / "summary.json");
        frames.write_manifest();
    };

    if (config.model == Model::laplace || config.model == Model::poisson) {
        const std::vector<double> rhs(mesh.num_vertices(), config.model == Model::poisson ? config.rhs : 0.0);
        const SolveResult solved = solve_poisson(op, rhs, config.constraints);
        if (solved.gauge_fixed)
            warn("no constraints: returning the zero-mean representative of the constant family");
        summary.solver_iterations = solved.iterations;
        summary.solver_residual = solved.relative_residual;
        summary.gauge_fixed = solved.gauge_fixed;
        summary.max_abs_u = max_abs(solved.u);
        frames.write(0, 0.0, solved.u);
        finish();
        return summary;
    }

    config.source.check(mesh.num_vertices());
    const std::vector<double> u0 = initial_field(config.initial, mesh, options.seed);
    const Progress progress(options.progress, config.steps);

    if (config.model == Model::wave) {
        summary.stability_bound = cfl_bound(op, config.c).dt_max;
    } else {
        summary.stability_bound = heat_dt_bound(op, config.c);
    }
    summary.dt_auto = !config.dt.has_value();
    summary.dt = config.dt.value_or(auto_dt_fraction * summary.stability_bound);

    const auto steps = static_cast<std::size_t>(config.steps);
    const auto every = static_cast<std::size_t>(config.snapshot_every);
    auto snapshot = [&](std::size_t step, double time, std::span<const double> u) {
        summary.max_abs_u = std::max(summary.max_abs_u, max_abs(u));
        summary.steps_completed = step;
        summary.final_time = time;
        if (step % every == 0)
            frames.write(step, time, u);
        progress.report(step, config.steps, time, summary.max_abs_u);
    };

    try {
        if (config.model == Model::wave) {
            const std::vector<double> v0(mesh.num_vertices(), 0.0);
            WaveState state = wave_init(op, u0, v0, summary.dt, config.c);
            snapshot(0, 0.0, state.u_prev);
            snapshot(1, state.time(), state.u_curr);
            while (state.time_index < steps) {
                try {
                    wave_step(state, op, config.source);
                } catch (const OverflowError&) {
                    summary.max_abs_u = std::max(summary.max_abs_u, max_abs(state.u_curr));
                    throw;
                }
                snapshot(state.time_index, state.time(), state.u_curr);
            }
        } else {
            HeatState state = heat_init(op, u0, summary.dt, config.c);
            snapshot(0, 0.0, state.u_curr);
            while (state.time_index < steps) {
                try {
                    heat_step(state, op, config.source);
                } catch (const OverflowError&) {
                    summary.max_abs_u = std::max(summary.max_abs_u, max_abs(state.u_curr));
                    throw;
                }
                snapshot(state.time_index, state.time(), state.u_curr);
            }
        }
    } catch (const OverflowError& e) {
        summary.status = "overflow";
        summary.overflow_step = e.time_index();
        finish();
        throw;
    }
    finish();
    return summary;
}

void analyze(const SimulationConfig& config, const AnalyzeOptions& options, std::ostream& out)
{
    const SurfaceMesh mesh = build_mesh(config.mesh);
    const MeshQualityReport report = validate(mesh);
    const DualMetrics metrics = build_dual_metrics(mesh);
    const LaplaceOperator op = assemble_laplacian(mesh, metrics);

    SpectrumOptions spectrum;
    spectrum.seed = options.seed;
    const StabilityBound cfl = cfl_bound(op, config.c);
    const CflAudit audit = audit_cfl(op, config.c, spectrum);

    out << "vertices: " << mesh.num_vertices() << '\n'
        << "edges: " << mesh.num_edges() << '\n'
        << "triangles: " << mesh.num_triangles() << '\n'
        << "well_centered: " << (report.is_well_centered ? "yes" : "no") << '\n'
        << "c: " << fmt(config.c) << '\n'
        << "cfl_dt_max: " << fmt(cfl.dt_max) << '\n'
        << "cfl_argmin_vertex: " << cfl.argmin_vertex << '\n'
        << "lambda_max: " << fmt(audit.lambda_max) << '\n'
        << "gershgorin_bound: " << fmt(audit.gershgorin_bound) << '\n'
        << "spectral_dt_max: " << fmt(audit.exact_bound) << '\n'
        << "audit_ratio: " << fmt(audit.ratio) << '\n'
        << "audit_conservative: " << (audit.conservative ? "yes" : "no") << '\n'
        << "heat_dt_bound: " << fmt(heat_dt_bound(op, config.c)) << '\n'
        << "cotan_discrepancy: " << fmt(cotan_crosscheck(mesh, metrics), 3) << '\n';

    if (!config.mesh.path && config.mesh.generator == MeshGenerator::icosphere) {
        const double R = config.mesh.radius;
        std::vector<double> mode(mesh.num_vertices());
        for (std::size_t v = 0; v < mode.size(); ++v)
            mode[v] = mesh.position(static_cast<Index>(v)).z / R;
        const double rq = rayleigh_quotient(op, mode);
        const double expected = 2.0 / (R * R);
        out << "rayleigh_quotient_z: " << fmt(rq) << '\n'
            << "rayleigh_expected: " << fmt(expected) << '\n'
            << "rayleigh_relative_error: " << fmt(std::abs(rq - expected) / expected, 3) << '\n';
    }

    if (options.convergence) {
        std::filesystem::create_directories(config.output_dir);
        StudyOptions study;
        study.c = config.c;
        for (StudyProblem problem : {StudyProblem::flat_standing_wave, StudyProblem::sphere_harmonic_wave}) {
            const auto rows = convergence_study(problem, options.levels, study);
            out << "\nconvergence " << to_string(problem) << '\n';
            write_convergence_csv(rows, out);
            const auto path = config.output_dir / ("convergence_" + std::string(to_string(problem)) + ".csv");
            std::ofstream csv(path);
            write_convergence_csv(rows, csv);
            if (!csv)
                throw std::runtime_error("I/O error while writing '" + path.string() + "'");
        }
    }
}

void mesh_info(const std::filesystem::path& path, std::optional<MeshFormat> format, std::ostream& out)
{
    if (!format)
        format = mesh_format_from_path(path);
    if (!format)
        throw ConfigError("cannot infer mesh format from '" + path.string() + "'; pass --format");
    const SurfaceMesh mesh = load_mesh(path, *format);
    const MeshQualityReport r = validate(mesh);

    out << "vertices: " << r.n_vertices << '\n'
        << "edges: " << r.n_edges << '\n'
        << "triangles: " << r.n_triangles << '\n'
        << "boundary_edges: " << r.n_boundary_edges << '\n'
        << "closed: " << (r.is_closed ? "yes" : "no") << '\n'
        << "consistently_oriented: " << (r.is_consistently_oriented ? "yes" : "no") << '\n'
        << "well_centered: " << (r.is_well_centered ? "yes" : "no") << '\n'
        << "obtuse_triangles: " << r.obtuse_triangle_indices.size() << '\n'
        << "right_triangles: " << r.n_right_triangles << '\n'
        << "min_angle_deg: " << fmt(r.min_angle * 180.0 / std::numbers::pi, 6) << '\n'
        << "max_angle_deg: " << fmt(r.max_angle * 180.0 / std::numbers::pi, 6) << '\n'
        << "euler_characteristic: " << r.euler_characteristic << '\n'
        << "total_area: " << fmt(mesh.total_area()) << '\n';
    for (const std::string& w : r.warnings)
        out << "warning: " << w << '\n';
}

} // namespace decwave
