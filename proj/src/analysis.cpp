#include "decwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "decwave/errors.hpp"
#include "decwave/kernels.hpp"
#include "decwave/solvers.hpp"

namespace decwave {

namespace {

double weighted_dot(const LaplaceOperator& op, std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t v = 0; v < a.size(); ++v)
        s += op.dual_area(static_cast<Index>(v)) * a[v] * b[v];
    return s;
}

void remove_constant_mode(const LaplaceOperator& op, std::span<double> x)
{
    double area = 0.0;
    for (double p : op.dual_areas())
        area += p;
    const double mean = weighted_total(op, x) / area;
    for (double& xi : x)
        xi -= mean;
}

void pin(std::span<double> u, std::span<const Index> vertices)
{
    for (Index v : vertices)
        u[v] = 0.0;
}

} // namespace

namespace {

struct Eigenpair {
    double value;
    std::vector<double> vector;
};

// Largest eigenpair of a small symmetric tridiagonal matrix by cyclic Jacobi.
Eigenpair top_eigenpair(std::span<const double> alpha, std::span<const double> beta)
{
    const std::size_t k = alpha.size();
    std::vector<double> a(k * k, 0.0), v(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        a[i * k + i] = alpha[i];
        v[i * k + i] = 1.0;
        if (i + 1 < k)
            a[i * k + i + 1] = a[(i + 1) * k + i] = beta[i];
    }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0, diag = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            diag += a[i * k + i] * a[i * k + i];
            for (std::size_t j = i + 1; j < k; ++j)
                off += a[i * k + j] * a[i * k + j];
        }
        if (off <= 1e-30 * diag)
            break;
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = p + 1; q < k; ++q) {
                const double apq = a[p * k + q];
                if (apq == 0.0)
                    continue;
                const double theta = (a[q * k + q] - a[p * k + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t r = 0; r < k; ++r) {
                    const double arp = a[r * k + p], arq = a[r * k + q];
                    a[r * k + p] = c * arp - s * arq;
                    a[r * k + q] = s * arp + c * arq;
                }
                for (std::size_t r = 0; r < k; ++r) {
                    const double apr = a[p * k + r], aqr = a[q * k + r];
                    a[p * k + r] = c * apr - s * aqr;
                    a[q * k + r] = s * apr + c * aqr;
                }
                for (std::size_t r = 0; r < k; ++r) {
                    const double vrp = v[r * k + p], vrq = v[r * k + q];
                    v[r * k + p] = c * vrp - s * vrq;
                    v[r * k + q] = s * vrp + c * vrq;
                }
            }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < k; ++i)
        if (a[i * k + i] > a[best * k + best])
            best = i;
    Eigenpair e{a[best * k + best], std::vector<double>(k)};
    for (std::size_t r = 0; r < k; ++r)
        e.vector[r] = v[r * k + best];
    return e;
}

void apply_negative_laplacian(const LaplaceOperator& op, std::span<const double> x, std::span<double> y)
{
    kernels::laplacian(op, x, y);
    for (double& yi : y)
        yi = -yi;
}

} // namespace

SpectrumEstimate estimate_lambda_max(const LaplaceOperator& op, const SpectrumOptions& options)
{
    const std::size_t n = op.num_vertices();
    SpectrumEstimate est;
    est.gershgorin_bound = gershgorin_bound(op);
    if (n < 2)
        return est;

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(n), y(n);
    for (double& xi : x)
        xi = dist(rng);

    auto normalize = [&](std::vector<double>& v) {
        remove_constant_mode(op, v);
        const double len = std::sqrt(weighted_dot(op, v, v));
        if (!(len > 0.0))
            return false;
        for (double& vi : v)
            vi /= len;
        return true;
    };
    if (!normalize(x))
        throw SolverError("start vector lies in the constant mode");

    double lambda = 0.0;
    bool settled = false;
    if (options.method == SpectrumMethod::power) {
        while (est.iterations < options.max_iterations) {
            ++est.iterations;
            apply_negative_laplacian(op, x, y);
            const double next = weighted_dot(op, x, y);
            if (est.iterations > 1 && std::abs(next - lambda) <= options.relative_tolerance * std::abs(next)) {
                lambda = next;
                settled = true;
                break;
            }
            lambda = next;
            x.swap(y);
            if (!normalize(x)) {
                // -L x vanished: x was in the kernel, the whole spectrum is zero
                lambda = 0.0;
                settled = true;
                break;
            }
        }
    } else {
        const std::size_t m = std::max<std::size_t>(2, std::min(options.krylov_dimension, n - 1));
        std::vector<std::vector<double>> basis;
        std::vector<double> alpha, beta, w(n);
        bool first_cycle = true;
        while (!settled && est.iterations < options.max_iterations) {
            basis.assign(1, x);
            alpha.clear();
            beta.clear();
            bool invariant = false;
            while (alpha.size() < m && est.iterations < options.max_iterations) {
                const auto& q = basis.back();
                ++est.iterations;
                apply_negative_laplacian(op, q, w);
                remove_constant_mode(op, w);
                alpha.push_back(weighted_dot(op, q, w));
                // full reorthogonalization, twice
                for (int pass = 0; pass < 2; ++pass)
                    for (const auto& b : basis) {
                        const double h = weighted_dot(op, b, w);
                        for (std::size_t i = 0; i < n; ++i)
                            w[i] -= h * b[i];
                    }
                const double norm_w = std::sqrt(weighted_dot(op, w, w));
                if (norm_w <= 1e-12 * std::max(std::abs(alpha.back()), est.gershgorin_bound)) {
                    invariant = true;
                    break;
                }
                if (alpha.size() == m)
                    break;
                beta.push_back(norm_w);
                basis.emplace_back(n);
                for (std::size_t i = 0; i < n; ++i)
                    basis.back()[i] = w[i] / norm_w;
            }
            const Eigenpair ritz = top_eigenpair(alpha, beta);
            std::fill(x.begin(), x.end(), 0.0);
            for (std::size_t j = 0; j < alpha.size(); ++j)
                for (std::size_t i = 0; i < n; ++i)
                    x[i] += ritz.vector[j] * basis[j][i];
            if (!normalize(x)) {
                lambda = 0.0;
                settled = true;
                break;
            }
            if (invariant || (!first_cycle && std::abs(ritz.value - lambda) <= options.relative_tolerance *
                                                                                    std::abs(ritz.value)))
                settled = true;
            lambda = ritz.value;
            first_cycle = false;
        }
        if (settled) {
            apply_negative_laplacian(op, x, y);
            lambda = weighted_dot(op, x, y);
        }
    }
    if (!settled) {
        std::ostringstream msg;
        msg << (options.method == SpectrumMethod::power ? "power iteration" : "Lanczos iteration")
            << " did not settle in " << options.max_iterations << " operator applications (estimate " << lambda
            << ")";
        throw SolverError(msg.str());
    }

    // y = -L x for the returned x
    double r2 = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const double r = y[v] - lambda * x[v];
        r2 += op.dual_area(static_cast<Index>(v)) * r * r;
    }
    est.lambda_max = lambda;
    est.residual = lambda > 0.0 ? std::sqrt(r2) / lambda : std::sqrt(r2);
    est.eigenvector = std::move(x);
    return est;
}

double rayleigh_quotient(const LaplaceOperator& op, std::span<const double> u)
{
    if (u.size() != op.num_vertices())
        throw InvalidArgument("field length does not match vertex count");
    double numerator = 0.0;
    for (std::size_t v = 0; v < u.size(); ++v) {
        for (const auto& nb : op.row(static_cast<Index>(v))) {
            if (nb.vertex <= v)
                continue;
            const double d = u[nb.vertex] - u[v];
            numerator += nb.weight * d * d;
        }
    }
    const double denominator = weighted_dot(op, u, u);
    if (!(denominator > 0.0))
        throw InvalidArgument("Rayleigh quotient of a zero field");
    return numerator / denominator;
}

CflAudit audit_cfl(const LaplaceOperator& op, double c, const SpectrumOptions& options)
{
    CflAudit audit;
    audit.local_bound = cfl_bound(op, c).dt_max;
    const SpectrumEstimate spectrum = estimate_lambda_max(op, options);
    audit.lambda_max = spectrum.lambda_max;
    audit.gershgorin_bound = spectrum.gershgorin_bound;
    audit.exact_bound = spectrum.lambda_max > 0.0 ? 2.0 / (c * std::sqrt(spectrum.lambda_max))
                                                  : std::numeric_limits<double>::infinity();
    audit.ratio = audit.local_bound / audit.exact_bound;
    audit.conservative = audit.local_bound <= audit.exact_bound + 1e-12;
    return audit;
}

// Studies -------------------------------------------------------------------

std::optional<StudyProblem> parse_study_problem(std::string_view name)
{
    if (name == "flat_standing_wave")
        return StudyProblem::flat_standing_wave;
    if (name == "sphere_harmonic_wave")
        return StudyProblem::sphere_harmonic_wave;
    return std::nullopt;
}

std::string_view to_string(StudyProblem problem)
{
    return problem == StudyProblem::flat_standing_wave ? "flat_standing_wave" : "sphere_harmonic_wave";
}

double measure_harmonic_frequency(const SurfaceMesh& mesh, const LaplaceOperator& op, double radius, double c,
                                  double dt, double duration)
{
    const std::size_t n = mesh.num_vertices();
    std::vector<double> mode(n), zero(n, 0.0);
    for (std::size_t v = 0; v < n; ++v)
        mode[v] = mesh.position(static_cast<Index>(v)).z / radius;

    WaveState state = wave_init(op, mode, zero, dt, c);
    const auto steps = static_cast<std::size_t>(std::ceil(duration / dt));

    double q_prev = weighted_dot(op, state.u_prev, mode);
    double t_prev = 0.0;
    std::vector<double> crossings;
    for (std::size_t k = 0;; ++k) {
        const double q = weighted_dot(op, state.u_curr, mode);
        const double t = state.time();
        if ((q_prev > 0.0) != (q > 0.0))
            crossings.push_back(t_prev + (t - t_prev) * q_prev / (q_prev - q));
        q_prev = q;
        t_prev = t;
        if (k + 1 >= steps)
            break;
        wave_step(state, op);
    }
    if (crossings.size() < 2)
        throw SolverError("mode did not complete a half period; increase the duration");
    const double half_period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    return std::numbers::pi / half_period;
}

namespace {

double flat_standing_wave_error(int nx, double dt, std::size_t steps, const StudyOptions& o)
{
    const double L = o.domain_length;
    const double h = L / (nx - 1);
    const SurfaceMesh mesh = generate_flat_grid(nx, nx, h);
    const LaplaceOperator op = assemble_laplacian(mesh, build_dual_metrics(mesh));

    std::vector<Index> boundary;
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
        if (mesh.is_boundary_vertex(static_cast<Index>(v)))
            boundary.push_back(static_cast<Index>(v));

    const double k = std::numbers::pi / L;
    std::vector<double> u0(mesh.num_vertices()), v0(mesh.num_vertices(), 0.0);
    for (std::size_t v = 0; v < u0.size(); ++v) {
        const Vec3& p = mesh.position(static_cast<Index>(v));
        u0[v] = std::sin(k * p.x) * std::sin(k * p.y);
    }
    pin(u0, boundary);

    WaveState state = wave_init(op, u0, v0, dt, o.c);
    pin(state.u_curr, boundary);
    while (state.time_index < steps) {
        wave_step(state, op);
        pin(state.u_curr, boundary);
    }

    const double omega = o.c * k * std::numbers::sqrt2;
    const double decay = std::cos(omega * state.time());
    double err = 0.0;
    for (std::size_t v = 0; v < u0.size(); ++v) {
        const Vec3& p = mesh.position(static_cast<Index>(v));
        const double exact = std::sin(k * p.x) * std::sin(k * p.y) * decay;
        err = std::max(err, std::abs(exact - state.u_curr[v]));
    }
    return err;
}

struct SphereLevel {
    double h;
    double dt;
    double error;
};

SphereLevel sphere_frequency_error(int subdivisions, std::optional<double> dt_override, const StudyOptions& o)
{
    const SurfaceMesh mesh = generate_icosphere(o.radius, subdivisions);
    const DualMetrics metrics = build_dual_metrics(mesh);
    const LaplaceOperator op = assemble_laplacian(mesh, metrics);

    double h = 0.0;
    for (double l : metrics.primal_edge_lengths)
        h += l;
    h /= static_cast<double>(metrics.primal_edge_lengths.size());

    const double dt = dt_override ? *dt_override : o.cfl_fraction * cfl_bound(op, o.c).dt_max;
    const double exact = o.c * std::numbers::sqrt2 / o.radius;
    const double duration = o.periods * 2.0 * std::numbers::pi / exact;
    const double omega = measure_harmonic_frequency(mesh, op, o.radius, o.c, dt, duration);
    return {h, dt, std::abs(omega - exact) / exact};
}

void fill_orders(std::vector<ConvergenceRow>& rows)
{
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].observed_order = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                        : std::log2(rows[i - 1].error_max / rows[i].error_max);
}

} // namespace

std::vector<ConvergenceRow> convergence_study(StudyProblem problem, int levels, const StudyOptions& o)
{
    if (levels < 1)
        throw InvalidArgument("convergence study needs at least one level");
    std::vector<ConvergenceRow> rows;
    if (problem == StudyProblem::flat_standing_wave) {
        if (o.base_nx < 3)
            throw InvalidArgument("standing wave needs an interior vertex (nx >= 3)");
        const double h0 = o.domain_length / (o.base_nx - 1);
        const double dt0 = o.courant_number * h0 / (o.c * std::numbers::sqrt2);
        const auto steps0 = static_cast<std::size_t>(std::max(1.0, std::ceil(o.final_time / dt0)));
        for (int level = 0; level < levels; ++level) {
            const int scale = 1 << level;
            const int nx = (o.base_nx - 1) * scale + 1;
            const double dt = dt0 / scale;
            rows.push_back({level, h0 / scale, dt, flat_standing_wave_error(nx, dt, steps0 * scale, o), 0.0});
        }
    } else {
        for (int level = 0; level < levels; ++level) {
            const SphereLevel s = sphere_frequency_error(o.base_subdivisions + level, std::nullopt, o);
            rows.push_back({level, s.h, s.dt, s.error, 0.0});
        }
    }
    fill_orders(rows);
    return rows;
}

std::vector<ConvergenceRow> temporal_study(StudyProblem problem, int levels, const StudyOptions& o)
{
    if (levels < 1)
        throw InvalidArgument("temporal study needs at least one level");
    std::vector<ConvergenceRow> rows;
    if (problem == StudyProblem::flat_standing_wave) {
        const double h = o.domain_length / (o.base_nx - 1);
        const double dt0 = o.courant_number * h / (o.c * std::numbers::sqrt2);
        const auto steps0 = static_cast<std::size_t>(std::max(1.0, std::ceil(o.final_time / dt0)));
        for (int level = 0; level < levels; ++level) {
            const int scale = 1 << level;
            const double dt = dt0 / scale;
            rows.push_back({level, h, dt, flat_standing_wave_error(o.base_nx, dt, steps0 * scale, o), 0.0});
        }
    } else {
        const SphereLevel base = sphere_frequency_error(o.base_subdivisions, std::nullopt, o);
        rows.push_back({0, base.h, base.dt, base.error, 0.0});
        for (int level = 1; level < levels; ++level) {
            const double dt = base.dt / (1 << level);
            const SphereLevel s = sphere_frequency_error(o.base_subdivisions, dt, o);
            rows.push_back({level, s.h, s.dt, s.error, 0.0});
        }
    }
    fill_orders(rows);
    return rows;
}

void write_convergence_csv(std::span<const ConvergenceRow> rows, std::ostream& out)
{
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    out << "level,h,dt,error_max,observed_order\n";
    for (const ConvergenceRow& r : rows)
        out << r.level << ',' << r.h << ',' << r.dt << ',' << r.error_max << ',' << r.observed_order << '\n';
    out.precision(old_precision);
}

} // namespace decwave
