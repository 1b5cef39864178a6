#include "decwave/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "decwave/conjugate_gradient.hpp"
#include "decwave/errors.hpp"
#include "decwave/kernels.hpp"
#include "decwave/log.hpp"

namespace decwave {

OverflowError::OverflowError(std::size_t time_index, std::size_t vertex, double value)
    : Error([&] {
          std::ostringstream msg;
          msg << "numerical overflow at time index " << time_index << ": |u| = " << std::abs(value)
              << " at vertex " << vertex << " exceeds " << overflow_threshold
              << " (time step probably violates the CFL bound)";
          return msg.str();
      }()),
      time_index_(time_index), vertex_(vertex)
{
}

namespace {

void check_field(std::span<const double> u, std::size_t n, const char* what)
{
    if (u.size() != n)
        throw InvalidArgument(std::string(what) + " has length " + std::to_string(u.size()) +
                              ", expected " + std::to_string(n));
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!std::isfinite(u[i]))
            throw InvalidArgument(std::string(what) + " has a non-finite value at vertex " + std::to_string(i));
}

void check_overflow(std::span<const double> u, std::size_t time_index)
{
    for (std::size_t v = 0; v < u.size(); ++v)
        if (!(std::abs(u[v]) <= overflow_threshold))
            throw OverflowError(time_index, v, u[v]);
}

} // namespace

// Sources -------------------------------------------------------------------

double SourceSignal::value(double t) const
{
    switch (kind) {
    case SourceKind::gaussian_pulse: {
        const double s = (t - center_time) / width;
        return amplitude * std::exp(-0.5 * s * s);
    }
    case SourceKind::sine:
        return amplitude * std::sin(2.0 * std::numbers::pi * frequency * t);
    case SourceKind::none:
        break;
    }
    return 0.0;
}

void SourceSignal::check(std::size_t num_vertices) const
{
    if (kind == SourceKind::none)
        return;
    if (vertex >= num_vertices)
        throw InvalidArgument("source vertex " + std::to_string(vertex) + " out of range (mesh has " +
                              std::to_string(num_vertices) + " vertices)");
    if (kind == SourceKind::gaussian_pulse && !(width > 0.0))
        throw InvalidArgument("gaussian pulse width must be positive");
}

void apply_source(const SourceSignal& source, std::span<double> u, double t)
{
    if (source.kind == SourceKind::none)
        return;
    source.check(u.size());
    if (source.injection == Injection::hard)
        u[source.vertex] = source.value(t);
    else
        u[source.vertex] += source.value(t);
}

// Stability -----------------------------------------------------------------

StabilityBound cfl_bound(const LaplaceOperator& op, double c)
{
    if (!(c > 0.0))
        throw InvalidArgument("wave speed must be positive");
    StabilityBound b;
    b.per_vertex_dt.resize(op.num_vertices());
    b.dt_max = std::numeric_limits<double>::infinity();
    bool negative_weights = false;
    for (std::size_t v = 0; v < op.num_vertices(); ++v) {
        const auto vi = static_cast<Index>(v);
        const double radicand = 2.0 * op.dual_area(vi) / op.weight_sum(vi);
        if (!(radicand > 0.0) || !std::isfinite(radicand)) {
            std::ostringstream msg;
            msg << "CFL bound undefined at vertex " << v << ": 2P/sum(w) = " << radicand;
            throw MeshError(msg.str());
        }
        for (const auto& nb : op.row(vi))
            negative_weights = negative_weights || nb.weight < 0.0;
        b.per_vertex_dt[v] = std::sqrt(radicand) / c;
        if (b.per_vertex_dt[v] < b.dt_max) {
            b.dt_max = b.per_vertex_dt[v];
            b.argmin_vertex = vi;
        }
    }
    if (negative_weights)
        warn("operator has negative edge weights (mesh is not well-centered); CFL bound may not guarantee stability");
    return b;
}

double gershgorin_bound(const LaplaceOperator& op)
{
    double bound = 0.0;
    for (std::size_t v = 0; v < op.num_vertices(); ++v) {
        const auto vi = static_cast<Index>(v);
        bound = std::max(bound, 2.0 * op.weight_sum(vi) / op.dual_area(vi));
    }
    return bound;
}

double heat_dt_bound(const LaplaceOperator& op, double c)
{
    if (!(c > 0.0))
        throw InvalidArgument("diffusivity must be positive");
    const double lambda = gershgorin_bound(op);
    if (!(lambda > 0.0))
        throw MeshError("heat step bound undefined: operator has no positive row weight");
    return 2.0 / (c * lambda);
}

// Wave ----------------------------------------------------------------------

WaveState wave_init(const LaplaceOperator& op, std::span<const double> u0, std::span<const double> v0,
                    double dt, double c)
{
    const std::size_t n = op.num_vertices();
    check_field(u0, n, "initial displacement");
    check_field(v0, n, "initial velocity");
    if (!(dt > 0.0))
        throw InvalidArgument("time step must be positive");
    if (!(c > 0.0))
        throw InvalidArgument("wave speed must be positive");

    try {
        const StabilityBound bound = cfl_bound(op, c);
        if (dt > bound.dt_max) {
            std::ostringstream msg;
            msg << "dt = " << dt << " exceeds the CFL bound " << bound.dt_max << " (vertex "
                << bound.argmin_vertex << "); the run is expected to be unstable";
            warn(msg.str());
        }
    } catch (const MeshError& e) {
        warn(e.what());
    }

    WaveState s;
    s.dt = dt;
    s.c = c;
    s.time_index = 1;
    s.u_prev.assign(u0.begin(), u0.end());
    s.u_curr.resize(n);
    std::vector<double> lap(n);
    kernels::laplacian(op, u0, lap);
    const double half_courant2 = 0.5 * (c * dt) * (c * dt);
    for (std::size_t v = 0; v < n; ++v)
        s.u_curr[v] = u0[v] + dt * v0[v] + half_courant2 * lap[v];
    return s;
}

void wave_step(WaveState& state, const LaplaceOperator& op, const SourceSignal& source)
{
    const double courant2 = (state.c * state.dt) * (state.c * state.dt);
    // in place: each row reads u_prev only at its own vertex
    kernels::leapfrog(op, courant2, state.u_prev, state.u_curr, state.u_prev);
    std::swap(state.u_prev, state.u_curr);
    ++state.time_index;
    apply_source(source, state.u_curr, state.time());
    check_overflow(state.u_curr, state.time_index);
}

double wave_energy(const WaveState& state, const LaplaceOperator& op)
{
    const std::size_t n = op.num_vertices();
    double kinetic = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        const double rate = (state.u_curr[v] - state.u_prev[v]) / state.dt;
        kinetic += op.dual_area(static_cast<Index>(v)) * rate * rate;
    }
    double potential = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        for (const auto& nb : op.row(static_cast<Index>(v))) {
            if (nb.vertex <= v)
                continue;
            potential += nb.weight * (state.u_curr[nb.vertex] - state.u_curr[v]) *
                         (state.u_prev[nb.vertex] - state.u_prev[v]);
        }
    }
    return 0.5 * kinetic + 0.5 * state.c * state.c * potential;
}

// Heat ----------------------------------------------------------------------

HeatState heat_init(const LaplaceOperator& op, std::span<const double> u0, double dt, double c)
{
    check_field(u0, op.num_vertices(), "initial temperature");
    if (!(dt > 0.0))
        throw InvalidArgument("time step must be positive");
    if (!(c > 0.0))
        throw InvalidArgument("diffusivity must be positive");
    const double bound = heat_dt_bound(op, c);
    if (dt > bound) {
        std::ostringstream msg;
        msg << "dt = " << dt << " exceeds the explicit heat bound " << bound;
        warn(msg.str());
    }
    return HeatState{std::vector<double>(u0.begin(), u0.end()), 0, dt, c};
}

void heat_step(HeatState& state, const LaplaceOperator& op, const SourceSignal& source)
{
    std::vector<double> next(state.u_curr.size());
    kernels::explicit_diffusion(op, state.c * state.dt, state.u_curr, next);
    state.u_curr = std::move(next);
    ++state.time_index;
    apply_source(source, state.u_curr, state.time());
    check_overflow(state.u_curr, state.time_index);
}

double weighted_total(const LaplaceOperator& op, std::span<const double> u)
{
    double total = 0.0;
    for (std::size_t v = 0; v < u.size(); ++v)
        total += op.dual_area(static_cast<Index>(v)) * u[v];
    return total;
}

// Elliptic ------------------------------------------------------------------

void DirichletCondition::check(std::size_t num_vertices) const
{
    std::vector<bool> seen(num_vertices, false);
    for (const auto& [v, value] : constrained) {
        if (v >= num_vertices)
            throw InvalidArgument("constrained vertex " + std::to_string(v) + " out of range");
        if (seen[v])
            throw InvalidArgument("vertex " + std::to_string(v) + " constrained twice");
        if (!std::isfinite(value))
            throw InvalidArgument("constraint value at vertex " + std::to_string(v) + " is not finite");
        seen[v] = true;
    }
}

namespace {

// Component label per vertex from the operator's sparsity pattern.
std::vector<std::size_t> operator_components(const LaplaceOperator& op, std::size_t& count)
{
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(op.num_vertices(), unset);
    std::vector<Index> stack;
    count = 0;
    for (std::size_t seed = 0; seed < op.num_vertices(); ++seed) {
        if (label[seed] != unset)
            continue;
        label[seed] = count;
        stack.push_back(static_cast<Index>(seed));
        while (!stack.empty()) {
            const Index v = stack.back();
            stack.pop_back();
            for (const auto& nb : op.row(v)) {
                if (label[nb.vertex] == unset) {
                    label[nb.vertex] = count;
                    stack.push_back(nb.vertex);
                }
            }
        }
        ++count;
    }
    return label;
}

} // namespace

SolveResult solve_poisson(const LaplaceOperator& op, std::span<const double> rhs,
                          const DirichletCondition& condition, const LinearSolveOptions& options)
{
    const std::size_t n = op.num_vertices();
    check_field(rhs, n, "right-hand side");
    condition.check(n);

    std::size_t n_components = 0;
    const auto component = operator_components(op, n_components);
    std::vector<bool> anchored(n_components, false);
    for (const auto& [v, value] : condition.constrained)
        anchored[component[v]] = true;
    const bool free_surface = condition.constrained.empty();
    if (free_surface ? n_components > 1 : std::count(anchored.begin(), anchored.end(), false) > 0)
        throw SolverError("singular system: a connected component of the mesh has no constrained vertex");

    std::vector<double> b(n);
    for (std::size_t v = 0; v < n; ++v)
        b[v] = op.dual_area(static_cast<Index>(v)) * rhs[v];

    SolveResult result;
    result.u.assign(n, 0.0);

    std::vector<bool> fixed(n, false);
    for (const auto& [v, value] : condition.constrained) {
        fixed[v] = true;
        result.u[v] = value;
    }

    if (free_surface) {
        double total = 0.0;
        double scale = 0.0;
        for (double bi : b) {
            total += bi;
            scale += std::abs(bi);
        }
        if (std::abs(total) > 1e-10 * scale) {
            std::ostringstream msg;
            msg << "incompatible right-hand side: P-weighted mean " << total
                << " must vanish on a closed surface without constraints";
            throw SolverError(msg.str());
        }
        const double mean = total / static_cast<double>(n);
        for (double& bi : b)
            bi -= mean;
        result.gauge_fixed = true;
    } else {
        // move known values to the right-hand side: b_F -= K_FC u_C
        for (const auto& [v, value] : condition.constrained)
            for (const auto& nb : op.row(v))
                if (!fixed[nb.vertex])
                    b[nb.vertex] += nb.weight * value;
    }

    std::vector<Index> free_vertices;
    for (std::size_t v = 0; v < n; ++v)
        if (!fixed[v])
            free_vertices.push_back(static_cast<Index>(v));
    const std::size_t nf = free_vertices.size();

    std::vector<double> b_free(nf), x_free(nf, 0.0);
    for (std::size_t i = 0; i < nf; ++i)
        b_free[i] = b[free_vertices[i]];

    std::vector<double> full(n, 0.0), image(n);
    auto apply_free = [&](std::span<const double> in, std::span<double> out) {
        for (std::size_t i = 0; i < nf; ++i)
            full[free_vertices[i]] = in[i];
        kernels::stiffness(op, full, image);
        for (std::size_t i = 0; i < nf; ++i)
            out[i] = image[free_vertices[i]];
    };

    const std::size_t max_iterations = options.max_iterations ? options.max_iterations : 10 * n;
    const CgResult cg = conjugate_gradient(apply_free, b_free, x_free, options.relative_tolerance, max_iterations);
    result.iterations = cg.iterations;
    if (cg.breakdown)
        throw SolverError("conjugate gradient breakdown: stiffness matrix is not positive definite "
                          "(mesh is probably not well-centered)");
    if (!cg.converged) {
        std::ostringstream msg;
        msg << "conjugate gradient did not converge in " << cg.iterations << " iterations (relative residual "
            << cg.relative_residual << ")";
        throw SolverError(msg.str());
    }

    for (std::size_t i = 0; i < nf; ++i)
        result.u[free_vertices[i]] = x_free[i];

    std::vector<double> check(nf);
    apply_free(x_free, check);
    double r2 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
        r2 += (b_free[i] - check[i]) * (b_free[i] - check[i]);
        b2 += b_free[i] * b_free[i];
    }
    result.relative_residual = b2 > 0.0 ? std::sqrt(r2 / b2) : std::sqrt(r2);

    if (free_surface) {
        double area = 0.0, moment = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            area += op.dual_area(static_cast<Index>(v));
            moment += op.dual_area(static_cast<Index>(v)) * result.u[v];
        }
        const double shift = moment / area;
        for (double& uv : result.u)
            uv -= shift;
    }
    return result;
}

SolveResult solve_laplace(const LaplaceOperator& op, const DirichletCondition& condition,
                          const LinearSolveOptions& options)
{
    const std::vector<double> zero(op.num_vertices(), 0.0);
    return solve_poisson(op, zero, condition, options);
}

} // namespace decwave
