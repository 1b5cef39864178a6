#ifndef DECWAVE_SOLVERS_HPP
#define DECWAVE_SOLVERS_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "decwave/dec.hpp"

namespace decwave {

/// Any |u| above this ends a time-stepping run with OverflowError.
inline constexpr double overflow_threshold = 1e12;

// Sources -------------------------------------------------------------------

enum class SourceKind { none, gaussian_pulse, sine };
enum class Injection { hard, additive };

struct SourceSignal {
    SourceKind kind = SourceKind::none;
    Index vertex = 0;
    double amplitude = 1.0;
    double center_time = 0.0; // t0, gaussian_pulse
    double width = 1.0;       // sigma, gaussian_pulse
    double frequency = 0.0;   // Hz, sine
    Injection injection = Injection::hard;

    /// amplitude * exp(-(t - t0)^2 / (2 sigma^2)) or amplitude * sin(2 pi f t).
    double value(double t) const;
    void check(std::size_t num_vertices) const;
};

/// Overwrites (hard) or adds to (additive) the field at the source vertex.
void apply_source(const SourceSignal& source, std::span<double> u, double t);

// Stability -----------------------------------------------------------------

struct StabilityBound {
    double dt_max = 0.0;
    std::vector<double> per_vertex_dt;
    Index argmin_vertex = 0;
};

/// Per-vertex bound (1/c) sqrt(2 P_v / sum_e w_e); dt_max is the minimum.
/// Throws MeshError naming the first vertex with a non-positive radicand.
StabilityBound cfl_bound(const LaplaceOperator& op, double c);

/// max_v (2 / P_v) sum_e w_e, the Gershgorin bound on the spectrum of -L.
double gershgorin_bound(const LaplaceOperator& op);

/// Explicit heat step limit 2 / (c * gershgorin_bound).
double heat_dt_bound(const LaplaceOperator& op, double c);

// Wave equation -------------------------------------------------------------

/// Two time layers of the leapfrog scheme; u_curr holds time index
/// `time_index` (time time_index * dt), u_prev the layer before it.
struct WaveState {
    std::vector<double> u_prev;
    std::vector<double> u_curr;
    std::size_t time_index = 1;
    double dt = 0.0;
    double c = 1.0;

    double time() const { return static_cast<double>(time_index) * dt; }
};

/// u_prev = u0, u_curr = u0 + dt v0 + (c dt)^2 / 2 L u0. Warns when dt
/// exceeds the CFL bound.
WaveState wave_init(const LaplaceOperator& op, std::span<const double> u0, std::span<const double> v0,
                    double dt, double c);

/// u_next = 2 u_curr - u_prev + (c dt)^2 L u_curr, then the source at the new
/// time. The new layer overwrites u_prev before the two are swapped.
void wave_step(WaveState& state, const LaplaceOperator& op, const SourceSignal& source = {});

/// Discrete leapfrog energy, invariant under source-free stepping:
/// sum_v P_v ((u_curr - u_prev)/dt)^2 / 2 + c^2/2 sum_e w_e d(u_curr)_e d(u_prev)_e.
double wave_energy(const WaveState& state, const LaplaceOperator& op);

// Heat equation -------------------------------------------------------------

struct HeatState {
    std::vector<double> u_curr;
    std::size_t time_index = 0;
    double dt = 0.0;
    double c = 1.0; // diffusivity

    double time() const { return static_cast<double>(time_index) * dt; }
};

HeatState heat_init(const LaplaceOperator& op, std::span<const double> u0, double dt, double c);

/// u_next = u_curr + c dt L u_curr, then the source at the new time.
void heat_step(HeatState& state, const LaplaceOperator& op, const SourceSignal& source = {});

/// sum_v P_v u_v, conserved by source-free heat steps.
double weighted_total(const LaplaceOperator& op, std::span<const double> u);

// Elliptic problems ---------------------------------------------------------

struct DirichletCondition {
    std::vector<std::pair<Index, double>> constrained;

    void check(std::size_t num_vertices) const;
};

struct SolveResult {
    std::vector<double> u;
    /// Set when no constraint fixes the constant: u is the zero P-weighted-mean representative.
    bool gauge_fixed = false;
    std::size_t iterations = 0;
    /// Final ||b - K x|| / ||b|| of the reduced symmetric system.
    double relative_residual = 0.0;
};

struct LinearSolveOptions {
    double relative_tolerance = 1e-12;
    /// 0 selects 10 * number of vertices.
    std::size_t max_iterations = 0;
};

/// Solves -L u = 0 with the given vertex values.
SolveResult solve_laplace(const LaplaceOperator& op, const DirichletCondition& condition,
                          const LinearSolveOptions& options = {});

/// Solves -L u = rhs with the given vertex values, through the symmetric
/// system K u = diag(P) rhs with constrained unknowns eliminated.
SolveResult solve_poisson(const LaplaceOperator& op, std::span<const double> rhs,
                          const DirichletCondition& condition, const LinearSolveOptions& options = {});

} // namespace decwave

#endif
