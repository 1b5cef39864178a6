#ifndef DECWAVE_ANALYSIS_HPP
#define DECWAVE_ANALYSIS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "decwave/dec.hpp"
#include "decwave/mesh.hpp"

namespace decwave {

inline constexpr std::uint64_t default_seed = 42;

struct SpectrumEstimate {
    double lambda_max = 0.0;
    /// Applications of the operator.
    std::size_t iterations = 0;
    /// ||-L x - lambda x||_P / (lambda ||x||_P) for the returned eigenvector.
    double residual = 0.0;
    double gershgorin_bound = 0.0;
    std::vector<double> eigenvector;
};

enum class SpectrumMethod {
    /// Restarted Lanczos with full reorthogonalization; converges through
    /// near-degenerate clusters at the top of the spectrum.
    lanczos,
    /// Plain power iteration. Its per-step stopping test can fire early when
    /// the top eigenvalues are nearly degenerate (icosphere subdivisions 3).
    power,
};

struct SpectrumOptions {
    SpectrumMethod method = SpectrumMethod::lanczos;
    std::uint64_t seed = default_seed;
    /// Relative change of the estimate between iterations (power) or restart cycles (lanczos).
    double relative_tolerance = 1e-10;
    /// Cap on operator applications.
    std::size_t max_iterations = 10000;
    /// Krylov basis size per Lanczos cycle.
    std::size_t krylov_dimension = 40;
};

/// Largest eigenvalue of -L in the P-weighted inner product, started from a
/// seeded random vector with the constant mode removed.
/// Throws SolverError if the estimate has not settled after max_iterations.
SpectrumEstimate estimate_lambda_max(const LaplaceOperator& op, const SpectrumOptions& options = {});

/// (sum_e w_e (u_head - u_tail)^2) / (sum_v P_v u_v^2).
double rayleigh_quotient(const LaplaceOperator& op, std::span<const double> u);

struct CflAudit {
    double local_bound = 0.0; // cfl_bound(op, c).dt_max
    double exact_bound = 0.0; // 2 / (c sqrt(lambda_max))
    double ratio = 0.0;       // local_bound / exact_bound
    double lambda_max = 0.0;
    double gershgorin_bound = 0.0;
    bool conservative = false; // local_bound <= exact_bound + 1e-12
};

CflAudit audit_cfl(const LaplaceOperator& op, double c, const SpectrumOptions& options = {});

// Convergence studies -------------------------------------------------------

enum class StudyProblem { flat_standing_wave, sphere_harmonic_wave };

std::optional<StudyProblem> parse_study_problem(std::string_view name);
std::string_view to_string(StudyProblem problem);

struct ConvergenceRow {
    int level = 0;
    double h = 0.0;
    double dt = 0.0;
    double error_max = 0.0;
    /// log2(error_prev / error); NaN on the first row.
    double observed_order = 0.0;
};

struct StudyOptions {
    double c = 1.0;
    // flat_standing_wave: [0, L]^2 with Dirichlet-zero boundary
    int base_nx = 17;
    double domain_length = 1.0;
    double final_time = 0.5;
    double courant_number = 0.4; // dt = courant_number * h / (c sqrt 2)
    // sphere_harmonic_wave: u0 = z / R on icospheres
    int base_subdivisions = 2;
    double radius = 1.0;
    double cfl_fraction = 0.2; // dt = cfl_fraction * cfl_bound
    double periods = 3.0;
};

/// Spatial refinement study. flat_standing_wave: nx -> 2nx-1 per level,
/// max-norm error at the final time. sphere_harmonic_wave: one extra
/// subdivision per level, error is the relative angular-frequency error of
/// the degree-1 mode against c sqrt(2) / R; h is the mean edge length.
std::vector<ConvergenceRow> convergence_study(StudyProblem problem, int levels, const StudyOptions& options = {});

/// Time refinement at a fixed mesh (the base level): dt halves per level.
std::vector<ConvergenceRow> temporal_study(StudyProblem problem, int levels, const StudyOptions& options = {});

/// Runs the leapfrog scheme from u0 = z/R, v0 = 0 and measures the
/// angular frequency of sum_v P_v u_v z_v / R by interpolated zero crossings.
double measure_harmonic_frequency(const SurfaceMesh& mesh, const LaplaceOperator& op, double radius, double c,
                                  double dt, double duration);

/// Header "level,h,dt,error_max,observed_order", one line per row.
void write_convergence_csv(std::span<const ConvergenceRow> rows, std::ostream& out);

} // namespace decwave

#endif
