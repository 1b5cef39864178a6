#ifndef DECWAVE_KERNELS_HPP
#define DECWAVE_KERNELS_HPP

#include <span>

#include "decwave/dec.hpp"

// Per-vertex update kernels. The `kernels` versions run one OpenMP thread
// team over vertex rows; every row is summed in the same order regardless
// of thread count, so results are bit-identical for any OMP_NUM_THREADS.
// The `reference` versions are plain serial loops written independently
// (edge scatter instead of row gather) and exist for tests and benchmarks.

namespace decwave::kernels {

/// out = L u
void laplacian(const LaplaceOperator& op, std::span<const double> u, std::span<double> out);

/// out = K u with K the symmetric stiffness matrix (K = -diag(P) L).
void stiffness(const LaplaceOperator& op, std::span<const double> u, std::span<double> out);

/// next = 2 curr - prev + courant2 * L curr, courant2 = (c dt)^2.
void leapfrog(const LaplaceOperator& op, double courant2, std::span<const double> prev,
              std::span<const double> curr, std::span<double> next);

/// next = curr + diffusion_dt * L curr.
void explicit_diffusion(const LaplaceOperator& op, double diffusion_dt, std::span<const double> curr,
                        std::span<double> next);

} // namespace decwave::kernels

namespace decwave::reference {

void laplacian(const LaplaceOperator& op, std::span<const double> u, std::span<double> out);
void stiffness(const LaplaceOperator& op, std::span<const double> u, std::span<double> out);
void leapfrog(const LaplaceOperator& op, double courant2, std::span<const double> prev,
              std::span<const double> curr, std::span<double> next);
void explicit_diffusion(const LaplaceOperator& op, double diffusion_dt, std::span<const double> curr,
                        std::span<double> next);

} // namespace decwave::reference

#endif
