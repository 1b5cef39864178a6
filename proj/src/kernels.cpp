#include "decwave/kernels.hpp"

#include <cstddef>
#include <string>
#include <vector>

#include "decwave/errors.hpp"

namespace decwave {

namespace {

void check_length(std::size_t got, std::size_t want, const char* what)
{
    if (got != want)
        throw InvalidArgument(std::string(what) + " has length " + std::to_string(got) + ", expected " +
                              std::to_string(want));
}

// sum_n w_vn (u_n - u_v); exactly zero for constant u
inline double weighted_difference(const LaplaceOperator::Neighbor* first, const LaplaceOperator::Neighbor* last,
                                  const double* u, double uv)
{
    double s = 0.0;
    for (; first != last; ++first)
        s += first->weight * (u[first->vertex] - uv);
    return s;
}

} // namespace

namespace kernels {

void laplacian(const LaplaceOperator& op, std::span<const double> u, std::span<double> out)
{
    const auto n = static_cast<std::ptrdiff_t>(op.num_vertices());
    check_length(u.size(), op.num_vertices(), "field");
    check_length(out.size(), op.num_vertices(), "output field");
    const auto* offsets = op.row_offsets().data();
    const auto* entries = op.entries().data();
    const double* area = op.dual_areas().data();
    const double* in = u.data();
    double* res = out.data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < n; ++v)
        res[v] = weighted_difference(entries + offsets[v], entries + offsets[v + 1], in, in[v]) / area[v];
}

void stiffness(const LaplaceOperator& op, std::span<const double> u, std::span<double> out)
{
    const auto n = static_cast<std::ptrdiff_t>(op.num_vertices());
    check_length(u.size(), op.num_vertices(), "field");
    check_length(out.size(), op.num_vertices(), "output field");
    const auto* offsets = op.row_offsets().data();
    const auto* entries = op.entries().data();
    const double* in = u.data();
    double* res = out.data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < n; ++v)
        res[v] = -weighted_difference(entries + offsets[v], entries + offsets[v + 1], in, in[v]);
}

void leapfrog(const LaplaceOperator& op, double courant2, std::span<const double> prev,
              std::span<const double> curr, std::span<double> next)
{
    const auto n = static_cast<std::ptrdiff_t>(op.num_vertices());
    check_length(prev.size(), op.num_vertices(), "previous layer");
    check_length(curr.size(), op.num_vertices(), "current layer");
    check_length(next.size(), op.num_vertices(), "next layer");
    const auto* offsets = op.row_offsets().data();
    const auto* entries = op.entries().data();
    const double* area = op.dual_areas().data();
    const double* up = prev.data();
    const double* uc = curr.data();
    double* un = next.data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < n; ++v) {
        const double lap = weighted_difference(entries + offsets[v], entries + offsets[v + 1], uc, uc[v]) / area[v];
        un[v] = 2.0 * uc[v] - up[v] + courant2 * lap;
    }
}

void explicit_diffusion(const LaplaceOperator& op, double diffusion_dt, std::span<const double> curr,
                        std::span<double> next)
{
    const auto n = static_cast<std::ptrdiff_t>(op.num_vertices());
    check_length(curr.size(), op.num_vertices(), "current layer");
    check_length(next.size(), op.num_vertices(), "next layer");
    const auto* offsets = op.row_offsets().data();
    const auto* entries = op.entries().data();
    const double* area = op.dual_areas().data();
    const double* uc = curr.data();
    double* un = next.data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < n; ++v) {
        const double lap = weighted_difference(entries + offsets[v], entries + offsets[v + 1], uc, uc[v]) / area[v];
        un[v] = uc[v] + diffusion_dt * lap;
    }
}

} // namespace kernels

namespace reference {

// Edge scatter: each undirected edge (v < n) visited once.
static std::vector<double> edge_flux_sum(const LaplaceOperator& op, std::span<const double> u)
{
    check_length(u.size(), op.num_vertices(), "field");
    std::vector<double> acc(op.num_vertices(), 0.0);
    for (std::size_t v = 0; v < op.num_vertices(); ++v) {
        for (const auto& nb : op.row(static_cast<Index>(v))) {
            if (nb.vertex <= v)
                continue;
            const double flux = nb.weight * (u[nb.vertex] - u[v]);
            acc[v] += flux;
            acc[nb.vertex] -= flux;
        }
    }
    return acc;
}

void laplacian(const LaplaceOperator& op, std::span<const double> u, std::span<double> out)
{
    check_length(out.size(), op.num_vertices(), "output field");
    const std::vector<double> acc = edge_flux_sum(op, u);
    for (std::size_t v = 0; v < acc.size(); ++v)
        out[v] = acc[v] / op.dual_area(static_cast<Index>(v));
}

void stiffness(const LaplaceOperator& op, std::span<const double> u, std::span<double> out)
{
    check_length(out.size(), op.num_vertices(), "output field");
    const std::vector<double> acc = edge_flux_sum(op, u);
    for (std::size_t v = 0; v < acc.size(); ++v)
        out[v] = -acc[v];
}

void leapfrog(const LaplaceOperator& op, double courant2, std::span<const double> prev,
              std::span<const double> curr, std::span<double> next)
{
    check_length(prev.size(), op.num_vertices(), "previous layer");
    check_length(next.size(), op.num_vertices(), "next layer");
    std::vector<double> lap(op.num_vertices());
    laplacian(op, curr, lap);
    for (std::size_t v = 0; v < lap.size(); ++v)
        next[v] = 2.0 * curr[v] - prev[v] + courant2 * lap[v];
}

void explicit_diffusion(const LaplaceOperator& op, double diffusion_dt, std::span<const double> curr,
                        std::span<double> next)
{
    check_length(next.size(), op.num_vertices(), "next layer");
    std::vector<double> lap(op.num_vertices());
    laplacian(op, curr, lap);
    for (std::size_t v = 0; v < lap.size(); ++v)
        next[v] = curr[v] + diffusion_dt * lap[v];
}

} // namespace reference

} // namespace decwave
