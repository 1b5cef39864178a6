// Times the OpenMP kernels against the serial reference loops.
//
//   bench_kernels [subdivisions=6] [repeats=50]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <span>
#include <vector>

#include "decwave/dec.hpp"
#include "decwave/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace decwave;

namespace {

template <typename F>
double seconds_per_call(int repeats, F&& f)
{
    f(); // warm up
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i)
        f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / repeats;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

int main(int argc, char** argv)
{
    const int subdivisions = argc > 1 ? std::atoi(argv[1]) : 6;
    const int repeats = argc > 2 ? std::atoi(argv[2]) : 50;

    const SurfaceMesh mesh = generate_icosphere(1.0, subdivisions);
    const LaplaceOperator op = assemble_laplacian(mesh, build_dual_metrics(mesh));
    const std::size_t n = mesh.num_vertices();

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> prev(n), curr(n), a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        prev[i] = dist(rng);
        curr[i] = dist(rng);
    }

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("icosphere subdivisions %d: %zu vertices, %zu edges, %d thread(s), %d repeats\n", subdivisions, n,
                mesh.num_edges(), threads, repeats);
    std::printf("%-20s %14s %14s %9s %12s\n", "kernel", "openmp [ms]", "reference [ms]", "speedup", "max diff");

    auto report = [&](const char* name, double par, double ref) {
        std::printf("%-20s %14.3f %14.3f %9.2f %12.3g\n", name, par * 1e3, ref * 1e3, ref / par, max_diff(a, b));
    };

    {
        const double par = seconds_per_call(repeats, [&] { kernels::laplacian(op, curr, a); });
        const double ref = seconds_per_call(repeats, [&] { reference::laplacian(op, curr, b); });
        report("laplacian", par, ref);
    }
    {
        const double par = seconds_per_call(repeats, [&] { kernels::stiffness(op, curr, a); });
        const double ref = seconds_per_call(repeats, [&] { reference::stiffness(op, curr, b); });
        report("stiffness", par, ref);
    }
    {
        const double par = seconds_per_call(repeats, [&] { kernels::leapfrog(op, 1e-4, prev, curr, a); });
        const double ref = seconds_per_call(repeats, [&] { reference::leapfrog(op, 1e-4, prev, curr, b); });
        report("leapfrog", par, ref);
    }
    {
        const double par = seconds_per_call(repeats, [&] { kernels::explicit_diffusion(op, 1e-4, curr, a); });
        const double ref = seconds_per_call(repeats, [&] { reference::explicit_diffusion(op, 1e-4, curr, b); });
        report("explicit_diffusion", par, ref);
    }
    return 0;
}
