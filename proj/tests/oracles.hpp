// Test-only reference computations, independent of the library's code paths.
#ifndef DECWAVE_TESTS_ORACLES_HPP
#define DECWAVE_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "decwave/dec.hpp"
#include "decwave/mesh.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Eigenvalues of a small dense symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> symmetric_eigenvalues(Matrix a)
{
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                off += a[i][j] * a[i][j];
        if (off < 1e-30)
            break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300)
                    continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i)
        ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Cotangent weights straight from vertex positions: w(a,b) = sum over
/// triangles containing a and b of cot(angle at the third vertex) / 2.
inline Matrix cotan_weight_matrix(const decwave::SurfaceMesh& mesh)
{
    const std::size_t n = mesh.num_vertices();
    Matrix w(n, std::vector<double>(n, 0.0));
    for (const auto& t : mesh.triangles()) {
        for (int k = 0; k < 3; ++k) {
            const auto r = t[k], a = t[(k + 1) % 3], b = t[(k + 2) % 3];
            const auto& pr = mesh.position(r);
            const auto u = mesh.position(a) - pr;
            const auto v = mesh.position(b) - pr;
            const double angle = std::acos(decwave::dot(u, v) / (decwave::norm(u) * decwave::norm(v)));
            const double half_cot = 0.5 / std::tan(angle);
            w[a][b] += half_cot;
            w[b][a] += half_cot;
        }
    }
    return w;
}

/// Dense L from an operator's triplets.
inline Matrix dense(const decwave::LaplaceOperator& op)
{
    Matrix m(op.num_vertices(), std::vector<double>(op.num_vertices(), 0.0));
    for (const auto& t : op.triplets())
        m[t.row][t.col] = t.value;
    return m;
}

/// Spectrum of -L via the similar symmetric matrix P^{1/2} (-L) P^{-1/2}.
inline std::vector<double> spectrum_of_negative_laplacian(const decwave::LaplaceOperator& op)
{
    Matrix m = dense(op);
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m[i][j] = -m[i][j] * std::sqrt(op.dual_area(static_cast<decwave::Index>(i)) /
                                           op.dual_area(static_cast<decwave::Index>(j)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m[i][j] = m[j][i] = 0.5 * (m[i][j] + m[j][i]);
    return symmetric_eigenvalues(m);
}

inline std::vector<double> random_field(std::size_t n, std::uint64_t seed, double amplitude = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    std::vector<double> u(n);
    for (double& x : u)
        x = dist(rng);
    return u;
}

inline double max_abs(const std::vector<double>& u)
{
    double m = 0.0;
    for (double x : u)
        m = std::max(m, std::abs(x));
    return m;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("decwave_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace oracle

#endif
