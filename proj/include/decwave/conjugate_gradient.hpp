#ifndef DECWAVE_CONJUGATE_GRADIENT_HPP
#define DECWAVE_CONJUGATE_GRADIENT_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace decwave {

struct CgResult {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
    /// p^T A p <= 0 was met: the operator is not positive definite on the Krylov space.
    bool breakdown = false;
};

inline double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

/// Unpreconditioned conjugate gradients for A x = b, starting from x.
/// `apply(in, out)` writes A*in to out. Stops when ||r|| < tol * ||b||.
template <typename ApplyFn>
CgResult conjugate_gradient(ApplyFn&& apply, std::span<const double> b, std::span<double> x,
                            double relative_tolerance, std::size_t max_iterations)
{
    const std::size_t n = b.size();
    std::vector<double> r(n), p(n), q(n);
    CgResult result;

    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        for (double& xi : x)
            xi = 0.0;
        result.converged = true;
        return result;
    }

    apply(std::span<const double>(x.data(), n), std::span<double>(q));
    for (std::size_t i = 0; i < n; ++i)
        p[i] = r[i] = b[i] - q[i];
    double rr = dot(r, r);

    while (true) {
        result.relative_residual = std::sqrt(rr) / b_norm;
        if (result.relative_residual < relative_tolerance) {
            result.converged = true;
            return result;
        }
        if (result.iterations >= max_iterations)
            return result;
        ++result.iterations;

        apply(std::span<const double>(p), std::span<double>(q));
        const double pq = dot(p, q);
        if (!(pq > 0.0)) {
            result.breakdown = true;
            return result;
        }
        const double alpha = rr / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        const double rr_next = dot(r, r);
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < n; ++i)
            p[i] = r[i] + beta * p[i];
    }
}

} // namespace decwave

#endif
