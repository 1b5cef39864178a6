#ifndef DECWAVE_DEC_HPP
#define DECWAVE_DEC_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "decwave/geometry.hpp"
#include "decwave/mesh.hpp"
#include "decwave/sparse.hpp"

namespace decwave {

/// Circumcenter of a non-degenerate triangle; throws MeshError for collinear points.
Vec3 circumcenter(const Vec3& a, const Vec3& b, const Vec3& c);

/**
 * Circumcentric dual of a triangle mesh.
 *
 * A triangle contributes to each of its edges the distance from its
 * circumcenter to the edge midpoint, signed negative when the circumcenter
 * lies across the edge from the opposite corner. The dual cell of a vertex
 * is the signed sum, over incident triangles, of the quadrilateral
 * (vertex, edge midpoint, circumcenter, other edge midpoint).
 */
struct DualMetrics {
    std::vector<Vec3> circumcenters;        // per triangle
    std::vector<Vec3> edge_midpoints;       // per edge
    std::vector<double> dual_edge_lengths;  // per edge, signed
    std::vector<double> primal_edge_lengths;
    std::vector<double> dual_cell_areas;    // per vertex, signed

    std::size_t num_negative_dual_edges = 0;
};

DualMetrics build_dual_metrics(const SurfaceMesh& mesh);

/**
 * Discrete Laplace-Beltrami operator on vertex fields,
 *
 *   (L u)_v = (1 / P_v) * sum_{edges (v, n)} w_vn * (u_n - u_v),
 *
 * with P_v the dual cell area and w the dual/primal length ratio. Stored
 * as the symmetric weight part (per-vertex neighbour rows) plus the 1/P
 * scaling so solvers can reach the symmetric form directly.
 */
class LaplaceOperator {
public:
    struct Neighbor {
        Index vertex;
        double weight;
    };

    /// `rows[v]` lists v's neighbours (sorted by vertex) with their edge weights.
    /// `diagonal[v]` is the stiffness diagonal, normally the sum of the row weights.
    LaplaceOperator(std::vector<std::vector<Neighbor>> rows, std::vector<double> diagonal,
                    std::vector<double> dual_areas);

    std::size_t num_vertices() const { return dual_areas_.size(); }

    std::span<const Neighbor> row(Index v) const;
    double dual_area(Index v) const { return dual_areas_[v]; }
    std::span<const double> dual_areas() const { return dual_areas_; }
    /// Sum of the edge weights incident to v.
    double weight_sum(Index v) const { return diagonal_[v]; }
    std::span<const double> weight_sums() const { return diagonal_; }

    /// Entries of diag(1/P) * M in row-major order, M[v][n] = w, M[v][v] = -sum w.
    std::vector<Triplet> triplets() const;

    /// Symmetric stiffness matrix K = -diag(P) * L (K[v][v] = sum w, K[v][n] = -w).
    SparseMatrix stiffness() const;

    std::span<const std::size_t> row_offsets() const { return offsets_; }
    std::span<const Neighbor> entries() const { return entries_; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> entries_;
    std::vector<double> diagonal_;
    std::vector<double> dual_areas_;
};

/// Builds the operator from per-edge weights dual/primal. Throws MeshError
/// naming the first vertex whose dual cell area is not positive.
LaplaceOperator assemble_laplacian(const SurfaceMesh& mesh, const DualMetrics& metrics);

/// Evaluates L u at every vertex (OpenMP-parallel over vertices).
std::vector<double> apply_laplacian(const LaplaceOperator& op, std::span<const double> u);

/// Largest |w_e - (cot a + cot b)/2| over edges, with a, b the angles
/// opposite e (one term for boundary edges).
double cotan_crosscheck(const SurfaceMesh& mesh, const DualMetrics& metrics);

/// Oriented incidence matrix. k = 0: edges x vertices, (d0 u)_e = u[second] - u[first].
/// k = 1: triangles x edges, entries are the triangle's traversal sign of each edge.
struct IncidenceMatrix {
    int degree = 0;
    SparseMatrix matrix;
};

IncidenceMatrix build_incidence(const SurfaceMesh& mesh, int k);

/// Diagonal Hodge stars: star0 = dual cell area (per vertex), star1 = dual/primal length (per edge).
struct HodgeStar {
    std::vector<double> star0;
    std::vector<double> star1;
};

HodgeStar build_hodge_star(const SurfaceMesh& mesh, const DualMetrics& metrics);

/// The 0-form Laplacian -star0^{-1} d0^T star1 d0 assembled by sparse products.
LaplaceOperator laplacian_from_forms(const SurfaceMesh& mesh, const DualMetrics& metrics);

/// Applies the factored form -star0^{-1} d0^T star1 d0 to u, one factor at a time.
std::vector<double> apply_laplacian_factored(const IncidenceMatrix& d0, const HodgeStar& star,
                                             std::span<const double> u);

/// Text dump of triplets(): one "row col value" line per entry, row-major.
void write_operator_triplets(const LaplaceOperator& op, const std::filesystem::path& path);

} // namespace decwave

#endif
