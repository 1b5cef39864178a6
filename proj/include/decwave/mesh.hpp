#ifndef DECWAVE_MESH_HPP
#define DECWAVE_MESH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decwave/geometry.hpp"

namespace decwave {

using Index = std::uint32_t;
using Triangle = std::array<Index, 3>;

/// Undirected edge stored canonically with first < second.
struct Edge {
    Index first;
    Index second;

    Index other(Index v) const { return v == first ? second : first; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Reference from a triangle to one of its edges. Local edge k of triangle
/// (i, j, k) is the edge opposite corner k, i.e. (j,k), (k,i), (i,j).
/// `sign` is +1 when the triangle traverses the edge first -> second.
struct TriangleEdge {
    Index edge;
    int sign;
};

/**
 * Indexed triangle mesh of a 2-manifold (possibly with boundary).
 *
 * Construction deduplicates edges, builds the edge/triangle and
 * vertex/edge adjacency, and rejects non-manifold edges and degenerate
 * triangles. The mesh is immutable afterwards.
 */
class SurfaceMesh {
public:
    /// Relative area below which a triangle is treated as degenerate.
    static constexpr double degenerate_area_ratio = 1e-12;

    SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles);

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }

    std::span<const Vec3> vertices() const { return vertices_; }
    std::span<const Triangle> triangles() const { return triangles_; }
    std::span<const Edge> edges() const { return edges_; }

    const Vec3& position(Index v) const { return vertices_[v]; }

    /// One or two triangles incident to edge `e`.
    std::span<const Index> edge_triangles(Index e) const;
    /// Edges incident to vertex `v`, in ascending edge order.
    std::span<const Index> vertex_edges(Index v) const;
    const std::array<TriangleEdge, 3>& triangle_edges(Index t) const { return triangle_edges_[t]; }

    std::optional<Index> find_edge(Index a, Index b) const;

    bool is_boundary_edge(Index e) const { return edge_triangles(e).size() == 1; }
    bool is_boundary_vertex(Index v) const { return boundary_vertex_[v] != 0; }
    bool is_closed() const { return num_boundary_edges_ == 0; }
    std::size_t num_boundary_edges() const { return num_boundary_edges_; }

    /// True when every interior edge is traversed in opposite directions by its two triangles.
    bool is_consistently_oriented() const { return consistently_oriented_; }

    double edge_length(Index e) const;
    double triangle_area(Index t) const;
    double total_area() const;

    /// Component label per vertex (labels 0..n-1 in order of first appearance).
    std::vector<Index> connected_components(std::size_t* count = nullptr) const;

private:
    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<Edge> edges_;
    std::vector<std::array<TriangleEdge, 3>> triangle_edges_;

    // CSR-style adjacency
    std::vector<Index> edge_tri_offsets_;
    std::vector<Index> edge_tri_;
    std::vector<Index> vertex_edge_offsets_;
    std::vector<Index> vertex_edge_;

    std::vector<std::uint8_t> boundary_vertex_;
    std::size_t num_boundary_edges_ = 0;
    bool consistently_oriented_ = true;
};

struct MeshQualityReport {
    std::size_t n_vertices = 0;
    std::size_t n_edges = 0;
    std::size_t n_triangles = 0;
    std::size_t n_boundary_edges = 0;
    bool is_closed = false;
    bool is_consistently_oriented = false;
    bool is_well_centered = false;
    std::vector<Index> obtuse_triangle_indices;
    /// Triangles whose largest angle is a right angle within tolerance.
    std::size_t n_right_triangles = 0;
    double min_angle = 0.0;
    double max_angle = 0.0;
    long euler_characteristic = 0;
    std::vector<std::string> warnings;
};

/// Tolerance (radians) separating exact right angles from obtuse ones.
inline constexpr double obtuse_angle_tolerance = 1e-9;

MeshQualityReport validate(const SurfaceMesh& mesh);

// Generators ----------------------------------------------------------------

/// Regular tetrahedron surface with outward-facing triangles. Vertex order A, B, C, D.
SurfaceMesh generate_tetrahedron(double edge_length);

/// Icosahedron refined `subdivisions` times (0..7) by edge midpoint
/// splitting, vertices projected to the sphere of the given radius.
SurfaceMesh generate_icosphere(double radius, int subdivisions);

enum class GridDiagonal { right_isoceles };

/// Planar nx-by-ny vertex grid in the z = 0 plane, vertex (i, j) at index
/// j*nx + i, each cell split by its (i,j)-(i+1,j+1) diagonal.
SurfaceMesh generate_flat_grid(int nx, int ny, double spacing,
                               GridDiagonal diagonal = GridDiagonal::right_isoceles);

} // namespace decwave

#endif
