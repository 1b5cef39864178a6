#include "decwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <tuple>

#include "decwave/errors.hpp"

namespace decwave {

namespace {

struct EdgeUse {
    Index first;
    Index second;
    Index triangle;
    int local;
    int sign;
};

} // namespace

SurfaceMesh::SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles))
{
    const std::size_t nv = vertices_.size();
    const std::size_t nt = triangles_.size();
    if (nt == 0)
        throw MeshError("mesh has no triangles");

    for (std::size_t v = 0; v < nv; ++v) {
        const Vec3& p = vertices_[v];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw MeshError("vertex " + std::to_string(v) + " has a non-finite coordinate");
    }

    for (std::size_t t = 0; t < nt; ++t) {
        const Triangle& tri = triangles_[t];
        for (Index i : tri) {
            if (i >= nv)
                throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                                std::to_string(i) + " out of range");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw MeshError("triangle " + std::to_string(t) + " repeats a vertex");
    }

    double mean_area = 0.0;
    for (std::size_t t = 0; t < nt; ++t)
        mean_area += triangle_area(static_cast<Index>(t));
    mean_area /= static_cast<double>(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const double a = triangle_area(static_cast<Index>(t));
        if (!(a > degenerate_area_ratio * mean_area)) {
            std::ostringstream msg;
            msg << "degenerate triangle " << t << " (area " << a << ", mean " << mean_area << ")";
            throw MeshError(msg.str());
        }
    }

    std::vector<EdgeUse> uses;
    uses.reserve(3 * nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const Triangle& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            const Index a = tri[(k + 1) % 3];
            const Index b = tri[(k + 2) % 3];
            uses.push_back({std::min(a, b), std::max(a, b), static_cast<Index>(t), k, a < b ? 1 : -1});
        }
    }
    std::sort(uses.begin(), uses.end(), [](const EdgeUse& l, const EdgeUse& r) {
        return std::tie(l.first, l.second, l.triangle, l.local) <
               std::tie(r.first, r.second, r.triangle, r.local);
    });

    triangle_edges_.resize(nt);
    edge_tri_offsets_.push_back(0);
    for (std::size_t i = 0; i < uses.size();) {
        std::size_t j = i;
        while (j < uses.size() && uses[j].first == uses[i].first && uses[j].second == uses[i].second)
            ++j;
        const Index e = static_cast<Index>(edges_.size());
        if (j - i > 2) {
            std::ostringstream msg;
            msg << "non-manifold edge (" << uses[i].first << ", " << uses[i].second << ") shared by "
                << (j - i) << " triangles";
            throw MeshError(msg.str());
        }
        if (j - i == 2) {
            if (uses[i].triangle == uses[i + 1].triangle)
                throw MeshError("triangle " + std::to_string(uses[i].triangle) + " uses an edge twice");
            if (uses[i].sign == uses[i + 1].sign)
                consistently_oriented_ = false;
        } else {
            ++num_boundary_edges_;
        }
        edges_.push_back({uses[i].first, uses[i].second});
        for (std::size_t k = i; k < j; ++k) {
            edge_tri_.push_back(uses[k].triangle);
            triangle_edges_[uses[k].triangle][uses[k].local] = {e, uses[k].sign};
        }
        edge_tri_offsets_.push_back(static_cast<Index>(edge_tri_.size()));
        i = j;
    }

    std::vector<Index> degree(nv, 0);
    for (const Edge& e : edges_) {
        ++degree[e.first];
        ++degree[e.second];
    }
    vertex_edge_offsets_.assign(nv + 1, 0);
    for (std::size_t v = 0; v < nv; ++v)
        vertex_edge_offsets_[v + 1] = vertex_edge_offsets_[v] + degree[v];
    vertex_edge_.resize(vertex_edge_offsets_[nv]);
    std::vector<Index> fill(vertex_edge_offsets_.begin(), vertex_edge_offsets_.end() - 1);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        vertex_edge_[fill[edges_[e].first]++] = static_cast<Index>(e);
        vertex_edge_[fill[edges_[e].second]++] = static_cast<Index>(e);
    }

    boundary_vertex_.assign(nv, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (is_boundary_edge(static_cast<Index>(e))) {
            boundary_vertex_[edges_[e].first] = 1;
            boundary_vertex_[edges_[e].second] = 1;
        }
    }
}

std::span<const Index> SurfaceMesh::edge_triangles(Index e) const
{
    return std::span<const Index>(edge_tri_).subspan(edge_tri_offsets_[e],
                                                     edge_tri_offsets_[e + 1] - edge_tri_offsets_[e]);
}

std::span<const Index> SurfaceMesh::vertex_edges(Index v) const
{
    return std::span<const Index>(vertex_edge_).subspan(
        vertex_edge_offsets_[v], vertex_edge_offsets_[v + 1] - vertex_edge_offsets_[v]);
}

std::optional<Index> SurfaceMesh::find_edge(Index a, Index b) const
{
    const Edge key{std::min(a, b), std::max(a, b)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key, [](const Edge& l, const Edge& r) {
        return std::tie(l.first, l.second) < std::tie(r.first, r.second);
    });
    if (it == edges_.end() || !(*it == key))
        return std::nullopt;
    return static_cast<Index>(it - edges_.begin());
}

double SurfaceMesh::edge_length(Index e) const
{
    return distance(vertices_[edges_[e].first], vertices_[edges_[e].second]);
}

double SurfaceMesh::triangle_area(Index t) const
{
    const Triangle& tri = triangles_[t];
    return decwave::triangle_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double SurfaceMesh::total_area() const
{
    double sum = 0.0;
    for (std::size_t t = 0; t < triangles_.size(); ++t)
        sum += triangle_area(static_cast<Index>(t));
    return sum;
}

std::vector<Index> SurfaceMesh::connected_components(std::size_t* count) const
{
    constexpr Index unset = ~Index{0};
    std::vector<Index> label(vertices_.size(), unset);
    std::vector<Index> stack;
    Index next = 0;
    for (std::size_t seed = 0; seed < vertices_.size(); ++seed) {
        if (label[seed] != unset)
            continue;
        label[seed] = next;
        stack.push_back(static_cast<Index>(seed));
        while (!stack.empty()) {
            const Index v = stack.back();
            stack.pop_back();
            for (Index e : vertex_edges(v)) {
                const Index u = edges_[e].other(v);
                if (label[u] == unset) {
                    label[u] = next;
                    stack.push_back(u);
                }
            }
        }
        ++next;
    }
    if (count)
        *count = next;
    return label;
}

MeshQualityReport validate(const SurfaceMesh& mesh)
{
    MeshQualityReport r;
    r.n_vertices = mesh.num_vertices();
    r.n_edges = mesh.num_edges();
    r.n_triangles = mesh.num_triangles();
    r.n_boundary_edges = mesh.num_boundary_edges();
    r.is_closed = mesh.is_closed();
    r.is_consistently_oriented = mesh.is_consistently_oriented();
    r.euler_characteristic = static_cast<long>(r.n_vertices) - static_cast<long>(r.n_edges) +
                             static_cast<long>(r.n_triangles);

    constexpr double right = std::numbers::pi / 2.0;
    r.min_angle = std::numbers::pi;
    r.max_angle = 0.0;
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[t];
        double largest = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double a = angle_at(mesh.position(tri[k]), mesh.position(tri[(k + 1) % 3]),
                                      mesh.position(tri[(k + 2) % 3]));
            largest = std::max(largest, a);
            r.min_angle = std::min(r.min_angle, a);
        }
        r.max_angle = std::max(r.max_angle, largest);
        if (largest > right + obtuse_angle_tolerance)
            r.obtuse_triangle_indices.push_back(static_cast<Index>(t));
        else if (largest >= right - obtuse_angle_tolerance)
            ++r.n_right_triangles;
    }
    r.is_well_centered = r.obtuse_triangle_indices.empty();

    std::size_t components = 0;
    mesh.connected_components(&components);
    std::vector<bool> used(mesh.num_vertices(), false);
    for (const Triangle& tri : mesh.triangles())
        for (Index v : tri)
            used[v] = true;
    const auto unused = static_cast<std::size_t>(std::count(used.begin(), used.end(), false));

    if (!r.is_closed)
        r.warnings.push_back("mesh has " + std::to_string(r.n_boundary_edges) + " boundary edges");
    if (!r.is_consistently_oriented)
        r.warnings.push_back("triangle orientations are not globally consistent");
    if (!r.is_well_centered)
        r.warnings.push_back(std::to_string(r.obtuse_triangle_indices.size()) +
                             " obtuse triangles; dual lengths will be signed");
    if (r.n_right_triangles > 0)
        r.warnings.push_back(std::to_string(r.n_right_triangles) +
                             " right triangles; their hypotenuse dual contributions are zero");
    if (unused > 0)
        r.warnings.push_back(std::to_string(unused) + " vertices are not referenced by any triangle");
    if (components > 1)
        r.warnings.push_back("mesh has " + std::to_string(components) + " connected components");
    return r;
}

} // namespace decwave
