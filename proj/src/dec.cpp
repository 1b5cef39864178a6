#include "decwave/dec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "decwave/errors.hpp"
#include "decwave/kernels.hpp"

namespace decwave {

Vec3 circumcenter(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const Vec3 u = b - a;
    const Vec3 v = c - a;
    const Vec3 w = cross(u, v);
    const double w2 = norm_squared(w);
    // |u x v|^2 = |u|^2 |v|^2 sin^2(angle)
    if (!(w2 > 1e-24 * norm_squared(u) * norm_squared(v)))
        throw MeshError("circumcenter of a degenerate (collinear) triangle");
    return a + (norm_squared(u) * cross(v, w) + norm_squared(v) * cross(w, u)) * (1.0 / (2.0 * w2));
}

DualMetrics build_dual_metrics(const SurfaceMesh& mesh)
{
    DualMetrics m;
    const std::size_t ne = mesh.num_edges();
    m.circumcenters.resize(mesh.num_triangles());
    m.edge_midpoints.resize(ne);
    m.primal_edge_lengths.resize(ne);
    m.dual_edge_lengths.assign(ne, 0.0);
    m.dual_cell_areas.assign(mesh.num_vertices(), 0.0);

    for (std::size_t e = 0; e < ne; ++e) {
        const Edge& edge = mesh.edges()[e];
        m.edge_midpoints[e] = midpoint(mesh.position(edge.first), mesh.position(edge.second));
        m.primal_edge_lengths[e] = mesh.edge_length(static_cast<Index>(e));
    }

    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[t];
        const Vec3 p[3] = {mesh.position(tri[0]), mesh.position(tri[1]), mesh.position(tri[2])};
        const Vec3 center = circumcenter(p[0], p[1], p[2]);
        const Vec3 normal = normalized(cross(p[1] - p[0], p[2] - p[0]));
        m.circumcenters[t] = center;

        const auto& tedges = mesh.triangle_edges(static_cast<Index>(t));
        for (int k = 0; k < 3; ++k) {
            // local edge k is opposite corner k
            const Index e = tedges[k].edge;
            const Vec3& mid = m.edge_midpoints[e];
            const Vec3 to_center = center - mid;
            const double side = dot(to_center, p[k] - mid);
            const double length = norm(to_center);
            m.dual_edge_lengths[e] += side < 0.0 ? -length : length;
        }

        for (int k = 0; k < 3; ++k) {
            const Vec3& corner = p[k];
            const Vec3 to_next = midpoint(corner, p[(k + 1) % 3]);
            const Vec3 to_prev = midpoint(corner, p[(k + 2) % 3]);
            m.dual_cell_areas[tri[k]] += signed_triangle_area(corner, to_next, center, normal) +
                                         signed_triangle_area(corner, center, to_prev, normal);
        }
    }

    m.num_negative_dual_edges = static_cast<std::size_t>(
        std::count_if(m.dual_edge_lengths.begin(), m.dual_edge_lengths.end(), [](double l) { return l < 0.0; }));
    return m;
}

// LaplaceOperator -------------------------------------------------------------

LaplaceOperator::LaplaceOperator(std::vector<std::vector<Neighbor>> rows, std::vector<double> diagonal,
                                 std::vector<double> dual_areas)
    : diagonal_(std::move(diagonal)), dual_areas_(std::move(dual_areas))
{
    if (rows.size() != dual_areas_.size() || diagonal_.size() != dual_areas_.size())
        throw InvalidArgument("Laplace operator: row, diagonal and area counts differ");
    offsets_.reserve(rows.size() + 1);
    offsets_.push_back(0);
    for (auto& r : rows) {
        std::sort(r.begin(), r.end(), [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
        entries_.insert(entries_.end(), r.begin(), r.end());
        offsets_.push_back(entries_.size());
    }
}

std::span<const LaplaceOperator::Neighbor> LaplaceOperator::row(Index v) const
{
    return std::span<const Neighbor>(entries_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::vector<Triplet> LaplaceOperator::triplets() const
{
    std::vector<Triplet> out;
    out.reserve(entries_.size() + num_vertices());
    for (std::size_t v = 0; v < num_vertices(); ++v) {
        const double inv_area = 1.0 / dual_areas_[v];
        bool diagonal_done = false;
        for (const Neighbor& nb : row(static_cast<Index>(v))) {
            if (!diagonal_done && nb.vertex > v) {
                out.push_back({v, v, -diagonal_[v] * inv_area});
                diagonal_done = true;
            }
            out.push_back({v, nb.vertex, nb.weight * inv_area});
        }
        if (!diagonal_done)
            out.push_back({v, v, -diagonal_[v] * inv_area});
    }
    return out;
}

SparseMatrix LaplaceOperator::stiffness() const
{
    std::vector<Triplet> t;
    t.reserve(entries_.size() + num_vertices());
    for (std::size_t v = 0; v < num_vertices(); ++v) {
        t.push_back({v, v, diagonal_[v]});
        for (const Neighbor& nb : row(static_cast<Index>(v)))
            t.push_back({v, nb.vertex, -nb.weight});
    }
    return SparseMatrix(num_vertices(), num_vertices(), std::move(t));
}

namespace {

void require_positive_dual_areas(const std::vector<double>& areas)
{
    for (std::size_t v = 0; v < areas.size(); ++v) {
        if (!(areas[v] > 0.0)) {
            std::ostringstream msg;
            msg << "dual cell of vertex " << v << " has non-positive area " << areas[v]
                << "; mesh is too ill-shaped for the circumcentric dual";
            throw MeshError(msg.str());
        }
    }
}

} // namespace

LaplaceOperator assemble_laplacian(const SurfaceMesh& mesh, const DualMetrics& metrics)
{
    if (metrics.dual_cell_areas.size() != mesh.num_vertices() || metrics.dual_edge_lengths.size() != mesh.num_edges())
        throw InvalidArgument("dual metrics were built for a different mesh");
    require_positive_dual_areas(metrics.dual_cell_areas);

    std::vector<std::vector<LaplaceOperator::Neighbor>> rows(mesh.num_vertices());
    std::vector<double> diagonal(mesh.num_vertices(), 0.0);
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        for (Index e : mesh.vertex_edges(static_cast<Index>(v))) {
            const double w = metrics.dual_edge_lengths[e] / metrics.primal_edge_lengths[e];
            rows[v].push_back({mesh.edges()[e].other(static_cast<Index>(v)), w});
        }
        std::sort(rows[v].begin(), rows[v].end(),
                  [](const auto& a, const auto& b) { return a.vertex < b.vertex; });
        for (const auto& nb : rows[v])
            diagonal[v] += nb.weight;
    }
    return LaplaceOperator(std::move(rows), std::move(diagonal), metrics.dual_cell_areas);
}

std::vector<double> apply_laplacian(const LaplaceOperator& op, std::span<const double> u)
{
    if (u.size() != op.num_vertices())
        throw InvalidArgument("field length " + std::to_string(u.size()) + " does not match vertex count " +
                              std::to_string(op.num_vertices()));
    std::vector<double> out(u.size());
    kernels::laplacian(op, u, out);
    return out;
}

double cotan_crosscheck(const SurfaceMesh& mesh, const DualMetrics& metrics)
{
    double worst = 0.0;
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const Edge& edge = mesh.edges()[e];
        const Vec3& p = mesh.position(edge.first);
        const Vec3& q = mesh.position(edge.second);
        double expected = 0.0;
        for (Index t : mesh.edge_triangles(static_cast<Index>(e))) {
            const Triangle& tri = mesh.triangles()[t];
            Index opposite = tri[0];
            for (Index v : tri)
                if (v != edge.first && v != edge.second)
                    opposite = v;
            const Vec3 a = p - mesh.position(opposite);
            const Vec3 b = q - mesh.position(opposite);
            expected += 0.5 * dot(a, b) / norm(cross(a, b));
        }
        const double w = metrics.dual_edge_lengths[e] / metrics.primal_edge_lengths[e];
        worst = std::max(worst, std::abs(w - expected));
    }
    return worst;
}

IncidenceMatrix build_incidence(const SurfaceMesh& mesh, int k)
{
    std::vector<Triplet> t;
    if (k == 0) {
        t.reserve(2 * mesh.num_edges());
        for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
            t.push_back({e, mesh.edges()[e].first, -1.0});
            t.push_back({e, mesh.edges()[e].second, 1.0});
        }
        return {0, SparseMatrix(mesh.num_edges(), mesh.num_vertices(), std::move(t))};
    }
    if (k == 1) {
        t.reserve(3 * mesh.num_triangles());
        for (std::size_t f = 0; f < mesh.num_triangles(); ++f)
            for (const TriangleEdge& te : mesh.triangle_edges(static_cast<Index>(f)))
                t.push_back({f, te.edge, static_cast<double>(te.sign)});
        return {1, SparseMatrix(mesh.num_triangles(), mesh.num_edges(), std::move(t))};
    }
    throw InvalidArgument("incidence matrix degree must be 0 or 1, got " + std::to_string(k));
}

HodgeStar build_hodge_star(const SurfaceMesh& mesh, const DualMetrics& metrics)
{
    HodgeStar star;
    star.star0 = metrics.dual_cell_areas;
    star.star1.resize(mesh.num_edges());
    for (std::size_t e = 0; e < mesh.num_edges(); ++e)
        star.star1[e] = metrics.dual_edge_lengths[e] / metrics.primal_edge_lengths[e];
    return star;
}

LaplaceOperator laplacian_from_forms(const SurfaceMesh& mesh, const DualMetrics& metrics)
{
    require_positive_dual_areas(metrics.dual_cell_areas);
    const IncidenceMatrix d0 = build_incidence(mesh, 0);
    const HodgeStar star = build_hodge_star(mesh, metrics);
    const SparseMatrix stiffness = d0.matrix.transpose() * d0.matrix.scale_rows(star.star1);

    std::vector<std::vector<LaplaceOperator::Neighbor>> rows(mesh.num_vertices());
    std::vector<double> diagonal(mesh.num_vertices(), 0.0);
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        const auto cols = stiffness.row_cols(v);
        const auto vals = stiffness.row_values(v);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (cols[i] == v)
                diagonal[v] = vals[i];
            else
                rows[v].push_back({static_cast<Index>(cols[i]), -vals[i]});
        }
    }
    return LaplaceOperator(std::move(rows), std::move(diagonal), star.star0);
}

std::vector<double> apply_laplacian_factored(const IncidenceMatrix& d0, const HodgeStar& star,
                                             std::span<const double> u)
{
    if (d0.degree != 0)
        throw InvalidArgument("factored Laplacian needs the vertex-to-edge incidence matrix");
    std::vector<double> flux = d0.matrix.multiply(u);
    for (std::size_t e = 0; e < flux.size(); ++e)
        flux[e] *= star.star1[e];
    std::vector<double> out = d0.matrix.transpose().multiply(flux);
    for (std::size_t v = 0; v < out.size(); ++v)
        out[v] = -out[v] / star.star0[v];
    return out;
}

void write_operator_triplets(const LaplaceOperator& op, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out.precision(std::numeric_limits<double>::max_digits10);
    for (const Triplet& t : op.triplets())
        out << t.row << ' ' << t.col << ' ' << t.value << '\n';
    if (!out)
        throw std::runtime_error("I/O error while writing '" + path.string() + "'");
}

} // namespace decwave
