#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "decwave/dec.hpp"
#include "decwave/errors.hpp"
#include "decwave/mesh.hpp"
#include "decwave/mesh_io.hpp"
#include "oracles.hpp"

using namespace decwave;

namespace {

long euler(const SurfaceMesh& m)
{
    return static_cast<long>(m.num_vertices()) - static_cast<long>(m.num_edges()) +
           static_cast<long>(m.num_triangles());
}

// net count of directed traversals per undirected edge, brute force over triangles
bool orientation_cancels(const SurfaceMesh& m)
{
    std::map<std::pair<Index, Index>, int> net;
    for (const auto& t : m.triangles())
        for (int k = 0; k < 3; ++k) {
            Index a = t[k], b = t[(k + 1) % 3];
            if (a < b)
                net[{a, b}] += 1;
            else
                net[{b, a}] -= 1;
        }
    for (const auto& [e, n] : net) {
        const auto idx = m.find_edge(e.first, e.second);
        if (!idx)
            return false;
        if (!m.is_boundary_edge(*idx) && n != 0)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("tetrahedron generator")
{
    const SurfaceMesh m = generate_tetrahedron(1.0);
    CHECK(m.num_vertices() == 4);
    CHECK(m.num_edges() == 6);
    CHECK(m.num_triangles() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            CHECK(distance(m.position(Index(i)), m.position(Index(j))) == doctest::Approx(1.0).epsilon(1e-14));
    for (Index e = 0; e < m.num_edges(); ++e)
        CHECK(std::abs(m.edge_length(e) - 1.0) < 1e-14);
    CHECK(m.is_closed());
    CHECK(m.is_consistently_oriented());

    // outward normals: each face normal points away from the centroid
    Vec3 centroid{};
    for (const auto& p : m.vertices())
        centroid = centroid + p * 0.25;
    for (const auto& t : m.triangles()) {
        const Vec3 n = cross(m.position(t[1]) - m.position(t[0]), m.position(t[2]) - m.position(t[0]));
        CHECK(dot(n, m.position(t[0]) - centroid) > 0.0);
    }

    const auto r = validate(m);
    CHECK(r.is_closed);
    CHECK(r.is_well_centered);
    CHECK(r.euler_characteristic == 2);
    CHECK(r.obtuse_triangle_indices.empty());
}

TEST_CASE("tetrahedron face circumradius at edge length 2")
{
    const SurfaceMesh m = generate_tetrahedron(2.0);
    for (const auto& t : m.triangles()) {
        const Vec3 c = circumcenter(m.position(t[0]), m.position(t[1]), m.position(t[2]));
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(distance(c, m.position(t[k])) - 2.0 / std::sqrt(3.0)) < 1e-14);
    }
}

TEST_CASE("icosphere counts and radius")
{
    const SurfaceMesh ico = generate_icosphere(1.0, 0);
    CHECK(ico.num_vertices() == 12);
    CHECK(ico.num_edges() == 30);
    CHECK(ico.num_triangles() == 20);

    const SurfaceMesh s2 = generate_icosphere(1.0, 2);
    CHECK(s2.num_vertices() == 162);
    CHECK(euler(s2) == 2);

    for (int sub = 0; sub <= 4; ++sub) {
        const SurfaceMesh s = generate_icosphere(3.0, sub);
        CHECK(s.num_triangles() == 20u << (2 * sub));
        double worst = 0.0;
        for (const auto& p : s.vertices())
            worst = std::max(worst, std::abs(norm(p) - 3.0));
        CHECK(worst < 1e-12);
        CHECK(s.is_closed());
        CHECK(s.is_consistently_oriented());
        CHECK(euler(s) == 2);
        CHECK(orientation_cancels(s));
    }
}

TEST_CASE("icosphere subdivision 3 is well centered")
{
    const SurfaceMesh s = generate_icosphere(1.0, 3);
    const auto r = validate(s);
    CHECK(r.is_well_centered);
    CHECK(r.max_angle < std::numbers::pi / 2);
    // brute-force angle scan
    for (const auto& t : s.triangles())
        for (int k = 0; k < 3; ++k) {
            const Vec3 u = s.position(t[(k + 1) % 3]) - s.position(t[k]);
            const Vec3 v = s.position(t[(k + 2) % 3]) - s.position(t[k]);
            CHECK(dot(u, v) > 0.0);
        }
}

TEST_CASE("icosphere rejects bad arguments")
{
    CHECK_THROWS_AS(generate_icosphere(1.0, 8), InvalidArgument);
    CHECK_THROWS_AS(generate_icosphere(1.0, -1), InvalidArgument);
    CHECK_THROWS_AS(generate_icosphere(0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(generate_tetrahedron(-1.0), InvalidArgument);
    CHECK_THROWS_AS(generate_flat_grid(1, 3, 1.0), InvalidArgument);
    CHECK_THROWS_AS(generate_flat_grid(3, 3, 0.0), InvalidArgument);
}

TEST_CASE("flat grid structure")
{
    const SurfaceMesh g = generate_flat_grid(2, 2, 1.0);
    CHECK(g.num_vertices() == 4);
    CHECK(g.num_edges() == 5);
    CHECK(g.num_triangles() == 2);
    CHECK_FALSE(g.is_closed());

    const double h = 0.25;
    const SurfaceMesh g3 = generate_flat_grid(3, 3, h);
    CHECK(g3.vertex_edges(4).size() == 6);
    CHECK(g3.position(4).x == doctest::Approx(h));
    CHECK(g3.position(4).y == doctest::Approx(h));
    CHECK_FALSE(g3.is_closed());
    CHECK(g3.is_boundary_vertex(0));
    CHECK_FALSE(g3.is_boundary_vertex(4));

    // boundary edges have exactly one triangle
    std::size_t boundary = 0;
    for (Index e = 0; e < g3.num_edges(); ++e) {
        CHECK(g3.edge_triangles(e).size() >= 1);
        if (g3.is_boundary_edge(e))
            ++boundary;
    }
    CHECK(boundary == 8);
    CHECK(g3.num_boundary_edges() == 8);
    CHECK(orientation_cancels(g3));

    const auto r = validate(g3);
    CHECK(r.is_well_centered); // right angles are borderline, not obtuse
    CHECK(r.n_right_triangles == g3.num_triangles());
    CHECK(r.max_angle == doctest::Approx(std::numbers::pi / 2));
    CHECK(r.euler_characteristic == 1);
}

TEST_CASE("edge canonicalization and adjacency")
{
    const SurfaceMesh m = generate_icosphere(1.0, 1);
    for (Index e = 0; e < m.num_edges(); ++e) {
        const Edge& edge = m.edges()[e];
        CHECK(edge.first < edge.second);
        CHECK(edge.other(edge.first) == edge.second);
        CHECK(m.find_edge(edge.second, edge.first) == e);
        CHECK(m.edge_triangles(e).size() == 2);
        CHECK(m.edge_length(e) > 0.0);
    }
    CHECK_FALSE(m.find_edge(0, 0).has_value());

    for (Index t = 0; t < m.num_triangles(); ++t) {
        CHECK(m.triangle_area(t) > 0.0);
        const Triangle& tri = m.triangles()[t];
        for (int k = 0; k < 3; ++k) {
            const TriangleEdge te = m.triangle_edges(t)[k];
            const Edge& edge = m.edges()[te.edge];
            const Index a = tri[(k + 1) % 3], b = tri[(k + 2) % 3];
            CHECK(((edge.first == a && edge.second == b) || (edge.first == b && edge.second == a)));
            CHECK(te.sign == (a < b ? 1 : -1));
        }
    }
    std::size_t degree_sum = 0;
    for (Index v = 0; v < m.num_vertices(); ++v)
        degree_sum += m.vertex_edges(v).size();
    CHECK(degree_sum == 2 * m.num_edges());
}

TEST_CASE("mesh construction errors")
{
    const std::vector<Vec3> quad = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0.5, 0.5, 1}};

    SUBCASE("non-manifold edge")
    {
        std::vector<Vec3> pts = quad;
        pts.push_back({0.5, -1, 0});
        // edge (0,1) shared by three faces
        CHECK_THROWS_AS(SurfaceMesh(pts, {{0, 1, 2}, {1, 0, 4}, {0, 1, 5}}), MeshError);
    }
    SUBCASE("degenerate triangle")
    {
        std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
        CHECK_THROWS_AS(SurfaceMesh(pts, {{0, 1, 3}, {0, 1, 2}}), MeshError);
    }
    SUBCASE("index out of range")
    {
        CHECK_THROWS_AS(SurfaceMesh(quad, {{0, 1, 7}}), MeshError);
    }
    SUBCASE("repeated vertex")
    {
        CHECK_THROWS_AS(SurfaceMesh(quad, {{0, 1, 1}}), MeshError);
    }
    SUBCASE("non-finite position")
    {
        std::vector<Vec3> pts = quad;
        pts[2].x = std::nan("");
        CHECK_THROWS_AS(SurfaceMesh(pts, {{0, 1, 2}}), MeshError);
    }
    SUBCASE("empty")
    {
        CHECK_THROWS_AS(SurfaceMesh(quad, {}), MeshError);
    }
}

TEST_CASE("inconsistent orientation is reported")
{
    const std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    const SurfaceMesh ok(pts, {{0, 1, 2}, {0, 2, 3}});
    CHECK(ok.is_consistently_oriented());
    const SurfaceMesh flipped(pts, {{0, 1, 2}, {0, 3, 2}});
    CHECK_FALSE(flipped.is_consistently_oriented());
    CHECK_FALSE(validate(flipped).warnings.empty());
}

TEST_CASE("obtuse triangle detection")
{
    const std::vector<Vec3> pts = {{0, 0, 0}, {4, 0, 0}, {2, 0.5, 0}};
    const SurfaceMesh m(pts, {{0, 1, 2}});
    const auto r = validate(m);
    CHECK_FALSE(r.is_well_centered);
    REQUIRE(r.obtuse_triangle_indices.size() == 1);
    CHECK(r.obtuse_triangle_indices[0] == 0);
    CHECK(r.max_angle > std::numbers::pi / 2);
}

TEST_CASE("connected components")
{
    const std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {6, 0, 0}, {5, 1, 0}};
    const SurfaceMesh m(pts, {{0, 1, 2}, {3, 4, 5}});
    std::size_t count = 0;
    const auto label = m.connected_components(&count);
    CHECK(count == 2);
    CHECK(label[0] == label[2]);
    CHECK(label[3] == label[5]);
    CHECK(label[0] != label[3]);
}

TEST_CASE("OFF reader")
{
    SUBCASE("tetrahedron")
    {
        std::istringstream in("OFF\n# regular tetrahedron\n4 4 6\n"
                              "1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n"
                              "3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n");
        const SurfaceMesh m = read_off(in);
        CHECK(m.num_edges() == 6);
        CHECK(validate(m).euler_characteristic == 2);
        CHECK(m.is_closed());
    }
    SUBCASE("three faces on one edge")
    {
        std::istringstream in("OFF\n5 3 0\n0 0 0\n1 0 0\n0 1 0\n0 -1 0\n0 0 1\n"
                              "3 0 1 2\n3 1 0 3\n3 0 1 4\n");
        CHECK_THROWS_AS(read_off(in), MeshError);
    }
    SUBCASE("malformed")
    {
        std::istringstream missing_header("4 4 6\n");
        CHECK_THROWS_AS(read_off(missing_header), MeshError);
        std::istringstream truncated("OFF\n3 1 0\n0 0 0\n1 0 0\n");
        CHECK_THROWS_AS(read_off(truncated), MeshError);
        std::istringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
        CHECK_THROWS_AS(read_off(quad), MeshError);
    }
}

TEST_CASE("OBJ reader")
{
    SUBCASE("single triangle")
    {
        std::istringstream in("# one face\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1\n");
        const SurfaceMesh m = read_obj(in);
        CHECK(m.num_edges() == 3);
        CHECK(m.num_triangles() == 1);
        CHECK_FALSE(m.is_closed());
    }
    SUBCASE("negative indices and texture refs")
    {
        std::istringstream in("v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\ng patch\nf -3/1 -2/1 -1/1\n");
        const SurfaceMesh m = read_obj(in);
        CHECK(m.triangles()[0] == Triangle{0, 1, 2});
    }
    SUBCASE("bad index")
    {
        std::istringstream in("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
        CHECK_THROWS_AS(read_obj(in), MeshError);
    }
    SUBCASE("bad vertex line")
    {
        std::istringstream in("v 0 zero 0\n");
        CHECK_THROWS_AS(read_obj(in), MeshError);
    }
}

TEST_CASE("mesh write then load keeps positions and connectivity")
{
    const auto dir = oracle::scratch_dir("mesh_io");
    const SurfaceMesh m = generate_icosphere(1.7, 2);
    for (MeshFormat f : {MeshFormat::off, MeshFormat::obj}) {
        const auto path = dir / (f == MeshFormat::off ? "m.off" : "m.obj");
        write_mesh(m, path, f);
        CHECK(mesh_format_from_path(path) == f);
        const SurfaceMesh back = load_mesh(path, f);
        REQUIRE(back.num_vertices() == m.num_vertices());
        double worst = 0.0;
        for (Index v = 0; v < m.num_vertices(); ++v)
            worst = std::max(worst, distance(m.position(v), back.position(v)));
        CHECK(worst < 1e-12);
        CHECK(std::equal(m.triangles().begin(), m.triangles().end(), back.triangles().begin()));
    }
    CHECK_THROWS_AS(load_mesh(dir / "missing.off", MeshFormat::off), MeshError);
}

TEST_CASE("mesh format names")
{
    CHECK(parse_mesh_format("off") == MeshFormat::off);
    CHECK(parse_mesh_format("OBJ") == MeshFormat::obj);
    CHECK_FALSE(parse_mesh_format("ply").has_value());
    CHECK(mesh_format_from_path("a/b/bunny.OFF") == MeshFormat::off);
    CHECK_FALSE(mesh_format_from_path("bunny.stl").has_value());
}
