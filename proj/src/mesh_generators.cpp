#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "decwave/errors.hpp"
#include "decwave/mesh.hpp"

namespace decwave {

namespace {

// Flip faces of a star-shaped (about the origin) closed surface so normals point outward.
void orient_outward(const std::vector<Vec3>& v, std::vector<Triangle>& tris)
{
    for (Triangle& t : tris) {
        const Vec3 n = cross(v[t[1]] - v[t[0]], v[t[2]] - v[t[0]]);
        const Vec3 c = (v[t[0]] + v[t[1]] + v[t[2]]) * (1.0 / 3.0);
        if (dot(n, c) < 0.0)
            std::swap(t[1], t[2]);
    }
}

} // namespace

SurfaceMesh generate_tetrahedron(double edge_length)
{
    if (!(edge_length > 0.0))
        throw InvalidArgument("tetrahedron edge length must be positive");
    // Alternate cube corners; their pairwise distance is 2*sqrt(2).
    const double s = edge_length / (2.0 * std::sqrt(2.0));
    std::vector<Vec3> v = {
        {s, s, s},
        {s, -s, -s},
        {-s, s, -s},
        {-s, -s, s},
    };
    std::vector<Triangle> tris = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    orient_outward(v, tris);
    return SurfaceMesh(std::move(v), std::move(tris));
}

SurfaceMesh generate_icosphere(double radius, int subdivisions)
{
    if (!(radius > 0.0))
        throw InvalidArgument("icosphere radius must be positive");
    if (subdivisions < 0 || subdivisions > 7)
        throw InvalidArgument("icosphere subdivisions must be in [0, 7], got " + std::to_string(subdivisions));

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    for (Vec3& p : v)
        p = normalized(p);

    std::vector<Triangle> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    orient_outward(v, tris);

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<Index, Index>, Index> cache;
        auto split = [&](Index a, Index b) {
            const auto key = std::minmax(a, b);
            auto [it, inserted] = cache.try_emplace(key, static_cast<Index>(v.size()));
            if (inserted)
                v.push_back(normalized(midpoint(v[a], v[b])));
            return it->second;
        };
        std::vector<Triangle> refined;
        refined.reserve(4 * tris.size());
        for (const Triangle& f : tris) {
            const Index ab = split(f[0], f[1]);
            const Index bc = split(f[1], f[2]);
            const Index ca = split(f[2], f[0]);
            refined.push_back({f[0], ab, ca});
            refined.push_back({f[1], bc, ab});
            refined.push_back({f[2], ca, bc});
            refined.push_back({ab, bc, ca});
        }
        tris = std::move(refined);
    }

    for (Vec3& p : v)
        p *= radius;
    return SurfaceMesh(std::move(v), std::move(tris));
}

SurfaceMesh generate_flat_grid(int nx, int ny, double spacing, GridDiagonal)
{
    if (nx < 2 || ny < 2)
        throw InvalidArgument("flat grid needs at least 2 vertices per direction");
    if (!(spacing > 0.0))
        throw InvalidArgument("flat grid spacing must be positive");

    std::vector<Vec3> v;
    v.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            v.push_back({i * spacing, j * spacing, 0.0});

    std::vector<Triangle> tris;
    tris.reserve(2 * static_cast<std::size_t>(nx - 1) * (ny - 1));
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const auto v00 = static_cast<Index>(j * nx + i);
            const auto v10 = v00 + 1;
            const auto v01 = static_cast<Index>(v00 + nx);
            const auto v11 = v01 + 1;
            tris.push_back({v00, v10, v11});
            tris.push_back({v00, v11, v01});
        }
    }
    return SurfaceMesh(std::move(v), std::move(tris));
}

} // namespace decwave
