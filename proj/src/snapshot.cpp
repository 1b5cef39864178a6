#include "decwave/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "decwave/errors.hpp"

namespace decwave {

namespace {

void check_length(const SurfaceMesh& mesh, std::span<const double> field)
{
    if (field.size() != mesh.num_vertices())
        throw InvalidArgument("field length " + std::to_string(field.size()) + " does not match vertex count " +
                              std::to_string(mesh.num_vertices()));
}

// printf-style so the output does not depend on stream locale/state
std::string format_number(double value, int digits)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out)
        throw std::runtime_error("I/O error while writing '" + path.string() + "'");
}

} // namespace

std::string frame_filename(std::size_t step, OutputFormat format)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "frame_%06zu.%s", step, format == OutputFormat::vtk ? "vtk" : "csv");
    return buf;
}

void write_vtk(const SurfaceMesh& mesh, std::span<const double> field, std::ostream& out, std::string_view title)
{
    check_length(mesh, field);
    constexpr int digits = 9;
    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET POLYDATA\n";
    out << "POINTS " << mesh.num_vertices() << " float\n";
    for (const Vec3& p : mesh.vertices())
        out << format_number(p.x, digits) << ' ' << format_number(p.y, digits) << ' '
            << format_number(p.z, digits) << '\n';
    out << "POLYGONS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
    for (const Triangle& t : mesh.triangles())
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "POINT_DATA " << mesh.num_vertices() << "\nSCALARS u float 1\nLOOKUP_TABLE default\n";
    for (double u : field)
        out << format_number(u, digits) << '\n';
}

void write_vtk(const SurfaceMesh& mesh, std::span<const double> field, const std::filesystem::path& path,
               std::string_view title)
{
    std::ofstream out = open_for_write(path);
    write_vtk(mesh, field, out, title);
    finish(out, path);
}

void write_csv(const SurfaceMesh& mesh, std::span<const double> field, std::ostream& out)
{
    check_length(mesh, field);
    constexpr int digits = 17;
    out << "vertex,x,y,z,u\n";
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        const Vec3& p = mesh.position(static_cast<Index>(v));
        out << v << ',' << format_number(p.x, digits) << ',' << format_number(p.y, digits) << ','
            << format_number(p.z, digits) << ',' << format_number(field[v], digits) << '\n';
    }
}

void write_csv(const SurfaceMesh& mesh, std::span<const double> field, const std::filesystem::path& path)
{
    std::ofstream out = open_for_write(path);
    write_csv(mesh, field, out);
    finish(out, path);
}

} // namespace decwave
