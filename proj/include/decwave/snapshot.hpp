#ifndef DECWAVE_SNAPSHOT_HPP
#define DECWAVE_SNAPSHOT_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "decwave/mesh.hpp"

namespace decwave {

enum class OutputFormat { vtk, csv };

/// "frame_000040.vtk" for step 40.
std::string frame_filename(std::size_t step, OutputFormat format);

/// Legacy ASCII VTK polydata with the field as point scalars "u";
/// numbers carry 9 significant digits.
void write_vtk(const SurfaceMesh& mesh, std::span<const double> field, std::ostream& out,
               std::string_view title = "decwave field");
void write_vtk(const SurfaceMesh& mesh, std::span<const double> field, const std::filesystem::path& path,
               std::string_view title = "decwave field");

/// "vertex,x,y,z,u" rows in vertex order, 17 significant digits.
void write_csv(const SurfaceMesh& mesh, std::span<const double> field, std::ostream& out);
void write_csv(const SurfaceMesh& mesh, std::span<const double> field, const std::filesystem::path& path);

} // namespace decwave

#endif
