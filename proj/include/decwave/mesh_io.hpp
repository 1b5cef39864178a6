#ifndef DECWAVE_MESH_IO_HPP
#define DECWAVE_MESH_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "decwave/mesh.hpp"

namespace decwave {

enum class MeshFormat { off, obj };

/// Guess the format from a ".off" / ".obj" extension (case-insensitive).
std::optional<MeshFormat> mesh_format_from_path(const std::filesystem::path& path);
std::optional<MeshFormat> parse_mesh_format(std::string_view name);

// Only vertex and triangle records are read; OBJ normals, texture
// coordinates, groups and materials are skipped.
SurfaceMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
SurfaceMesh read_off(std::istream& in);
SurfaceMesh read_obj(std::istream& in);

/// Writes positions with 17 significant digits so a reload is exact.
void write_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path, MeshFormat format);
void write_off(const SurfaceMesh& mesh, std::ostream& out);
void write_obj(const SurfaceMesh& mesh, std::ostream& out);

} // namespace decwave

#endif
