#include "decwave/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "decwave/errors.hpp"

namespace decwave {

namespace {

std::string lowercase(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Yields whitespace-separated tokens of an OFF file, skipping '#' comments.
class OffTokens {
public:
    explicit OffTokens(std::istream& in) : in_(in) {}

    bool next(std::string& token)
    {
        while (!(line_ >> token)) {
            std::string raw;
            if (!std::getline(in_, raw))
                return false;
            ++line_number_;
            if (auto hash = raw.find('#'); hash != std::string::npos)
                raw.erase(hash);
            line_.clear();
            line_.str(raw);
        }
        return true;
    }

    template <typename T>
    T read(const char* what)
    {
        std::string token;
        if (!next(token))
            fail(std::string("unexpected end of file while reading ") + what);
        std::istringstream ss(token);
        T value{};
        if (!(ss >> value) || !ss.eof())
            fail(std::string("expected ") + what + ", got '" + token + "'");
        return value;
    }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw MeshError("OFF parse error at line " + std::to_string(line_number_) + ": " + msg);
    }

private:
    std::istream& in_;
    std::istringstream line_;
    std::size_t line_number_ = 0;
};

void write_position(std::ostream& out, const Vec3& p)
{
    out << p.x << ' ' << p.y << ' ' << p.z;
}

} // namespace

std::optional<MeshFormat> parse_mesh_format(std::string_view name)
{
    const std::string n = lowercase(name);
    if (n == "off")
        return MeshFormat::off;
    if (n == "obj")
        return MeshFormat::obj;
    return std::nullopt;
}

std::optional<MeshFormat> mesh_format_from_path(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    if (ext.empty())
        return std::nullopt;
    return parse_mesh_format(std::string_view(ext).substr(1));
}

SurfaceMesh read_off(std::istream& in)
{
    OffTokens tok(in);
    std::string header;
    if (!tok.next(header) || header != "OFF")
        tok.fail("missing 'OFF' header");

    const auto nv = tok.read<long long>("vertex count");
    const auto nf = tok.read<long long>("face count");
    tok.read<long long>("edge count");
    if (nv < 0 || nf < 0)
        tok.fail("negative element count");

    std::vector<Vec3> vertices;
    vertices.reserve(static_cast<std::size_t>(nv));
    for (long long i = 0; i < nv; ++i) {
        Vec3 p;
        p.x = tok.read<double>("x coordinate");
        p.y = tok.read<double>("y coordinate");
        p.z = tok.read<double>("z coordinate");
        vertices.push_back(p);
    }

    std::vector<Triangle> triangles;
    triangles.reserve(static_cast<std::size_t>(nf));
    for (long long f = 0; f < nf; ++f) {
        const auto arity = tok.read<long long>("face vertex count");
        if (arity != 3)
            tok.fail("face " + std::to_string(f) + " has " + std::to_string(arity) +
                     " vertices; only triangles are supported");
        Triangle t{};
        for (auto& idx : t) {
            const auto i = tok.read<long long>("vertex index");
            if (i < 0 || i >= nv)
                tok.fail("face " + std::to_string(f) + " vertex index " + std::to_string(i) + " out of range");
            idx = static_cast<Index>(i);
        }
        triangles.push_back(t);
    }
    return SurfaceMesh(std::move(vertices), std::move(triangles));
}

SurfaceMesh read_obj(std::istream& in)
{
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::string raw;
    std::size_t line_number = 0;
    auto fail = [&](const std::string& msg) {
        throw MeshError("OBJ parse error at line " + std::to_string(line_number) + ": " + msg);
    };

    while (std::getline(in, raw)) {
        ++line_number;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream line(raw);
        std::string kind;
        if (!(line >> kind))
            continue;
        if (kind == "v") {
            Vec3 p;
            if (!(line >> p.x >> p.y >> p.z))
                fail("malformed vertex record");
            vertices.push_back(p);
        } else if (kind == "f") {
            std::vector<long long> ids;
            std::string ref;
            while (line >> ref) {
                // "i", "i/t", "i//n", "i/t/n": only the position index matters
                const std::string head = ref.substr(0, ref.find('/'));
                std::size_t used = 0;
                long long i = 0;
                try {
                    i = std::stoll(head, &used);
                } catch (const std::exception&) {
                    fail("malformed face index '" + ref + "'");
                }
                if (used != head.size())
                    fail("malformed face index '" + ref + "'");
                const auto n = static_cast<long long>(vertices.size());
                if (i < 0)
                    i = n + i; // relative index
                else
                    i -= 1;
                if (i < 0 || i >= n)
                    fail("face index '" + ref + "' out of range");
                ids.push_back(i);
            }
            if (ids.size() != 3)
                fail("face has " + std::to_string(ids.size()) + " vertices; only triangles are supported");
            triangles.push_back({static_cast<Index>(ids[0]), static_cast<Index>(ids[1]),
                                 static_cast<Index>(ids[2])});
        }
    }
    if (in.bad())
        throw MeshError("I/O error while reading OBJ data");
    return SurfaceMesh(std::move(vertices), std::move(triangles));
}

SurfaceMesh load_mesh(const std::filesystem::path& path, MeshFormat format)
{
    std::ifstream in(path);
    if (!in)
        throw MeshError("cannot open mesh file '" + path.string() + "'");
    return format == MeshFormat::off ? read_off(in) : read_obj(in);
}

void write_off(const SurfaceMesh& mesh, std::ostream& out)
{
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' ' << mesh.num_edges() << '\n';
    for (const Vec3& p : mesh.vertices()) {
        write_position(out, p);
        out << '\n';
    }
    for (const Triangle& t : mesh.triangles())
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_obj(const SurfaceMesh& mesh, std::ostream& out)
{
    out.precision(std::numeric_limits<double>::max_digits10);
    for (const Vec3& p : mesh.vertices()) {
        out << "v ";
        write_position(out, p);
        out << '\n';
    }
    for (const Triangle& t : mesh.triangles())
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_mesh(const SurfaceMesh& mesh, const std::filesystem::path& path, MeshFormat format)
{
    std::ofstream out(path);
    if (!out)
        throw MeshError("cannot open '" + path.string() + "' for writing");
    if (format == MeshFormat::off)
        write_off(mesh, out);
    else
        write_obj(mesh, out);
    if (!out)
        throw MeshError("I/O error while writing '" + path.string() + "'");
}

} // namespace decwave
