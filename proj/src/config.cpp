#include "decwave/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "decwave/errors.hpp"

namespace decwave {

std::string_view to_string(Model model)
{
    switch (model) {
    case Model::wave: return "wave";
    case Model::heat: return "heat";
    case Model::laplace: return "laplace";
    case Model::poisson: return "poisson";
    }
    return "?";
}

namespace {

struct Entry {
    std::string value;
    std::size_t line;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>> known_keys = {
    {"mesh", {"generator", "path", "format", "edge_length", "radius", "subdivisions", "nx", "ny", "spacing"}},
    {"model", {"type", "c", "dt", "steps", "snapshot_every", "constraints", "rhs"}},
    {"source", {"kind", "vertex", "amplitude", "t0", "sigma", "frequency", "injection"}},
    {"initial", {"kind", "vertex", "amplitude", "width", "value"}},
    {"output", {"dir", "format"}},
};

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail_at(std::size_t line, const std::string& msg)
{
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

class Reader {
public:
    Reader(const std::map<std::string, Section>& sections, std::string name)
        : name_(std::move(name))
    {
        if (auto it = sections.find(name_); it != sections.end())
            section_ = &it->second;
    }

    bool has(const std::string& key) const { return section_ && section_->count(key); }

    const Entry* find(const std::string& key) const
    {
        if (!section_)
            return nullptr;
        auto it = section_->find(key);
        return it == section_->end() ? nullptr : &it->second;
    }

    std::optional<std::string> text(const std::string& key) const
    {
        const Entry* e = find(key);
        return e ? std::optional(e->value) : std::nullopt;
    }

    void number(const std::string& key, double& out) const
    {
        if (const Entry* e = find(key))
            out = parse_double(*e, key);
    }

    void integer(const std::string& key, long& out) const
    {
        if (const Entry* e = find(key))
            out = parse_long(*e, key);
    }

    void integer(const std::string& key, int& out) const
    {
        if (const Entry* e = find(key)) {
            const long v = parse_long(*e, key);
            if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
                fail_at(e->line, name_ + "." + key + " is out of range");
            out = static_cast<int>(v);
        }
    }

    void vertex(const std::string& key, Index& out) const
    {
        if (const Entry* e = find(key)) {
            const long v = parse_long(*e, key);
            if (v < 0 || v > static_cast<long>(std::numeric_limits<Index>::max()))
                fail_at(e->line, name_ + "." + key + " must be a non-negative vertex index");
            out = static_cast<Index>(v);
        }
    }

    template <typename Enum>
    void choice(const std::string& key, Enum& out, const std::map<std::string, Enum>& options) const
    {
        const Entry* e = find(key);
        if (!e)
            return;
        auto it = options.find(e->value);
        if (it == options.end()) {
            std::string allowed;
            for (const auto& [k, v] : options)
                allowed += (allowed.empty() ? "" : ", ") + k;
            fail_at(e->line, name_ + "." + key + " = '" + e->value + "' is not one of: " + allowed);
        }
        out = it->second;
    }

    double parse_double(const Entry& e, const std::string& key) const
    {
        const char* begin = e.value.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        if (e.value.empty() || end != begin + e.value.size() || errno == ERANGE || !std::isfinite(v))
            fail_at(e.line, name_ + "." + key + " expects a number, got '" + e.value + "'");
        return v;
    }

    long parse_long(const Entry& e, const std::string& key) const
    {
        const char* begin = e.value.c_str();
        char* end = nullptr;
        errno = 0;
        const long v = std::strtol(begin, &end, 10);
        if (e.value.empty() || end != begin + e.value.size() || errno == ERANGE)
            fail_at(e.line, name_ + "." + key + " expects an integer, got '" + e.value + "'");
        return v;
    }

    std::size_t line(const std::string& key) const
    {
        const Entry* e = find(key);
        return e ? e->line : 0;
    }

private:
    std::string name_;
    const Section* section_ = nullptr;
};

void require(bool ok, std::size_t line, const std::string& msg)
{
    if (!ok)
        fail_at(line, msg);
}

DirichletCondition parse_constraints(const Entry& e)
{
    DirichletCondition cond;
    std::istringstream items(e.value);
    std::string item;
    while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            fail_at(e.line, "constraint '" + item + "' must look like vertex:value");
        const std::string vs = trim(item.substr(0, colon));
        const std::string xs = trim(item.substr(colon + 1));
        char* end = nullptr;
        const long v = std::strtol(vs.c_str(), &end, 10);
        if (vs.empty() || *end != '\0' || v < 0)
            fail_at(e.line, "constraint vertex '" + vs + "' is not a vertex index");
        const double x = std::strtod(xs.c_str(), &end);
        if (xs.empty() || *end != '\0' || !std::isfinite(x))
            fail_at(e.line, "constraint value '" + xs + "' is not a number");
        for (const auto& [existing, value] : cond.constrained)
            if (existing == static_cast<Index>(v))
                fail_at(e.line, "vertex " + vs + " is constrained twice");
        cond.constrained.emplace_back(static_cast<Index>(v), x);
    }
    return cond;
}

} // namespace

SimulationConfig parse_config(std::string_view text)
{
    std::map<std::string, Section> sections;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::string current;
    std::size_t line_number = 0;
    while (std::getline(in, raw)) {
        ++line_number;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail_at(line_number, "malformed section header '" + line + "'");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!known_keys.count(current))
                fail_at(line_number, "unknown section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail_at(line_number, "expected 'key = value', got '" + line + "'");
        if (current.empty())
            fail_at(line_number, "key outside of a [section]");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!known_keys.at(current).count(key))
            fail_at(line_number, "unknown key '" + key + "' in [" + current + "]");
        auto [it, inserted] = sections[current].try_emplace(key, Entry{value, line_number});
        if (!inserted)
            fail_at(line_number, "contradictory keys: " + current + "." + key + " already set on line " +
                                     std::to_string(it->second.line));
    }

    SimulationConfig cfg;

    // [mesh]
    const Reader mesh(sections, "mesh");
    if (!mesh.has("generator") && !mesh.has("path"))
        throw ConfigError("missing required key: [mesh] needs 'generator' or 'path'");
    if (mesh.has("generator") && mesh.has("path"))
        fail_at(mesh.line("path"), "contradictory keys: mesh.generator and mesh.path are both set");
    if (mesh.has("path")) {
        cfg.mesh.path = *mesh.text("path");
        if (auto f = mesh.text("format")) {
            cfg.mesh.format = parse_mesh_format(*f);
            require(cfg.mesh.format.has_value(), mesh.line("format"), "mesh.format must be off or obj");
        } else {
            cfg.mesh.format = mesh_format_from_path(*cfg.mesh.path);
            require(cfg.mesh.format.has_value(), mesh.line("path"),
                    "cannot infer mesh format from '" + cfg.mesh.path->string() + "'; set mesh.format");
        }
        for (const char* k : {"edge_length", "radius", "subdivisions", "nx", "ny", "spacing"})
            if (mesh.has(k))
                cfg.warnings.push_back(std::string("mesh.") + k + " ignored for a mesh file");
    } else {
        MeshGenerator g{};
        mesh.choice("generator", g,
                    {{"tetrahedron", MeshGenerator::tetrahedron},
                     {"icosphere", MeshGenerator::icosphere},
                     {"flat_grid", MeshGenerator::flat_grid}});
        cfg.mesh.generator = g;
        if (mesh.has("format"))
            cfg.warnings.push_back("mesh.format ignored for a generated mesh");
    }
    mesh.number("edge_length", cfg.mesh.edge_length);
    mesh.number("radius", cfg.mesh.radius);
    mesh.integer("subdivisions", cfg.mesh.subdivisions);
    mesh.integer("nx", cfg.mesh.nx);
    mesh.integer("ny", cfg.mesh.ny);
    mesh.number("spacing", cfg.mesh.spacing);
    require(cfg.mesh.edge_length > 0.0, mesh.line("edge_length"), "mesh.edge_length must be positive");
    require(cfg.mesh.radius > 0.0, mesh.line("radius"), "mesh.radius must be positive");
    require(cfg.mesh.subdivisions >= 0 && cfg.mesh.subdivisions <= 7, mesh.line("subdivisions"),
            "mesh.subdivisions must be in [0, 7]");
    require(cfg.mesh.nx >= 2, mesh.line("nx"), "mesh.nx must be at least 2");
    require(cfg.mesh.ny >= 2, mesh.line("ny"), "mesh.ny must be at least 2");
    require(cfg.mesh.spacing > 0.0, mesh.line("spacing"), "mesh.spacing must be positive");

    // [model]
    const Reader model(sections, "model");
    if (!model.has("type"))
        throw ConfigError("missing required key: [model] type");
    const std::string type = *model.text("type");
    if (type == "nonlinear" || type == "dispersive")
        fail_at(model.line("type"), "unsupported model '" + type + "'");
    model.choice("type", cfg.model,
                 {{"wave", Model::wave}, {"heat", Model::heat}, {"laplace", Model::laplace},
                  {"poisson", Model::poisson}});
    model.number("c", cfg.c);
    require(cfg.c > 0.0, model.line("c"), "model.c must be positive");
    if (auto dt = model.text("dt"); dt && *dt != "auto") {
        double value = 0.0;
        model.number("dt", value);
        require(value > 0.0, model.line("dt"), "model.dt must be positive or 'auto'");
        cfg.dt = value;
    }
    model.integer("steps", cfg.steps);
    require(cfg.steps >= 1, model.line("steps"), "model.steps must be at least 1");
    model.integer("snapshot_every", cfg.snapshot_every);
    require(cfg.snapshot_every >= 1, model.line("snapshot_every"), "model.snapshot_every must be at least 1");
    if (const Entry* e = model.find("constraints"))
        cfg.constraints = parse_constraints(*e);
    model.number("rhs", cfg.rhs);

    const bool time_dependent = cfg.model == Model::wave || cfg.model == Model::heat;
    if (time_dependent && !cfg.constraints.constrained.empty())
        cfg.warnings.push_back("constraints ignored for " + std::string(to_string(cfg.model)));
    if (cfg.model != Model::poisson && model.has("rhs"))
        cfg.warnings.push_back("rhs ignored for " + std::string(to_string(cfg.model)));
    if (!time_dependent)
        for (const char* k : {"dt", "steps", "snapshot_every"})
            if (model.has(k))
                cfg.warnings.push_back(std::string("model.") + k + " ignored for " + std::string(to_string(cfg.model)));

    // [source]
    const Reader source(sections, "source");
    source.choice("kind", cfg.source.kind,
                  {{"none", SourceKind::none}, {"gaussian_pulse", SourceKind::gaussian_pulse},
                   {"sine", SourceKind::sine}});
    if (cfg.source.kind == SourceKind::gaussian_pulse) {
        cfg.source.width = 0.1;
        cfg.source.center_time = 0.4;
    }
    source.vertex("vertex", cfg.source.vertex);
    source.number("amplitude", cfg.source.amplitude);
    source.number("t0", cfg.source.center_time);
    source.number("sigma", cfg.source.width);
    source.number("frequency", cfg.source.frequency);
    source.choice("injection", cfg.source.injection, {{"hard", Injection::hard}, {"additive", Injection::additive}});
    require(cfg.source.width > 0.0, source.line("sigma"), "source.sigma must be positive");
    require(cfg.source.frequency >= 0.0, source.line("frequency"), "source.frequency must be non-negative");
    if (!time_dependent && cfg.source.kind != SourceKind::none)
        cfg.warnings.push_back("source ignored for " + std::string(to_string(cfg.model)));

    // [initial]
    const Reader initial(sections, "initial");
    initial.choice("kind", cfg.initial.kind,
                   {{"zero", InitialKind::zero}, {"gaussian_bump", InitialKind::gaussian_bump},
                    {"constant", InitialKind::constant}, {"random", InitialKind::random}});
    initial.vertex("vertex", cfg.initial.vertex);
    initial.number("amplitude", cfg.initial.amplitude);
    initial.number("width", cfg.initial.width);
    initial.number("value", cfg.initial.value);
    require(cfg.initial.width > 0.0, initial.line("width"), "initial.width must be positive");
    if (!time_dependent && sections.count("initial"))
        cfg.warnings.push_back("initial condition ignored for " + std::string(to_string(cfg.model)));

    // [output]
    const Reader output(sections, "output");
    if (auto dir = output.text("dir")) {
        require(!dir->empty(), output.line("dir"), "output.dir must not be empty");
        cfg.output_dir = *dir;
    }
    output.choice("format", cfg.output_format, {{"vtk", OutputFormat::vtk}, {"csv", OutputFormat::csv}});

    return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    SimulationConfig cfg = parse_config(text.str());
    // relative mesh paths are resolved against the config file's directory
    if (cfg.mesh.path && cfg.mesh.path->is_relative())
        cfg.mesh.path = path.parent_path() / *cfg.mesh.path;
    return cfg;
}

SurfaceMesh build_mesh(const MeshSpec& spec)
{
    if (spec.path)
        return load_mesh(*spec.path, spec.format.value_or(MeshFormat::off));
    switch (spec.generator.value_or(MeshGenerator::icosphere)) {
    case MeshGenerator::tetrahedron:
        return generate_tetrahedron(spec.edge_length);
    case MeshGenerator::icosphere:
        return generate_icosphere(spec.radius, spec.subdivisions);
    case MeshGenerator::flat_grid:
        return generate_flat_grid(spec.nx, spec.ny, spec.spacing);
    }
    throw ConfigError("no mesh specified");
}

std::vector<double> initial_field(const InitialCondition& initial, const SurfaceMesh& mesh, std::uint64_t seed)
{
    const std::size_t n = mesh.num_vertices();
    std::vector<double> u(n, 0.0);
    switch (initial.kind) {
    case InitialKind::zero:
        break;
    case InitialKind::constant:
        std::fill(u.begin(), u.end(), initial.value);
        break;
    case InitialKind::gaussian_bump: {
        if (initial.vertex >= n)
            throw ConfigError("initial.vertex " + std::to_string(initial.vertex) + " out of range (mesh has " +
                              std::to_string(n) + " vertices)");
        const Vec3& centre = mesh.position(initial.vertex);
        for (std::size_t v = 0; v < n; ++v) {
            const double d = distance(mesh.position(static_cast<Index>(v)), centre) / initial.width;
            u[v] = initial.amplitude * std::exp(-0.5 * d * d);
        }
        break;
    }
    case InitialKind::random: {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-initial.amplitude, initial.amplitude);
        for (double& x : u)
            x = dist(rng);
        break;
    }
    }
    return u;
}

} // namespace decwave
