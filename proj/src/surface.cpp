#include "geomlab/surface.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include <Eigen/Geometry>

namespace geomlab {

namespace {

Eigen::Vector3d face_cross(const Mesh& mesh, int f) {
    const auto& [i, j, k] = mesh.faces[f];
    return (mesh.vertices[j] - mesh.vertices[i])
        .cross(mesh.vertices[k] - mesh.vertices[i]);
}

} // namespace

double face_area(const Mesh& mesh, int f) { return 0.5 * face_cross(mesh, f).norm(); }

Eigen::Vector3d face_normal(const Mesh& mesh, int f) {
    return face_cross(mesh, f).normalized();
}

double area(const Mesh& mesh) {
    double total = 0.0;
    for (int f = 0; f < mesh.face_count(); ++f) total += face_area(mesh, f);
    return total;
}

double enclosed_volume(const Mesh& mesh) {
    double six_vol = 0.0;
    for (const auto& [i, j, k] : mesh.faces)
        six_vol += mesh.vertices[i].dot(mesh.vertices[j].cross(mesh.vertices[k]));
    return six_vol / 6.0;
}

Eigen::VectorXd vertex_areas(const Mesh& mesh) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.vertex_count());
    for (int f = 0; f < mesh.face_count(); ++f) {
        const double third = face_area(mesh, f) / 3.0;
        for (int v : mesh.faces[f]) w[v] += third;
    }
    return w;
}

Eigen::Vector3d center_of_mass(const Mesh& mesh) {
    const Eigen::VectorXd w = vertex_areas(mesh);
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (int v = 0; v < mesh.vertex_count(); ++v) c += w[v] * mesh.vertices[v];
    return c / w.sum();
}

void validate(const Mesh& mesh) {
    const int nv = mesh.vertex_count();
    if (nv < 4 || mesh.face_count() < 4)
        throw validation_error("mesh too small to bound a volume");
    for (const auto& face : mesh.faces) {
        for (int v : face)
            if (v < 0 || v >= nv) throw validation_error("face index out of range");
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
            throw validation_error("face with repeated vertex");
    }

    // Each undirected edge must occur in exactly two faces, once per direction.
    std::map<std::pair<int, int>, int> directed;
    for (const auto& [i, j, k] : mesh.faces) {
        ++directed[{i, j}];
        ++directed[{j, k}];
        ++directed[{k, i}];
    }
    for (const auto& [edge, count] : directed) {
        if (count != 1)
            throw validation_error("duplicate directed edge; orientation inconsistent");
        auto rev = directed.find({edge.second, edge.first});
        if (rev == directed.end())
            throw validation_error("boundary or non-manifold edge");
    }

    double mean_area = area(mesh) / mesh.face_count();
    for (int f = 0; f < mesh.face_count(); ++f)
        if (face_area(mesh, f) <= 1e-14 * mean_area)
            throw validation_error("degenerate face " + std::to_string(f));

    if (enclosed_volume(mesh) <= 0.0)
        throw validation_error("non-positive enclosed volume; orientation inward?");
}

Topology build_topology(const Mesh& mesh) {
    const int nv = mesh.vertex_count();
    Topology topo;
    topo.vertex_faces.assign(nv, {});
    topo.ring1.assign(nv, {});
    topo.ring2.assign(nv, {});
    for (int f = 0; f < mesh.face_count(); ++f)
        for (int v : mesh.faces[f]) topo.vertex_faces[v].push_back(f);
    for (const auto& [i, j, k] : mesh.faces) {
        topo.ring1[i].push_back(j);
        topo.ring1[i].push_back(k);
        topo.ring1[j].push_back(i);
        topo.ring1[j].push_back(k);
        topo.ring1[k].push_back(i);
        topo.ring1[k].push_back(j);
    }
    for (int v = 0; v < nv; ++v) {
        auto& r1 = topo.ring1[v];
        std::sort(r1.begin(), r1.end());
        r1.erase(std::unique(r1.begin(), r1.end()), r1.end());
    }
    for (int v = 0; v < nv; ++v) {
        std::vector<int> r2 = topo.ring1[v];
        for (int u : topo.ring1[v])
            r2.insert(r2.end(), topo.ring1[u].begin(), topo.ring1[u].end());
        std::sort(r2.begin(), r2.end());
        r2.erase(std::unique(r2.begin(), r2.end()), r2.end());
        r2.erase(std::remove(r2.begin(), r2.end(), v), r2.end());
        topo.ring2[v] = std::move(r2);
    }
    return topo;
}

Mesh gen_icosphere(int level, double radius) {
    if (level < 0 || level > 8)
        throw std::invalid_argument("gen_icosphere: level must be in [0, 8]");
    if (!(radius > 0.0))
        throw std::invalid_argument("gen_icosphere: radius must be positive");

    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    Mesh mesh;
    mesh.vertices = {
        {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1},
    };
    mesh.faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    for (auto& v : mesh.vertices) v.normalize();

    for (int step = 0; step < level; ++step) {
        std::unordered_map<std::uint64_t, int> midpoint;
        auto mid = [&](int a, int b) {
            const std::uint64_t key =
                (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                static_cast<std::uint32_t>(std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int idx = mesh.vertex_count();
            mesh.vertices.push_back(
                (mesh.vertices[a] + mesh.vertices[b]).normalized());
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.faces.size() * 4);
        for (const auto& [a, b, c] : mesh.faces) {
            const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
            next.push_back({a, ab, ca});
            next.push_back({b, bc, ab});
            next.push_back({c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.faces = std::move(next);
    }
    for (auto& v : mesh.vertices) v *= radius;
    return mesh;
}

Mesh gen_ellipsoid(const Eigen::Vector3d& axes, int level) {
    if (!(axes.minCoeff() > 0.0))
        throw std::invalid_argument("gen_ellipsoid: axes must be positive");
    Mesh mesh = gen_icosphere(level, 1.0);
    for (auto& v : mesh.vertices) v = v.cwiseProduct(axes);
    return mesh;
}

namespace {

// Associated Legendre P_l^m(x) for m >= 0, Condon-Shortley phase included.
double assoc_legendre(int l, int m, double x) {
    double pmm = 1.0;
    if (m > 0) {
        const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
        double fact = 1.0;
        for (int i = 1; i <= m; ++i) {
            pmm *= -fact * s;
            fact += 2.0;
        }
    }
    if (l == m) return pmm;
    double pmmp1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

double sh_normalization(int l, int m) {
    double ratio = 1.0;
    for (int i = l - m + 1; i <= l + m; ++i) ratio *= i;
    return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) / ratio);
}

// Deterministic uniform in [0, 1) from raw 64-bit draws; avoids the
// implementation-defined std distributions.
double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace

double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& u) {
    if (l < 0 || std::abs(m) > l)
        throw std::invalid_argument("real_spherical_harmonic: need |m| <= l");
    const double ct = std::clamp(u.z() / u.norm(), -1.0, 1.0);
    const double phi = std::atan2(u.y(), u.x());
    const int ma = std::abs(m);
    const double base = sh_normalization(l, ma) * assoc_legendre(l, ma, ct);
    if (m == 0) return base;
    const double sqrt2 = std::numbers::sqrt2;
    return m > 0 ? sqrt2 * base * std::cos(ma * phi)
                 : sqrt2 * base * std::sin(ma * phi);
}

double RadialProfile::evaluate(const Eigen::Vector3d& u) const {
    double value = 0.0;
    std::size_t idx = 0;
    for (int l = 2; l <= lmax; ++l)
        for (int m = -l; m <= l; ++m)
            value += coefficients[idx++] * real_spherical_harmonic(l, m, u);
    return value;
}

RadialProfile make_radial_profile(int lmax, std::uint64_t seed) {
    if (lmax < 2 || lmax > 8)
        throw std::invalid_argument("make_radial_profile: lmax must be in [2, 8]");
    RadialProfile profile;
    profile.lmax = lmax;
    profile.seed = seed;
    std::mt19937_64 rng(seed);
    for (int l = 2; l <= lmax; ++l) {
        const double attenuation = 1.0 / (1.0 + l * (l + 1.0));
        for (int m = -l; m <= l; ++m) {
            const double u1 = std::max(uniform01(rng()), 0x1.0p-60);
            const double u2 = uniform01(rng());
            const double gauss =
                std::sqrt(-2.0 * std::log(u1)) *
                std::cos(2.0 * std::numbers::pi * u2);
            profile.coefficients.push_back(attenuation * gauss);
        }
    }
    // Max-normalize over a fixed dense direction set.
    const Mesh probe = gen_icosphere(5, 1.0);
    double peak = 0.0;
    for (const auto& v : probe.vertices)
        peak = std::max(peak, std::abs(profile.evaluate(v)));
    if (peak <= 0.0)
        throw estimation_error("make_radial_profile: degenerate profile");
    for (double& c : profile.coefficients) c /= peak;
    return profile;
}

Mesh gen_perturbed_sphere(int level, int lmax, std::uint64_t seed, double t) {
    if (!(t >= 0.0))
        throw std::invalid_argument("gen_perturbed_sphere: amplitude must be >= 0");
    const RadialProfile profile = make_radial_profile(lmax, seed);
    Mesh mesh = gen_icosphere(level, 1.0);
    double min_radius = 1.0;
    for (auto& v : mesh.vertices) {
        const double rho = 1.0 + t * profile.evaluate(v);
        min_radius = std::min(min_radius, rho);
        v *= rho;
    }
    if (min_radius <= 0.5)
        throw std::invalid_argument(
            "gen_perturbed_sphere: amplitude too large, min radius <= 0.5");
    return mesh;
}

namespace {

// Reads the next content line (comments stripped), tracking line numbers.
bool next_content_line(std::istream& in, std::string& line, int& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (!blank) return true;
    }
    return false;
}

// Flips faces within each connected component until orientation is globally
// consistent, then flips components whose signed volume is negative.
void repair_orientation(Mesh& mesh) {
    const int nf = mesh.face_count();
    std::map<std::pair<int, int>, std::vector<int>> edge_faces;
    for (int f = 0; f < nf; ++f) {
        const auto& [i, j, k] = mesh.faces[f];
        edge_faces[{std::min(i, j), std::max(i, j)}].push_back(f);
        edge_faces[{std::min(j, k), std::max(j, k)}].push_back(f);
        edge_faces[{std::min(k, i), std::max(k, i)}].push_back(f);
    }
    for (const auto& [edge, fs] : edge_faces)
        if (fs.size() != 2)
            throw validation_error("boundary or non-manifold edge in OFF input");

    auto has_directed = [&](int f, int a, int b) {
        const auto& [i, j, k] = mesh.faces[f];
        return (i == a && j == b) || (j == a && k == b) || (k == a && i == b);
    };

    std::vector<int> state(nf, 0); // 0 unvisited, 1 kept, 2 flipped
    std::vector<int> component(nf, -1);
    int component_count = 0;
    for (int seed_face = 0; seed_face < nf; ++seed_face) {
        if (state[seed_face] != 0) continue;
        const int comp = component_count++;
        std::queue<int> queue;
        state[seed_face] = 1;
        component[seed_face] = comp;
        queue.push(seed_face);
        while (!queue.empty()) {
            const int f = queue.front();
            queue.pop();
            const auto face = mesh.faces[f];
            const std::array<std::pair<int, int>, 3> edges{{
                {face[0], face[1]}, {face[1], face[2]}, {face[2], face[0]}}};
            for (const auto& [a, b] : edges) {
                const auto& fs = edge_faces[{std::min(a, b), std::max(a, b)}];
                const int g = fs[0] == f ? fs[1] : fs[0];
                // Consistent neighbours traverse the shared edge oppositely.
                const bool needs_flip = has_directed(g, a, b);
                if (state[g] == 0) {
                    if (needs_flip) std::swap(mesh.faces[g][1], mesh.faces[g][2]);
                    state[g] = needs_flip ? 2 : 1;
                    component[g] = comp;
                    queue.push(g);
                } else if (needs_flip) {
                    throw validation_error("non-orientable surface in OFF input");
                }
            }
        }
    }

    std::vector<double> six_vol(component_count, 0.0);
    for (int f = 0; f < nf; ++f) {
        const auto& [i, j, k] = mesh.faces[f];
        six_vol[component[f]] +=
            mesh.vertices[i].dot(mesh.vertices[j].cross(mesh.vertices[k]));
    }
    for (int f = 0; f < nf; ++f)
        if (six_vol[component[f]] < 0.0)
            std::swap(mesh.faces[f][1], mesh.faces[f][2]);
}

} // namespace

Mesh load_off(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path);
    int line_no = 0;
    std::string line;
    if (!next_content_line(in, line, line_no))
        throw parse_error("empty OFF file", line_no);
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF") throw parse_error("missing OFF header", line_no);
    long nv = -1, nf = -1, ne = -1;
    if (!(header >> nv >> nf >> ne)) {
        if (!next_content_line(in, line, line_no))
            throw parse_error("missing element counts", line_no);
        std::istringstream counts(line);
        if (!(counts >> nv >> nf >> ne))
            throw parse_error("malformed element counts", line_no);
    }
    if (nv < 0 || nf < 0)
        throw parse_error("negative element counts", line_no);

    Mesh mesh;
    mesh.vertices.reserve(nv);
    for (long v = 0; v < nv; ++v) {
        if (!next_content_line(in, line, line_no))
            throw parse_error("unexpected end of vertex list", line_no);
        std::istringstream row(line);
        Eigen::Vector3d p;
        if (!(row >> p.x() >> p.y() >> p.z()))
            throw parse_error("malformed vertex", line_no);
        std::string extra;
        if (row >> extra) throw parse_error("trailing tokens after vertex", line_no);
        mesh.vertices.push_back(p);
    }
    mesh.faces.reserve(nf);
    for (long f = 0; f < nf; ++f) {
        if (!next_content_line(in, line, line_no))
            throw parse_error("unexpected end of face list", line_no);
        std::istringstream row(line);
        int arity = 0;
        if (!(row >> arity)) throw parse_error("malformed face", line_no);
        if (arity != 3)
            throw parse_error("only triangle faces are supported", line_no);
        std::array<int, 3> face{};
        if (!(row >> face[0] >> face[1] >> face[2]))
            throw parse_error("malformed face indices", line_no);
        for (int idx : face)
            if (idx < 0 || idx >= nv)
                throw parse_error("face index out of range", line_no);
        mesh.faces.push_back(face);
    }

    repair_orientation(mesh);
    validate(mesh);
    return mesh;
}

void save_off(const Mesh& mesh, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out) throw error("cannot write " + path);
    std::fprintf(out, "OFF\n%d %d 0\n", mesh.vertex_count(), mesh.face_count());
    for (const auto& v : mesh.vertices)
        std::fprintf(out, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    for (const auto& [i, j, k] : mesh.faces)
        std::fprintf(out, "3 %d %d %d\n", i, j, k);
    if (std::fclose(out) != 0) throw error("error closing " + path);
}

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double spec_number(const std::string& value, const std::string& key) {
    std::istringstream in(value);
    double v = 0.0;
    if (!(in >> v) || !(in >> std::ws).eof())
        throw std::invalid_argument("family spec: bad number '" + value +
                                    "' for " + key);
    return v;
}

long long spec_integer(const std::string& value, const std::string& key) {
    std::istringstream in(value);
    long long v = 0;
    if (!(in >> v) || !(in >> std::ws).eof())
        throw std::invalid_argument("family spec: bad integer '" + value +
                                    "' for " + key);
    return v;
}

} // namespace

FamilySpec parse_family_spec_text(const std::string& text) {
    FamilySpec spec;
    bool have_family = false, have_amplitudes = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("family spec: expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "family") {
            if (value != "ellipsoid-sweep" && value != "harmonic-perturbation")
                throw std::invalid_argument("family spec: unknown family '" + value + "'");
            spec.family = value;
            have_family = true;
        } else if (key == "amplitudes") {
            spec.amplitudes.clear();
            std::istringstream list(value);
            std::string item;
            while (std::getline(list, item, ','))
                spec.amplitudes.push_back(spec_number(trim(item), key));
            have_amplitudes = !spec.amplitudes.empty();
        } else if (key == "lmax") {
            spec.lmax = static_cast<int>(spec_integer(value, key));
        } else if (key == "seed") {
            const long long seed = spec_integer(value, key);
            if (seed < 0)
                throw std::invalid_argument("family spec: seed must be "
                                            "nonnegative");
            spec.seed = static_cast<std::uint64_t>(seed);
        } else if (key == "level") {
            spec.level = static_cast<int>(spec_integer(value, key));
        } else {
            throw std::invalid_argument("family spec: unknown key '" + key + "'");
        }
    }
    if (!have_family) throw std::invalid_argument("family spec: missing family");
    if (!have_amplitudes) throw std::invalid_argument("family spec: missing amplitudes");
    for (std::size_t i = 0; i < spec.amplitudes.size(); ++i) {
        if (!(spec.amplitudes[i] > 0.0))
            throw std::invalid_argument("family spec: amplitudes must be positive");
        if (i > 0 && !(spec.amplitudes[i] > spec.amplitudes[i - 1]))
            throw std::invalid_argument("family spec: amplitudes must be strictly increasing");
    }
    return spec;
}

FamilySpec parse_family_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_family_spec_text(buffer.str());
}

Mesh family_member(const FamilySpec& spec, int i) {
    if (i < 0 || i >= static_cast<int>(spec.amplitudes.size()))
        throw std::invalid_argument("family_member: index out of range");
    const double t = spec.amplitudes[i];
    if (spec.family == "ellipsoid-sweep")
        return gen_ellipsoid({1.0, 1.0, 1.0 + t}, spec.level);
    return gen_perturbed_sphere(spec.level, spec.lmax, spec.seed, t);
}

} // namespace geomlab
