#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "geomlab/common.hpp"

namespace geomlab {

// Closed oriented triangle mesh embedded in R^3. Faces are CCW as seen from
// outside; validate() checks that and the rest of the structural contract.
struct Mesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
};

// Structural checks: indices in range, every edge shared by exactly two
// faces with opposite directions, no degenerate face (area > 1e-14 x mean),
// positive enclosed volume. Throws validation_error.
void validate(const Mesh& mesh);

double area(const Mesh& mesh);

// Signed volume by the divergence theorem; positive for outward orientation.
double enclosed_volume(const Mesh& mesh);

double face_area(const Mesh& mesh, int f);

Eigen::Vector3d face_normal(const Mesh& mesh, int f);

// Lumped vertex areas: one third of incident face areas. Sums to area().
Eigen::VectorXd vertex_areas(const Mesh& mesh);

// Area-weighted mean of vertex positions under the lumped weights.
Eigen::Vector3d center_of_mass(const Mesh& mesh);

// Vertex adjacency derived from faces. ring1[v] lists neighbours of v;
// ring2[v] additionally includes neighbours of neighbours (v excluded).
struct Topology {
    std::vector<std::vector<int>> vertex_faces;
    std::vector<std::vector<int>> ring1;
    std::vector<std::vector<int>> ring2;
};

Topology build_topology(const Mesh& mesh);

// Geodesic sphere: subdivided icosahedron projected to radius. level in
// [0, 8]; vertex count 10 * 4^level + 2.
Mesh gen_icosphere(int level, double radius);

// Icosphere of the given level scaled componentwise by axes.
Mesh gen_ellipsoid(const Eigen::Vector3d& axes, int level);

// Radial graph over the unit icosphere: X(u) = (1 + t * phi(u)) * u where
// phi is a seeded band-limited combination of real spherical harmonics of
// degrees 2..lmax with max-norm 1. Rejects t for which min radius <= 0.5.
Mesh gen_perturbed_sphere(int level, int lmax, std::uint64_t seed, double t);

// Real spherical harmonic basis value at unit direction u; l >= 0, |m| <= l.
double real_spherical_harmonic(int l, int m, const Eigen::Vector3d& u);

// The seeded radial profile used by gen_perturbed_sphere, max-normalized.
// Exposed so callers can evaluate the same phi off-mesh.
struct RadialProfile {
    int lmax;
    std::uint64_t seed;
    std::vector<double> coefficients; // packed (l, m), l = 2..lmax, m = -l..l
    double evaluate(const Eigen::Vector3d& u) const;
};

RadialProfile make_radial_profile(int lmax, std::uint64_t seed);

// OFF I/O. save_off writes 17 significant digits so load(save(m)) is
// bit-identical. load_off repairs orientation by propagation from the first
// face and flips globally if the enclosed volume comes out negative; it
// throws parse_error for malformed input and validation_error for
// non-orientable or otherwise invalid geometry.
Mesh load_off(const std::string& path);
void save_off(const Mesh& mesh, const std::string& path);

// One-parameter surface family used by the sweep drivers.
struct FamilySpec {
    std::string family;             // "ellipsoid-sweep" | "harmonic-perturbation"
    std::vector<double> amplitudes; // strictly positive, strictly increasing
    int lmax = 4;                   // harmonic families only
    std::uint64_t seed = 7;
    int level = 4;
};

// Parses key=value lines: family, amplitudes (comma separated), lmax, seed,
// level. '#' starts a comment. Unknown keys are an error.
FamilySpec parse_family_spec(const std::string& path);

FamilySpec parse_family_spec_text(const std::string& text);

// Instantiates member i of the family.
Mesh family_member(const FamilySpec& spec, int i);

} // namespace geomlab
