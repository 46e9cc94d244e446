#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geomlab/analysis.hpp"
#include "geomlab/surface.hpp"

namespace testsupport {

// Mesh generation is cheap next to the curvature fit and the eigensolves,
// but several cases share the same SurfaceAnalysis, so those are cached per
// process behind a string key.
inline geomlab::SurfaceAnalysis& cached_analysis(const std::string& key,
                                                 geomlab::Mesh mesh) {
    static std::map<std::string, std::unique_ptr<geomlab::SurfaceAnalysis>> cache;
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<geomlab::SurfaceAnalysis>(
                                    std::move(mesh))).first;
    return *it->second;
}

inline geomlab::SurfaceAnalysis& unit_sphere_ctx(int level = 4) {
    return cached_analysis("sphere" + std::to_string(level),
                           geomlab::gen_icosphere(level, 1.0));
}

inline geomlab::SurfaceAnalysis& ellipsoid_ctx(double t, int level = 4) {
    return cached_analysis("ell" + std::to_string(t) + "@" + std::to_string(level),
                           geomlab::gen_ellipsoid(Eigen::Vector3d(1, 1, 1 + t),
                                                  level));
}

inline geomlab::SurfaceAnalysis& perturbed_ctx(double t, int level = 4) {
    return cached_analysis("pert" + std::to_string(t) + "@" + std::to_string(level),
                           geomlab::gen_perturbed_sphere(level, 4, 7, t));
}

inline geomlab::Mesh translated(geomlab::Mesh mesh, const Eigen::Vector3d& d) {
    for (auto& v : mesh.vertices) v += d;
    return mesh;
}

inline geomlab::Mesh scaled(geomlab::Mesh mesh, double c) {
    for (auto& v : mesh.vertices) v *= c;
    return mesh;
}

// Two unit spheres five radii apart, one index space.
inline geomlab::Mesh two_spheres(int level = 2) {
    geomlab::Mesh a = geomlab::gen_icosphere(level, 1.0);
    geomlab::Mesh b = geomlab::gen_icosphere(level, 1.0);
    int offset = a.vertex_count();
    for (const auto& v : b.vertices)
        a.vertices.push_back(v + Eigen::Vector3d(5, 0, 0));
    for (const auto& f : b.faces)
        a.faces.push_back({f[0] + offset, f[1] + offset, f[2] + offset});
    return a;
}

// Elementary symmetric polynomial by explicit subset enumeration, usable as
// an independent check of the production recurrence for small sizes.
inline double brute_elementary_symmetric(const Eigen::VectorXd& values, int r) {
    int n = static_cast<int>(values.size());
    if (r == 0) return 1.0;
    if (r > n) return 0.0;
    double total = 0.0;
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        double prod = 1.0;
        for (int i : idx) prod *= values(i);
        total += prod;
        int k = r - 1;
        while (k >= 0 && idx[k] == n - r + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
    return total;
}

// Principal curvatures of the spheroid x^2/a^2 + y^2/a^2 + z^2/c^2 = 1 at
// polar angle theta (z = c cos theta), with w^2 = a^2 cos^2 + c^2 sin^2:
// meridional a c / w^3 and azimuthal c / (a w).
inline std::pair<double, double> spheroid_curvatures(double a, double c,
                                                     double cos_theta) {
    double s2 = std::max(0.0, 1.0 - cos_theta * cos_theta);
    double w = std::sqrt(a * a * cos_theta * cos_theta + c * c * s2);
    double km = a * c / (w * w * w);
    double kn = c / (a * w);
    return {std::min(km, kn), std::max(km, kn)};
}

// Closed-form surface area of the spheroid with semi-axes (a, a, c).
inline double spheroid_area(double a, double c) {
    if (std::abs(c - a) < 1e-14 * a) return 4.0 * M_PI * a * a;
    if (c > a) { // prolate
        double e = std::sqrt(1.0 - a * a / (c * c));
        return 2.0 * M_PI * a * a * (1.0 + (c / (a * e)) * std::asin(e));
    }
    double e = std::sqrt(1.0 - c * c / (a * a)); // oblate
    return 2.0 * M_PI * a * a *
           (1.0 + (c * c / (a * a * e)) * std::atanh(e));
}

inline std::vector<Eigen::Vector3d> fibonacci_sphere(int count) {
    std::vector<Eigen::Vector3d> pts(count);
    double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int i = 0; i < count; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / count;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = 2.0 * M_PI * i / golden;
        pts[i] = Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z);
    }
    return pts;
}

inline Eigen::Vector3d closest_point_on_triangle(const Eigen::Vector3d& p,
                                                 const Eigen::Vector3d& a,
                                                 const Eigen::Vector3d& b,
                                                 const Eigen::Vector3d& c) {
    Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) return a;
    Eigen::Vector3d bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) return b;
    Eigen::Vector3d cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) return c;
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));
    double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    Eigen::Vector3d n = ab.cross(ac);
    return p - n * (ap.dot(n) / n.squaredNorm());
}

// Two-sided Hausdorff distance to a centered sphere by brute force: exact
// vertex-to-sphere sup plus a dense point-to-triangle scan, with a
// bounding-sphere reject per face to keep the scan quadratic-ish.
inline double dense_hausdorff_to_sphere(const geomlab::Mesh& mesh,
                                        double radius, int samples) {
    double sup1 = 0.0;
    for (const auto& v : mesh.vertices)
        sup1 = std::max(sup1, std::abs(v.norm() - radius));
    auto pts = fibonacci_sphere(samples);
    for (auto& p : pts) p *= radius;
    std::vector<double> best(pts.size(), 1e300);
    for (const auto& f : mesh.faces) {
        Eigen::Vector3d a = mesh.vertices[f[0]];
        Eigen::Vector3d b = mesh.vertices[f[1]];
        Eigen::Vector3d c = mesh.vertices[f[2]];
        Eigen::Vector3d cen = (a + b + c) / 3.0;
        double rad = std::sqrt(std::max(
            {(a - cen).squaredNorm(), (b - cen).squaredNorm(),
             (c - cen).squaredNorm()}));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double lower = (pts[i] - cen).norm() - rad;
            if (lower > 0 && lower * lower >= best[i]) continue;
            Eigen::Vector3d q = closest_point_on_triangle(pts[i], a, b, c);
            best[i] = std::min(best[i], (pts[i] - q).squaredNorm());
        }
    }
    double sup2 = 0.0;
    for (double d : best) sup2 = std::max(sup2, std::sqrt(d));
    return std::max(sup1, sup2);
}

} // namespace testsupport
