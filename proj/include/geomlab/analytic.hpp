#pragma once

#include <vector>

#include <Eigen/Core>

#include "geomlab/common.hpp"

namespace geomlab {

// Quadrature sampling of a smooth closed hypersurface in R^{n+1} with exact
// pointwise normals and shape operators. Supports n = 2 and n = 3.
struct AnalyticHypersurface {
    int dim;                     // surface dimension n
    Eigen::MatrixXd points;      // N x (n+1)
    Eigen::MatrixXd normals;     // N x (n+1), unit, outward
    std::vector<Eigen::MatrixXd> frames; // (n+1) x n orthonormal tangent bases
    std::vector<Eigen::MatrixXd> shapes; // n x n symmetric, frame coordinates
    Eigen::VectorXd weights;     // positive quadrature weights, sum == area

    int node_count() const { return static_cast<int>(weights.size()); }
    double total_area() const { return weights.sum(); }
};

// Ellipsoid sum_i x_i^2 / a_i^2 = 1 sampled on a product grid in spherical
// coordinates: Gauss-Legendre in the polar angles, trapezoid in the
// azimuthal one. axes.size() = n + 1 selects the dimension; only n = 2, 3
// are accepted. resolution is the polar node count per angle (>= 4).
AnalyticHypersurface gen_analytic_ellipsoid(const Eigen::VectorXd& axes,
                                            int resolution);

} // namespace geomlab
