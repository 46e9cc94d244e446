#pragma once

#include <vector>

#include <Eigen/Core>

#include "geomlab/curvature.hpp"
#include "geomlab/spectral.hpp"
#include "geomlab/surface.hpp"

namespace geomlab {

// Volume-normalized L^p norm ((1/V) sum w |f|^p)^{1/p} with V = sum w.
// p >= 1 or infinity (max norm). Fractional p is allowed.
double lp_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights,
               double p);

// Same, applied to the row-wise Euclidean norms of a vector field.
double lp_norm_rows(const Eigen::MatrixXd& field, const Eigen::VectorXd& weights,
                    double p);

// Lumped-weight mean of the sample points.
Eigen::VectorXd weighted_center(const CurvatureField& field);

// Residuals of the integral identity int(<X, H_S> + tr S) = 0, evaluated by
// two independent routes and reported relative to (1/V) |int tr S|:
//  - weak: the stiffness quadratic form against the coordinate functions,
//    compared with the pair's face-consistent trace integral;
//  - algebraic: lumped vertex quadrature of <X, -tr(S B) nu> + tr S.
// The pair must be assembled with the same coefficient S.
struct HsiungMinkowski {
    double weak_residual;
    double algebraic_residual;
};

HsiungMinkowski hsiung_minkowski_residual(const Mesh& mesh,
                                          const CurvatureField& field,
                                          const GalerkinPair& pair,
                                          const NewtonTensorField* S);

// Tangential component of the recentered position field,
// X^T = X - <X, nu> nu with X taken relative to the weighted center.
struct TangentialField {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd center;
    double l2;   // ||X^T||_2, volume normalized
    double linf; // max pointwise |X^T|
};

TangentialField tangential_part(const CurvatureField& field);

// max over samples of | |X - center| - radius |.
double radial_deviation(const CurvatureField& field,
                        const Eigen::VectorXd& center, double radius);

// Two-sided Hausdorff distance between the mesh and the round sphere
// S(center, radius): vertex-to-sphere plus sampled sphere-to-triangle.
double hausdorff_to_sphere(const Mesh& mesh, const Eigen::Vector3d& center,
                           double radius);

// Unnormalized Michael-Simon quotient for a positive P1 field f on a mesh:
// (int f^{n/(n-1)})^{(n-1)/n} / (int |grad f| + int |H| f), with the
// gradient integrated per face and the rest by lumped vertex quadrature.
double sobolev_ratio(const Mesh& mesh, const CurvatureField& field,
                     const Eigen::VectorXd& f);

// Least-squares line through (log x, log y) over the pairs with x inside
// (lo, hi); used points with y <= 0 are dropped. used < 2 leaves the line
// at zero.
struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;
    int used = 0;
};

PowerLawFit fit_power_law(const std::vector<double>& x,
                          const std::vector<double>& y, double lo, double hi);

} // namespace geomlab
