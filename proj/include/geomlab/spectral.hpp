#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "geomlab/curvature.hpp"
#include "geomlab/surface.hpp"

namespace geomlab {

// P1 Galerkin discretization of u -> -div(T grad u) against the lumped mass
// inner product. The stiffness rows sum to zero exactly (the constant lies
// in the kernel); trace_integral stores sum_f A_f tr(P T_f P), the face
// quadrature of the coefficient trace, which ties the stiffness to the
// divergence identity at machine precision.
struct GalerkinPair {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::VectorXd mass; // lumped diagonal, sums to the area
    std::string coefficient;
    bool coefficient_positive_definite;
    double trace_integral;
};

// coefficient = nullptr assembles the Laplacian (cotangent weights). For a
// Newton tensor the per-face coefficient is the mean of the three vertex
// tensors lifted to ambient coordinates and projected to the face plane.
GalerkinPair assemble(const Mesh& mesh, const CurvatureField* field,
                      const NewtonTensorField* coefficient);

struct Spectrum {
    Eigen::VectorXd values;     // ascending
    Eigen::MatrixXd vectors;    // mass-orthonormal columns
    Eigen::VectorXd residuals;  // ||K v - lambda M v|| / ||v||_M per pair
    double zero_threshold;      // below this a value counts as kernel
};

// Lowest k eigenpairs of K v = lambda M v by shift-invert block subspace
// iteration with a deterministic seeded start. 1 <= k <= 12.
Spectrum solve_lowest(const GalerkinPair& pair, int k);

// General driver shared with the stability module: lowest eigenpairs of
// (A, diag(mass)). If deflate is given, the iteration is confined to the
// mass-orthogonal complement of that vector. shift is added as
// A + shift * diag(mass) before factorization and subtracted from the
// returned values.
Spectrum lowest_eigenpairs(const Eigen::SparseMatrix<double>& A,
                           const Eigen::VectorXd& mass, int k, double shift,
                           const std::optional<Eigen::VectorXd>& deflate,
                           std::uint64_t seed);

// First eigenvalue above the kernel. Requires the sub-threshold count to be
// exactly one; otherwise throws degenerate_spectrum (disconnected surface).
double lambda1(const Spectrum& spectrum);

// Convenience: solve + extract in one step.
double lambda1(const GalerkinPair& pair);

// Discrete generalized mean curvature vectors H_T = -M^{-1} K X applied to
// the coordinate functions, one row per vertex, plus the worst-case
// tangential alignment diagnostic max |tangential H_T| / |H_T| over
// vertices carrying non-negligible |H_T|.
struct DiscreteMeanCurvature {
    Eigen::MatrixXd vectors;
    double tangential_alignment;
};

DiscreteMeanCurvature discrete_generalized_mean_curvature(
    const GalerkinPair& pair, const Mesh& mesh, const CurvatureField& field);

} // namespace geomlab
