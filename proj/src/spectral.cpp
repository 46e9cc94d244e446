#include "geomlab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <Eigen/SparseCholesky>

#include "geomlab/common.hpp"

namespace geomlab {

namespace {

constexpr std::uint64_t kSolverSeed = 0x5EED;

Eigen::Matrix3d ambient_tensor(const CurvatureField& field,
                               const NewtonTensorField& coeff, int v) {
    const Eigen::Matrix<double, 3, 2> frame = field.frames[v];
    return frame * coeff.tensors[v] * frame.transpose();
}

} // namespace

GalerkinPair assemble(const Mesh& mesh, const CurvatureField* field,
                      const NewtonTensorField* coefficient) {
    if (coefficient && !field)
        throw std::invalid_argument("assemble: tensor coefficient needs a curvature field");
    if (field && field->count() != mesh.vertex_count())
        throw std::invalid_argument("assemble: field/mesh size mismatch");

    const int nv = mesh.vertex_count();
    GalerkinPair pair;
    pair.coefficient = coefficient ? "t" + std::to_string(coefficient->order) : "id";
    pair.mass = vertex_areas(mesh);
    pair.trace_integral = 0.0;

    bool spd = true;
    if (coefficient) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
        for (const auto& t : coefficient->tensors) {
            eig.compute(t, Eigen::EigenvaluesOnly);
            if (!(eig.eigenvalues().minCoeff() > 0.0)) {
                spd = false;
                break;
            }
        }
    }
    pair.coefficient_positive_definite = spd;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(mesh.face_count() * 9);
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& face = mesh.faces[f];
        const Eigen::Vector3d cross =
            (mesh.vertices[face[1]] - mesh.vertices[face[0]])
                .cross(mesh.vertices[face[2]] - mesh.vertices[face[0]]);
        const double af = 0.5 * cross.norm();
        const Eigen::Vector3d nf = cross.normalized();

        // In-plane P1 gradients: grad phi_a is the rotated opposite edge.
        Eigen::Matrix3d grads;
        for (int c = 0; c < 3; ++c) {
            const Eigen::Vector3d opposite =
                mesh.vertices[face[(c + 2) % 3]] - mesh.vertices[face[(c + 1) % 3]];
            grads.col(c) = nf.cross(opposite) / (2.0 * af);
        }

        Eigen::Matrix3d tensor = Eigen::Matrix3d::Identity();
        if (coefficient) {
            tensor = (ambient_tensor(*field, *coefficient, face[0]) +
                      ambient_tensor(*field, *coefficient, face[1]) +
                      ambient_tensor(*field, *coefficient, face[2])) /
                     3.0;
        }
        // Trace of the in-plane restriction of the coefficient.
        pair.trace_integral +=
            af * (tensor.trace() - nf.dot(tensor * nf));

        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                triplets.emplace_back(
                    face[a], face[b],
                    af * grads.col(a).dot(tensor * grads.col(b)));
    }
    pair.stiffness.resize(nv, nv);
    pair.stiffness.setFromTriplets(triplets.begin(), triplets.end());
    pair.stiffness.makeCompressed();
    return pair;
}

namespace {

double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

Eigen::MatrixXd gaussian_block(int rows, int cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd block(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double u1 = std::max(uniform01(rng()), 0x1.0p-60);
            const double u2 = uniform01(rng());
            block(i, j) = std::sqrt(-2.0 * std::log(u1)) *
                          std::cos(2.0 * std::numbers::pi * u2);
        }
    return block;
}

} // namespace

Spectrum lowest_eigenpairs(const Eigen::SparseMatrix<double>& A,
                           const Eigen::VectorXd& mass, int k, double shift,
                           const std::optional<Eigen::VectorXd>& deflate,
                           std::uint64_t seed) {
    const int nv = static_cast<int>(A.rows());
    if (k < 1 || k > 12)
        throw std::invalid_argument("lowest_eigenpairs: need 1 <= k <= 12");
    if (nv < k + 2) throw std::invalid_argument("lowest_eigenpairs: matrix too small");
    const int m = std::min(nv - 1, std::max(2 * k, k + 6));

    Eigen::SparseMatrix<double> shifted = A;
    if (shift != 0.0) {
        Eigen::SparseMatrix<double> diag(nv, nv);
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(nv);
        for (int i = 0; i < nv; ++i) trip.emplace_back(i, i, shift * mass[i]);
        diag.setFromTriplets(trip.begin(), trip.end());
        shifted += diag;
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
    if (factor.info() != Eigen::Success)
        throw solver_error("lowest_eigenpairs: factorization failed");

    const double deflate_msq =
        deflate ? deflate->dot(mass.cwiseProduct(*deflate)) : 0.0;
    auto project = [&](Eigen::MatrixXd& block) {
        if (!deflate) return;
        for (int j = 0; j < block.cols(); ++j) {
            const double c =
                deflate->dot(mass.cwiseProduct(block.col(j))) / deflate_msq;
            block.col(j) -= c * (*deflate);
        }
    };

    // Mass-orthonormalization by modified Gram-Schmidt, two passes.
    auto orthonormalize = [&](Eigen::MatrixXd& block) {
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < block.cols(); ++j) {
                for (int i = 0; i < j; ++i) {
                    const double c =
                        block.col(i).dot(mass.cwiseProduct(block.col(j)));
                    block.col(j) -= c * block.col(i);
                }
                const double norm = std::sqrt(
                    block.col(j).dot(mass.cwiseProduct(block.col(j))));
                if (!(norm > 1e-290))
                    throw solver_error("lowest_eigenpairs: subspace collapsed");
                block.col(j) /= norm;
            }
    };

    Eigen::MatrixXd basis = gaussian_block(nv, m, seed);
    project(basis);
    orthonormalize(basis);

    const double diag_scale = [&] {
        double s = 0.0;
        for (int i = 0; i < nv; ++i) s = std::max(s, std::abs(A.coeff(i, i)));
        return std::max(s, 1e-300);
    }();

    Eigen::VectorXd theta;
    Eigen::VectorXd residuals(k);
    constexpr int max_iterations = 800;
    bool converged = false;
    for (int iter = 0; iter < max_iterations && !converged; ++iter) {
        Eigen::MatrixXd rhs = mass.asDiagonal() * basis;
        basis = factor.solve(rhs);
        project(basis);
        orthonormalize(basis);

        const Eigen::MatrixXd applied = A.selfadjointView<Eigen::Lower>() * basis;
        const Eigen::MatrixXd small = basis.transpose() * applied;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            0.5 * (small + small.transpose()));
        basis = (basis * eig.eigenvectors()).eval();
        theta = eig.eigenvalues();

        converged = true;
        const Eigen::MatrixXd post = A.selfadjointView<Eigen::Lower>() * basis;
        for (int i = 0; i < k; ++i) {
            const Eigen::VectorXd resid =
                post.col(i) - theta[i] * mass.cwiseProduct(basis.col(i));
            residuals[i] = resid.norm();
            const double denom =
                diag_scale * basis.col(i).norm() +
                std::abs(theta[i]) * mass.cwiseProduct(basis.col(i)).norm();
            if (residuals[i] > 1e-13 * denom) converged = false;
        }
    }
    if (!converged) {
        for (int i = 0; i < k; ++i) {
            const double denom = diag_scale * basis.col(i).norm() + 1e-300;
            if (residuals[i] > 1e-9 * denom)
                throw solver_error("lowest_eigenpairs: residual stalled above target");
        }
    }

    Spectrum spectrum;
    spectrum.values = theta.head(k);
    spectrum.vectors = basis.leftCols(k);
    spectrum.residuals = residuals;
    spectrum.zero_threshold = 0.0;
    return spectrum;
}

Spectrum solve_lowest(const GalerkinPair& pair, int k) {
    const double lambda_ref =
        pair.stiffness.diagonal().sum() / pair.mass.sum();
    const double shift = 1e-4 * std::max(std::abs(lambda_ref), 1e-12);
    Spectrum spectrum = lowest_eigenpairs(pair.stiffness, pair.mass, k, shift,
                                          std::nullopt, kSolverSeed);
    spectrum.zero_threshold = 1e-6 * std::abs(lambda_ref);
    return spectrum;
}

double lambda1(const Spectrum& spectrum) {
    int below = 0;
    for (int i = 0; i < spectrum.values.size(); ++i)
        if (spectrum.values[i] < spectrum.zero_threshold) ++below;
    if (below != 1)
        throw degenerate_spectrum(
            "lambda1: kernel dimension " + std::to_string(below) +
            " (disconnected surface or missing kernel)");
    for (int i = 0; i < spectrum.values.size(); ++i)
        if (spectrum.values[i] >= spectrum.zero_threshold)
            return spectrum.values[i];
    throw degenerate_spectrum("lambda1: no eigenvalue above the kernel threshold");
}

double lambda1(const GalerkinPair& pair) {
    return lambda1(solve_lowest(pair, 6));
}

DiscreteMeanCurvature discrete_generalized_mean_curvature(
    const GalerkinPair& pair, const Mesh& mesh, const CurvatureField& field) {
    const int nv = mesh.vertex_count();
    Eigen::MatrixXd coords(nv, 3);
    for (int v = 0; v < nv; ++v) coords.row(v) = mesh.vertices[v];

    DiscreteMeanCurvature out;
    out.vectors = -(pair.stiffness.selfadjointView<Eigen::Lower>() * coords);
    out.vectors.array().colwise() /= pair.mass.array();

    const double peak = out.vectors.rowwise().norm().maxCoeff();
    double align = 0.0;
    for (int v = 0; v < nv; ++v) {
        const Eigen::Vector3d h = out.vectors.row(v);
        if (h.norm() <= 1e-12 * peak) continue;
        const Eigen::Vector3d nu = field.normals.row(v);
        const Eigen::Vector3d tangential = h - h.dot(nu) * nu;
        align = std::max(align, tangential.norm() / h.norm());
    }
    out.tangential_alignment = align;
    return out;
}

} // namespace geomlab
