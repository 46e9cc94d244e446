#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "geomlab/analytic.hpp"
#include "geomlab/surface.hpp"

namespace geomlab {

// Elementary symmetric polynomial S_r of the entries; S_0 = 1 and S_r = 0
// for r > size. Computed by the stable one-pass recurrence.
double elementary_symmetric(const Eigen::VectorXd& values, int r);

// Normalized r-th mean curvature H_r = S_r / binom(n, r).
double mean_curvature_ratio(const Eigen::VectorXd& kappa, int r);

// Trace constant of the r-th Newton tensor: tr T_r = c(r) H_r with
// c(r) = (n - r) binom(n, r).
long long c_of_r(int n, int r);

// Pointwise curvature data of a sampled hypersurface. The shape operator is
// stored in the orthonormal tangent frame; the sign convention makes the
// unit sphere's principal curvatures +1 for the outward normal.
struct CurvatureField {
    int dim;                 // surface dimension n
    Eigen::MatrixXd points;  // N x (n+1)
    Eigen::MatrixXd normals; // N x (n+1), outward
    std::vector<Eigen::MatrixXd> frames; // (n+1) x n
    std::vector<Eigen::MatrixXd> shapes; // n x n symmetric
    Eigen::MatrixXd principal;           // N x n, ascending per row
    Eigen::VectorXd weights;             // sum == area

    int count() const { return static_cast<int>(weights.size()); }
    double total_area() const { return weights.sum(); }
};

// Per-vertex shape operator by a weighted two-ring quadric fit in the
// estimated tangent plane, with full first-order metric correction. Throws
// estimation_error when a local fit is rank deficient.
CurvatureField shape_operator(const Mesh& mesh);

// Exact pointwise data copied from the analytic backend.
CurvatureField shape_operator(const AnalyticHypersurface& surf);

// H_r at every sample point.
Eigen::VectorXd higher_mean_curvature(const CurvatureField& field, int r);

// Newton tensor T_r in the same frame as the shape operator:
// T_0 = Id, T_r = S_r Id - B T_{r-1}.
struct NewtonTensorField {
    int order;
    std::vector<Eigen::MatrixXd> tensors;
};

NewtonTensorField newton_tensor(const CurvatureField& field, int r);

// Selector for the divergence-form coefficient: identity or Newton tensor.
struct TensorChoice {
    enum class Kind { identity, newton };
    Kind kind = Kind::identity;
    int order = 0;

    static TensorChoice id() { return {}; }
    static TensorChoice newton(int r) { return {Kind::newton, r}; }
    bool is_identity() const { return kind == Kind::identity; }
    std::string name() const;
};

// Parses "id", "identity", "t<r>" or "newton:<r>".
TensorChoice parse_tensor_choice(const std::string& text);

// tr(S) at every point; S = nullptr means the identity (trace n).
Eigen::VectorXd tensor_trace(const CurvatureField& field,
                             const NewtonTensorField* S);

// Generalized mean curvature vector H_S = -tr(S B) nu, rows per point.
Eigen::MatrixXd generalized_mean_curvature(const CurvatureField& field,
                                           const NewtonTensorField* S);

// Signed scalar -tr(S B), so H_S = value * nu.
Eigen::VectorXd generalized_mean_curvature_scalar(const CurvatureField& field,
                                                  const NewtonTensorField* S);

// Newton inequalities H_r^2 >= H_{r-1} H_{r+1} (always defined) and the
// Maclaurin chain H_1 >= H_2^{1/2} >= ... >= H_n^{1/n} (checked when every
// H_r is positive). max_violation is the worst signed defect, positive
// meaning violated.
struct MaclaurinReport {
    bool newton_ok;
    bool chain_applicable;
    bool chain_ok;
    double max_violation;
};

MaclaurinReport maclaurin_check(const Eigen::VectorXd& kappa, double tol);

} // namespace geomlab
