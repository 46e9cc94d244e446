#include "geomlab/curvature.hpp"

#include <atomic>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "geomlab/common.hpp"

namespace geomlab {

double elementary_symmetric(const Eigen::VectorXd& values, int r) {
    const int n = static_cast<int>(values.size());
    if (r < 0) throw std::invalid_argument("elementary_symmetric: r must be >= 0");
    if (r == 0) return 1.0;
    if (r > n) return 0.0;
    // e[k] accumulates S_k of the prefix processed so far.
    Eigen::VectorXd e = Eigen::VectorXd::Zero(r + 1);
    e[0] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int k = std::min(r, i + 1); k >= 1; --k)
            e[k] += values[i] * e[k - 1];
    return e[r];
}

double mean_curvature_ratio(const Eigen::VectorXd& kappa, int r) {
    const int n = static_cast<int>(kappa.size());
    if (r < 0 || r > n)
        throw std::invalid_argument("mean_curvature_ratio: need 0 <= r <= n");
    return elementary_symmetric(kappa, r) / static_cast<double>(binomial(n, r));
}

long long c_of_r(int n, int r) {
    if (r < 0 || r > n)
        throw std::invalid_argument("c_of_r: need 0 <= r <= n");
    return (n - r) * binomial(n, r);
}

namespace {

void fill_principal(CurvatureField& field) {
    const int n = field.dim;
    field.principal.resize(field.count(), n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    for (int i = 0; i < field.count(); ++i) {
        eig.compute(field.shapes[i], Eigen::EigenvaluesOnly);
        field.principal.row(i) = eig.eigenvalues();
    }
}

} // namespace

CurvatureField shape_operator(const AnalyticHypersurface& surf) {
    CurvatureField field;
    field.dim = surf.dim;
    field.points = surf.points;
    field.normals = surf.normals;
    field.frames = surf.frames;
    field.shapes = surf.shapes;
    field.weights = surf.weights;
    fill_principal(field);
    return field;
}

CurvatureField shape_operator(const Mesh& mesh) {
    const int nv = mesh.vertex_count();
    const Topology topo = build_topology(mesh);

    // Angle-weighted vertex normals seed the local frames.
    std::vector<Eigen::Vector3d> seed_normal(nv, Eigen::Vector3d::Zero());
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& face = mesh.faces[f];
        const Eigen::Vector3d fn = face_normal(mesh, f);
        for (int c = 0; c < 3; ++c) {
            const Eigen::Vector3d& p = mesh.vertices[face[c]];
            const Eigen::Vector3d e1 =
                (mesh.vertices[face[(c + 1) % 3]] - p).normalized();
            const Eigen::Vector3d e2 =
                (mesh.vertices[face[(c + 2) % 3]] - p).normalized();
            const double angle =
                std::acos(std::clamp(e1.dot(e2), -1.0, 1.0));
            seed_normal[face[c]] += angle * fn;
        }
    }

    CurvatureField field;
    field.dim = 2;
    field.points.resize(nv, 3);
    field.normals.resize(nv, 3);
    field.frames.resize(nv);
    field.shapes.resize(nv);
    field.weights = vertex_areas(mesh);
    for (int v = 0; v < nv; ++v) field.points.row(v) = mesh.vertices[v];

    std::atomic<int> failed_vertex{-1};
    parallel_for(nv, [&](std::size_t vi) {
        const int v = static_cast<int>(vi);
        const Eigen::Vector3d nu0 = seed_normal[v].normalized();
        // Arbitrary orthonormal tangent pair for the fitting chart.
        const Eigen::Vector3d ref =
            std::abs(nu0.x()) < 0.9 ? Eigen::Vector3d::UnitX()
                                    : Eigen::Vector3d::UnitY();
        const Eigen::Vector3d t1 = nu0.cross(ref).normalized();
        const Eigen::Vector3d t2 = nu0.cross(t1);

        const auto& nbrs = topo.ring2[v];
        const int rows = static_cast<int>(nbrs.size());
        if (rows < 5) {
            failed_vertex.store(v);
            return;
        }
        // Height fit h = a u^2/2 + b uv + c v^2/2 + d u + e v over the
        // two-ring offsets expressed in the (t1, t2, nu0) chart.
        Eigen::MatrixXd design(rows, 5);
        Eigen::VectorXd height(rows);
        for (int i = 0; i < rows; ++i) {
            const Eigen::Vector3d d = mesh.vertices[nbrs[i]] - mesh.vertices[v];
            const double u = t1.dot(d), w = t2.dot(d);
            design.row(i) << 0.5 * u * u, u * w, 0.5 * w * w, u, w;
            height[i] = nu0.dot(d);
        }
        const Eigen::MatrixXd normal_eq = design.transpose() * design;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(normal_eq);
        const Eigen::VectorXd coeff = ldlt.solve(design.transpose() * height);
        const double residual = (normal_eq * coeff - design.transpose() * height)
                                    .cwiseAbs()
                                    .maxCoeff();
        if (!coeff.allFinite() ||
            residual > 1e-6 * std::max(1.0, height.cwiseAbs().maxCoeff())) {
            failed_vertex.store(v);
            return;
        }

        const Eigen::Vector2d grad(coeff[3], coeff[4]);
        const double w_len = std::sqrt(1.0 + grad.squaredNorm());
        Eigen::Matrix2d hess;
        hess << coeff[0], coeff[1], coeff[1], coeff[2];

        // First fundamental form of the graph and its Cholesky factor.
        const Eigen::Matrix2d metric =
            Eigen::Matrix2d::Identity() + grad * grad.transpose();
        const Eigen::Matrix2d chol = metric.llt().matrixL();
        const Eigen::Matrix2d chol_inv = chol.inverse();
        Eigen::Matrix2d shape =
            -chol_inv * (hess / w_len) * chol_inv.transpose();
        shape = 0.5 * (shape + shape.transpose()).eval();

        // Orthonormal frame spanning the fitted tangent plane, and the
        // fitted unit normal (outward, since <nu, nu0> = 1/W > 0).
        Eigen::Matrix<double, 3, 2> chart;
        chart.col(0) = t1 + coeff[3] * nu0;
        chart.col(1) = t2 + coeff[4] * nu0;
        const Eigen::Matrix<double, 3, 2> frame =
            chart * chol_inv.transpose();
        const Eigen::Vector3d nu =
            (nu0 - coeff[3] * t1 - coeff[4] * t2) / w_len;

        field.normals.row(v) = nu;
        field.frames[v] = frame;
        field.shapes[v] = shape;
    });
    if (failed_vertex.load() >= 0)
        throw estimation_error("shape_operator: rank-deficient quadric fit at vertex " +
                               std::to_string(failed_vertex.load()));

    fill_principal(field);
    return field;
}

Eigen::VectorXd higher_mean_curvature(const CurvatureField& field, int r) {
    const double denom = static_cast<double>(binomial(field.dim, r));
    Eigen::VectorXd out(field.count());
    for (int i = 0; i < field.count(); ++i)
        out[i] = elementary_symmetric(field.principal.row(i), r) / denom;
    return out;
}

NewtonTensorField newton_tensor(const CurvatureField& field, int r) {
    const int n = field.dim;
    if (r < 0 || r > n)
        throw std::invalid_argument("newton_tensor: need 0 <= r <= n");
    NewtonTensorField out;
    out.order = r;
    out.tensors.resize(field.count());
    parallel_for(field.count(), [&](std::size_t i) {
        const Eigen::MatrixXd& b = field.shapes[i];
        Eigen::MatrixXd t = Eigen::MatrixXd::Identity(n, n);
        for (int k = 1; k <= r; ++k) {
            const double sk = elementary_symmetric(field.principal.row(i), k);
            t = (sk * Eigen::MatrixXd::Identity(n, n) - b * t).eval();
            t = (0.5 * (t + t.transpose())).eval();
        }
        out.tensors[i] = std::move(t);
    });
    return out;
}

std::string TensorChoice::name() const {
    return is_identity() ? "id" : "t" + std::to_string(order);
}

TensorChoice parse_tensor_choice(const std::string& text) {
    if (text == "id" || text == "identity") return TensorChoice::id();
    if (text.size() >= 2 && text[0] == 't')
        return TensorChoice::newton(std::stoi(text.substr(1)));
    const std::string prefix = "newton:";
    if (text.rfind(prefix, 0) == 0)
        return TensorChoice::newton(std::stoi(text.substr(prefix.size())));
    throw std::invalid_argument("unknown tensor choice '" + text + "'");
}

Eigen::VectorXd tensor_trace(const CurvatureField& field,
                             const NewtonTensorField* S) {
    Eigen::VectorXd out(field.count());
    if (!S) {
        out.setConstant(static_cast<double>(field.dim));
        return out;
    }
    for (int i = 0; i < field.count(); ++i) out[i] = S->tensors[i].trace();
    return out;
}

Eigen::VectorXd generalized_mean_curvature_scalar(const CurvatureField& field,
                                                  const NewtonTensorField* S) {
    Eigen::VectorXd out(field.count());
    for (int i = 0; i < field.count(); ++i) {
        const Eigen::MatrixXd& b = field.shapes[i];
        out[i] = S ? -(S->tensors[i] * b).trace() : -b.trace();
    }
    return out;
}

Eigen::MatrixXd generalized_mean_curvature(const CurvatureField& field,
                                           const NewtonTensorField* S) {
    const Eigen::VectorXd scale = generalized_mean_curvature_scalar(field, S);
    Eigen::MatrixXd out(field.count(), field.points.cols());
    for (int i = 0; i < field.count(); ++i)
        out.row(i) = scale[i] * field.normals.row(i);
    return out;
}

MaclaurinReport maclaurin_check(const Eigen::VectorXd& kappa, double tol) {
    const int n = static_cast<int>(kappa.size());
    std::vector<double> h(n + 1);
    for (int r = 0; r <= n; ++r) h[r] = mean_curvature_ratio(kappa, r);

    MaclaurinReport report{true, true, true, 0.0};
    double scale = 1e-300;
    for (int r = 0; r <= n; ++r) scale = std::max(scale, h[r] * h[r]);
    for (int r = 1; r < n; ++r) {
        const double defect = h[r - 1] * h[r + 1] - h[r] * h[r];
        report.max_violation = std::max(report.max_violation, defect / scale);
        if (defect > tol * scale) report.newton_ok = false;
    }
    for (int r = 1; r <= n; ++r)
        if (!(h[r] > 0.0)) report.chain_applicable = false;
    if (report.chain_applicable) {
        for (int r = 1; r < n; ++r) {
            const double lhs = std::pow(h[r], 1.0 / r);
            const double rhs = std::pow(h[r + 1], 1.0 / (r + 1));
            const double defect = (rhs - lhs) / std::max(1e-300, std::abs(rhs));
            report.max_violation = std::max(report.max_violation, defect);
            if (defect > tol) report.chain_ok = false;
        }
    }
    return report;
}

} // namespace geomlab
