#include "geomlab/calculus.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Geometry>

namespace geomlab {

double lp_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights,
               double p) {
    if (values.size() != weights.size())
        throw std::invalid_argument("lp_norm: size mismatch");
    if (std::isinf(p)) return values.cwiseAbs().maxCoeff();
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: need p >= 1");
    const double volume = weights.sum();
    const double sum =
        (weights.array() * values.array().abs().pow(p)).sum();
    return std::pow(sum / volume, 1.0 / p);
}

double lp_norm_rows(const Eigen::MatrixXd& field, const Eigen::VectorXd& weights,
                    double p) {
    return lp_norm(field.rowwise().norm(), weights, p);
}

Eigen::VectorXd weighted_center(const CurvatureField& field) {
    return field.points.transpose() * field.weights / field.weights.sum();
}

HsiungMinkowski hsiung_minkowski_residual(const Mesh& mesh,
                                          const CurvatureField& field,
                                          const GalerkinPair& pair,
                                          const NewtonTensorField* S) {
    const std::string want = S ? "t" + std::to_string(S->order) : "id";
    if (pair.coefficient != want)
        throw std::invalid_argument(
            "hsiung_minkowski_residual: pair coefficient mismatch");

    const int nv = mesh.vertex_count();
    Eigen::MatrixXd coords(nv, 3);
    for (int v = 0; v < nv; ++v) coords.row(v) = mesh.vertices[v];

    double quadratic = 0.0;
    for (int c = 0; c < 3; ++c)
        quadratic += coords.col(c).dot(
            pair.stiffness.selfadjointView<Eigen::Lower>() * coords.col(c));

    HsiungMinkowski out;
    const double scale = std::abs(pair.trace_integral);
    // int <X, H_S> in weak form is minus the quadratic form.
    out.weak_residual = std::abs(pair.trace_integral - quadratic) / scale;

    const Eigen::VectorXd hs = generalized_mean_curvature_scalar(field, S);
    const Eigen::VectorXd tr = tensor_trace(field, S);
    double pairing = 0.0;
    for (int v = 0; v < nv; ++v) {
        const double xdotnu = field.points.row(v).dot(field.normals.row(v));
        pairing += field.weights[v] * (hs[v] * xdotnu + tr[v]);
    }
    const double tr_integral = field.weights.dot(tr);
    out.algebraic_residual = std::abs(pairing) / std::abs(tr_integral);
    return out;
}

TangentialField tangential_part(const CurvatureField& field) {
    TangentialField out;
    out.center = weighted_center(field);
    out.vectors.resize(field.count(), field.points.cols());
    double linf = 0.0;
    for (int i = 0; i < field.count(); ++i) {
        const Eigen::VectorXd x = field.points.row(i).transpose() - out.center;
        const Eigen::VectorXd nu = field.normals.row(i);
        out.vectors.row(i) = x - x.dot(nu) * nu;
        linf = std::max(linf, out.vectors.row(i).norm());
    }
    out.l2 = lp_norm_rows(out.vectors, field.weights, 2.0);
    out.linf = linf;
    return out;
}

double radial_deviation(const CurvatureField& field,
                        const Eigen::VectorXd& center, double radius) {
    double dev = 0.0;
    for (int i = 0; i < field.count(); ++i)
        dev = std::max(dev, std::abs((field.points.row(i).transpose() - center)
                                         .norm() -
                                     radius));
    return dev;
}

namespace {

// Closest-point distance from p to triangle (a, b, c).
double point_triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                               const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
    const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();
    const Eigen::Vector3d bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return bp.norm();
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0)
        return (ap - (d1 / (d1 - d3)) * ab).norm();
    const Eigen::Vector3d cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return cp.norm();
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0)
        return (ap - (d2 / (d2 - d6)) * ac).norm();
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (bp - w * (c - b)).norm();
    }
    const double denom = 1.0 / (va + vb + vc);
    const Eigen::Vector3d closest =
        a + ab * (vb * denom) + ac * (vc * denom);
    return (p - closest).norm();
}

} // namespace

double hausdorff_to_sphere(const Mesh& mesh, const Eigen::Vector3d& center,
                           double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("hausdorff_to_sphere: radius must be positive");
    double mesh_to_sphere = 0.0;
    for (const auto& v : mesh.vertices)
        mesh_to_sphere =
            std::max(mesh_to_sphere, std::abs((v - center).norm() - radius));

    // Sample the sphere about as finely as the mesh is resolved.
    double edge_sum = 0.0;
    long edge_count = 0;
    for (const auto& [i, j, k] : mesh.faces) {
        edge_sum += (mesh.vertices[i] - mesh.vertices[j]).norm() +
                    (mesh.vertices[j] - mesh.vertices[k]).norm() +
                    (mesh.vertices[k] - mesh.vertices[i]).norm();
        edge_count += 3;
    }
    const double mean_edge = edge_sum / static_cast<double>(edge_count);
    int level = 0;
    // Base icosahedron edge length is about 1.05 on the unit sphere.
    while (level < 7 && radius * 1.0515 / std::exp2(level) > 0.5 * mean_edge)
        ++level;
    const Mesh probe = gen_icosphere(level, radius);

    double sphere_to_mesh = 0.0;
    Eigen::VectorXd best(probe.vertex_count());
    parallel_for(probe.vertex_count(), [&](std::size_t s) {
        const Eigen::Vector3d p = probe.vertices[s] + center;
        double d = std::numeric_limits<double>::infinity();
        for (const auto& [i, j, k] : mesh.faces)
            d = std::min(d, point_triangle_distance(p, mesh.vertices[i],
                                                    mesh.vertices[j],
                                                    mesh.vertices[k]));
        best[s] = d;
    });
    sphere_to_mesh = best.maxCoeff();
    return std::max(mesh_to_sphere, sphere_to_mesh);
}

double sobolev_ratio(const Mesh& mesh, const CurvatureField& field,
                     const Eigen::VectorXd& f) {
    if (f.size() != mesh.vertex_count())
        throw std::invalid_argument("sobolev_ratio: field size mismatch");
    if (!(f.minCoeff() > 0.0))
        throw std::invalid_argument("sobolev_ratio: field must be positive");

    const Eigen::VectorXd w = vertex_areas(mesh);
    // n = 2: exponent n/(n-1) = 2, outer power 1/2.
    const double lhs = std::sqrt((w.array() * f.array().square()).sum());

    double grad_integral = 0.0;
    for (int fi = 0; fi < mesh.face_count(); ++fi) {
        const auto& face = mesh.faces[fi];
        const Eigen::Vector3d cross =
            (mesh.vertices[face[1]] - mesh.vertices[face[0]])
                .cross(mesh.vertices[face[2]] - mesh.vertices[face[0]]);
        const double af = 0.5 * cross.norm();
        const Eigen::Vector3d nf = cross.normalized();
        Eigen::Vector3d grad = Eigen::Vector3d::Zero();
        for (int c = 0; c < 3; ++c) {
            const Eigen::Vector3d opposite =
                mesh.vertices[face[(c + 2) % 3]] - mesh.vertices[face[(c + 1) % 3]];
            grad += f[face[c]] * nf.cross(opposite) / (2.0 * af);
        }
        grad_integral += af * grad.norm();
    }

    const Eigen::VectorXd h1 = higher_mean_curvature(field, 1);
    const double curvature_integral =
        (w.array() * h1.array().abs() * f.array()).sum();
    return lhs / (grad_integral + curvature_integral);
}

PowerLawFit fit_power_law(const std::vector<double>& x,
                          const std::vector<double>& y, double lo, double hi) {
    if (x.size() != y.size())
        throw std::invalid_argument("fit_power_law: size mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > lo && x[i] < hi && y[i] > 0.0)) continue;
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    PowerLawFit fit;
    fit.used = static_cast<int>(lx.size());
    if (fit.used < 2) return fit;
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < fit.used; ++i) {
        mx += lx[static_cast<std::size_t>(i)];
        my += ly[static_cast<std::size_t>(i)];
    }
    mx /= fit.used;
    my /= fit.used;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < fit.used; ++i) {
        const double dx = lx[static_cast<std::size_t>(i)] - mx;
        sxx += dx * dx;
        sxy += dx * (ly[static_cast<std::size_t>(i)] - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

} // namespace geomlab
