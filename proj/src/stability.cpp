#include "geomlab/stability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>

#include "geomlab/common.hpp"
#include "geomlab/curvature.hpp"
#include "geomlab/spectral.hpp"
#include "geomlab/surface.hpp"

namespace geomlab {

double JacobiForm::quadratic(const Eigen::VectorXd& f) const {
    return f.dot(form.selfadjointView<Eigen::Lower>() * f);
}

double JacobiForm::weighted_square(const Eigen::VectorXd& f) const {
    return f.dot(weight.cwiseProduct(f));
}

JacobiForm assemble_jacobi(SurfaceAnalysis& ctx, int r) {
    const CurvatureField& field = ctx.field();
    const int n = field.dim;
    if (r < 0 || r >= n)
        throw validation_error("jacobi order must satisfy 0 <= r <= n-1");

    const TensorChoice tr =
        r == 0 ? TensorChoice::id() : TensorChoice::newton(r);
    const GalerkinPair& pair = ctx.pair(tr);

    const Eigen::VectorXd h1 = higher_mean_curvature(field, 1);
    const Eigen::VectorXd hr1 = higher_mean_curvature(field, r + 1);
    const Eigen::VectorXd hr2 = r + 2 > n
                                    ? Eigen::VectorXd::Zero(h1.size())
                                    : higher_mean_curvature(field, r + 2);

    JacobiForm out;
    out.r = r;
    out.mass = pair.mass;
    const double cr = static_cast<double>(c_of_r(n, r));
    const double cr1 =
        r + 1 > n ? 0.0 : static_cast<double>(c_of_r(n, r + 1));
    out.potential = cr1 * hr2.array() -
                    (n * cr / (r + 1.0)) * (h1.array() * hr1.array());

    out.form = pair.stiffness;
    Eigen::VectorXd diag_add =
        (r + 1.0) * out.potential.cwiseProduct(out.mass);
    out.form *= (r + 1.0);
    for (int v = 0; v < diag_add.size(); ++v)
        out.form.coeffRef(v, v) += diag_add(v);
    out.form.makeCompressed();

    out.curvature_positive = (hr1.array() > 0.0).all();
    if (out.curvature_positive) {
        const double expo = (r + 2.0) / (r + 1.0);
        out.weight = out.mass.cwiseProduct(hr1.array().pow(expo).matrix());
    } else {
        out.weight = Eigen::VectorXd::Zero(out.mass.size());
    }
    return out;
}

StabilityReport stability_deficit(SurfaceAnalysis& ctx, int r) {
    const JacobiForm jac = assemble_jacobi(ctx, r);
    if (!jac.curvature_positive)
        throw hypothesis_error(
            "stability deficit needs H_{r+1} > 0 at every vertex");

    StabilityReport out;
    out.r = r;
    out.curvature_positive = true;

    // Constraint 1' M v = 0 expressed in the weight inner product.
    const Eigen::VectorXd deflate = jac.mass.cwiseQuotient(jac.weight);

    // Shift making form + shift diag(weight) positive definite: the
    // stiffness part is PSD, so it suffices to dominate the potential.
    double sigma = 0.0;
    for (int v = 0; v < jac.mass.size(); ++v) {
        const double floor_v =
            -(jac.r + 1.0) * jac.potential(v) * jac.mass(v) / jac.weight(v);
        sigma = std::max(sigma, floor_v);
    }
    sigma = 1.05 * sigma + 1e-3;

    const Spectrum spec =
        lowest_eigenpairs(jac.form, jac.weight, 2, sigma, deflate, 0x5EEDu);
    out.mu_min = spec.values(0);
    out.deficit = std::max(0.0, -out.mu_min);

    const CurvatureField& field = ctx.field();
    const Eigen::VectorXd hr1 = higher_mean_curvature(field, r + 1);
    const double volume = field.weights.sum();
    const double mean = field.weights.dot(hr1) / volume;
    const double var =
        field.weights.dot((hr1.array() - mean).square().matrix()) / volume;
    out.constancy = std::sqrt(std::max(var, 0.0)) / std::abs(mean);

    out.chain_applicable = out.constancy < 1e-2;
    if (out.chain_applicable) {
        const int n = field.dim;
        const double cr = static_cast<double>(c_of_r(n, r));
        const double wbar = jac.weight.sum() / volume;
        const TensorChoice tr =
            r == 0 ? TensorChoice::id() : TensorChoice::newton(r);
        out.chain_lhs = ctx.lambda1_of(tr);
        out.chain_rhs = (1.0 - out.deficit / ((r + 1.0) * cr)) * cr * wbar;
        const double slack = 3.0 * out.constancy + 1e-9;
        out.chain_ok = out.chain_lhs >= out.chain_rhs * (1.0 - slack);
    }
    return out;
}

namespace {

// Integrated r-th symmetric curvature function of a displaced copy of the
// mesh, with curvature refit from scratch. S_0 integrates to the area.
double displaced_area_functional(const Mesh& base,
                                 const Eigen::MatrixXd& normals,
                                 const Eigen::VectorXd& f, double t, int r,
                                 double* volume) {
    Mesh moved = base;
    for (std::size_t v = 0; v < moved.vertices.size(); ++v)
        moved.vertices[v] +=
            t * f(static_cast<int>(v)) *
            normals.row(static_cast<int>(v)).transpose();
    try {
        validate(moved);
    } catch (const validation_error&) {
        throw validation_error("variation step degenerates the mesh");
    }
    if (volume) *volume = enclosed_volume(moved);
    if (r == 0) return area(moved);

    const CurvatureField field = shape_operator(moved);
    double total = 0.0;
    for (int v = 0; v < field.weights.size(); ++v) {
        Eigen::VectorXd kappa = field.principal.row(v).transpose();
        total += field.weights(v) *
                 elementary_symmetric(kappa, r);
    }
    return total;
}

} // namespace

VariationReport variation_check(SurfaceAnalysis& ctx, int r,
                                const Eigen::VectorXd& f, double h) {
    const CurvatureField& field = ctx.field();
    const int n = field.dim;
    if (r < 0 || r >= n)
        throw validation_error("variation order must satisfy 0 <= r <= n-1");
    if (!(h > 0.0)) throw validation_error("variation step must be positive");
    if (f.size() != field.points.rows())
        throw validation_error("variation field size mismatch");

    VariationReport out;
    out.r = r;
    out.h = h;

    // Seven functional evaluations on displaced meshes, one per step.
    const std::array<double, 6> steps = {h,       -h,       2.0 * h,
                                         -2.0 * h, 4.0 * h, -4.0 * h};
    std::array<double, 6> a{};
    std::array<double, 6> vol{};
    std::array<std::exception_ptr, 6> errors{};
    parallel_for(steps.size(), [&](std::size_t i) {
        try {
            a[i] = displaced_area_functional(ctx.mesh(), field.normals, f,
                                             steps[i], r, &vol[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
    double vol0 = 0.0;
    const double a0 =
        displaced_area_functional(ctx.mesh(), field.normals, f, 0.0, r, &vol0);

    // First-variation identities under the outward normal and outward f.
    Eigen::VectorXd s_next(field.points.rows());
    for (int v = 0; v < field.points.rows(); ++v) {
        Eigen::VectorXd kappa = field.principal.row(v).transpose();
        s_next(v) = elementary_symmetric(kappa, r + 1);
    }
    out.area_identity_rhs = (r + 1.0) * field.weights.dot(
                                f.cwiseProduct(s_next));
    out.volume_identity_rhs = field.weights.dot(f);

    const auto central = [&](const std::array<double, 6>& g, int lo,
                             double step) {
        return (g[static_cast<std::size_t>(lo)] -
                g[static_cast<std::size_t>(lo + 1)]) /
               (2.0 * step);
    };
    const double fd_a1 = central(a, 0, h);
    const double fd_a2 = central(a, 2, 2.0 * h);
    const double fd_a4 = central(a, 4, 4.0 * h);
    const double fd_v1 = central(vol, 0, h);
    const double fd_v2 = central(vol, 2, 2.0 * h);
    const double fd_v4 = central(vol, 4, 4.0 * h);
    out.area_derivative = fd_a1;
    out.volume_derivative = fd_v1;

    const double ascale =
        std::max({std::abs(out.area_identity_rhs), 1e-6 * std::abs(a0)});
    const double vscale =
        std::max({std::abs(out.volume_identity_rhs), 1e-6 * std::abs(vol0)});
    out.area_residual = std::abs(fd_a1 - out.area_identity_rhs) / ascale;
    out.volume_residual = std::abs(fd_v1 - out.volume_identity_rhs) / vscale;

    // Richardson rate of the three central differences: for a second-order
    // scheme the doubling gaps grow fourfold, independently of the discrete
    // limit the differences share.
    const auto richardson = [](double d1, double d2, double d4) {
        const double tiny = 1e-300;
        const double num = std::abs(d4 - d2);
        const double den = std::abs(d2 - d1);
        return std::log2(std::max(num, tiny) / std::max(den, tiny));
    };
    out.area_order = richardson(fd_a1, fd_a2, fd_a4);
    out.volume_order = richardson(fd_v1, fd_v2, fd_v4);

    // Volume-corrected second difference. The multiplier removes the first
    // variation entirely when S_{r+1} is constant, which makes the plain
    // normal displacement an admissible stand-in for the volume-preserving
    // variation with the same normal part.
    const double s_mean = field.weights.dot(s_next) / field.weights.sum();
    const double mu = -(r + 1.0) * s_mean;
    auto corrected = [&](double av, double vv) { return av + mu * vv; };
    out.second_difference =
        (corrected(a[0], vol[0]) - 2.0 * corrected(a0, vol0) +
         corrected(a[1], vol[1])) /
        (h * h);

    const JacobiForm jac = assemble_jacobi(ctx, r);
    out.assembled_quadratic = jac.quadratic(f);
    const Eigen::VectorXd kf =
        ctx.pair(r == 0 ? TensorChoice::id() : TensorChoice::newton(r))
            .stiffness.selfadjointView<Eigen::Lower>() *
        f;
    out.second_scale =
        (r + 1.0) *
        (f.dot(kf) + std::abs(jac.potential.dot(
                         jac.mass.cwiseProduct(f.cwiseProduct(f)))));
    out.second_match =
        std::abs(out.second_difference - out.assembled_quadratic) /
        std::max(std::abs(out.assembled_quadratic), out.second_scale);
    return out;
}

} // namespace geomlab
