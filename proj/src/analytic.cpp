#include "geomlab/analytic.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace geomlab {

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

// Orthonormal basis of the hyperplane orthogonal to unit vector nu, taken
// from the trailing columns of a Householder QR of [nu].
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& nu) {
    const int d = static_cast<int>(nu.size());
    Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(nu)
                            .householderQ() *
                        Eigen::MatrixXd::Identity(d, d);
    return q.rightCols(d - 1);
}

} // namespace

AnalyticHypersurface gen_analytic_ellipsoid(const Eigen::VectorXd& axes,
                                            int resolution) {
    const int ambient = static_cast<int>(axes.size());
    const int n = ambient - 1;
    if (n != 2 && n != 3)
        throw std::invalid_argument(
            "gen_analytic_ellipsoid: only surface dimensions 2 and 3 are supported");
    if (!(axes.minCoeff() > 0.0))
        throw std::invalid_argument("gen_analytic_ellipsoid: axes must be positive");
    if (resolution < 4)
        throw std::invalid_argument("gen_analytic_ellipsoid: resolution must be >= 4");

    Eigen::VectorXd gl_nodes, gl_weights;
    gauss_legendre(resolution, gl_nodes, gl_weights);
    const int polar_axes = n - 1;
    const int azimuth = 2 * resolution;
    const double azimuth_weight = 2.0 * std::numbers::pi / azimuth;

    long total = azimuth;
    for (int i = 0; i < polar_axes; ++i) total *= resolution;

    AnalyticHypersurface surf;
    surf.dim = n;
    surf.points.resize(total, ambient);
    surf.normals.resize(total, ambient);
    surf.frames.resize(total);
    surf.shapes.resize(total);
    surf.weights.resize(total);

    const Eigen::VectorXd inv_axes2 = axes.array().square().inverse();
    long row = 0;
    std::vector<int> index(polar_axes, 0);
    for (;;) {
        // Polar angles and their derivatives of the unit-sphere chart.
        Eigen::VectorXd theta(polar_axes), wpolar(polar_axes);
        for (int i = 0; i < polar_axes; ++i) {
            theta[i] = (gl_nodes[index[i]] + 1.0) * std::numbers::pi / 2.0;
            wpolar[i] = gl_weights[index[i]] * std::numbers::pi / 2.0;
        }
        for (int a = 0; a < azimuth; ++a) {
            const double phi = azimuth_weight * a;
            // Unit-sphere chart sigma and its parameter derivatives. For
            // n = 2: (sin t cos phi, sin t sin phi, cos t); for n = 3 the
            // analogous nested chart with two polar angles.
            Eigen::VectorXd sigma(ambient);
            Eigen::MatrixXd dsigma = Eigen::MatrixXd::Zero(ambient, n);
            if (n == 2) {
                const double st = std::sin(theta[0]), ct = std::cos(theta[0]);
                const double cp = std::cos(phi), sp = std::sin(phi);
                sigma << st * cp, st * sp, ct;
                dsigma.col(0) << ct * cp, ct * sp, -st;
                dsigma.col(1) << -st * sp, st * cp, 0.0;
            } else {
                const double s1 = std::sin(theta[0]), c1 = std::cos(theta[0]);
                const double s2 = std::sin(theta[1]), c2 = std::cos(theta[1]);
                const double cp = std::cos(phi), sp = std::sin(phi);
                sigma << c1, s1 * c2, s1 * s2 * cp, s1 * s2 * sp;
                dsigma.col(0) << -s1, c1 * c2, c1 * s2 * cp, c1 * s2 * sp;
                dsigma.col(1) << 0.0, -s1 * s2, s1 * c2 * cp, s1 * c2 * sp;
                dsigma.col(2) << 0.0, 0.0, -s1 * s2 * sp, s1 * s2 * cp;
            }

            const Eigen::VectorXd x = axes.cwiseProduct(sigma);
            Eigen::MatrixXd jac = dsigma;
            for (int c = 0; c < n; ++c)
                jac.col(c) = axes.cwiseProduct(dsigma.col(c));
            const Eigen::MatrixXd metric = jac.transpose() * jac;
            double w = std::sqrt(metric.determinant()) * azimuth_weight;
            for (int i = 0; i < polar_axes; ++i) w *= wpolar[i];

            // Level-set F = sum x_i^2 / a_i^2 - 1: outward normal along
            // grad F, shape operator from the projected Hessian.
            const Eigen::VectorXd grad = 2.0 * x.cwiseProduct(inv_axes2);
            const double gnorm = grad.norm();
            const Eigen::VectorXd nu = grad / gnorm;
            const Eigen::MatrixXd frame = tangent_basis(nu);
            Eigen::MatrixXd shape =
                frame.transpose() * (2.0 * inv_axes2).asDiagonal() * frame / gnorm;
            shape = 0.5 * (shape + shape.transpose()).eval();

            surf.points.row(row) = x;
            surf.normals.row(row) = nu;
            surf.frames[row] = frame;
            surf.shapes[row] = shape;
            surf.weights[row] = w;
            ++row;
        }
        int carry = polar_axes - 1;
        for (; carry >= 0; --carry) {
            if (++index[carry] < resolution) break;
            index[carry] = 0;
        }
        if (carry < 0) break;
    }
    return surf;
}

} // namespace geomlab
