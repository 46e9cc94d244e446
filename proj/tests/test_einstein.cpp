#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "geomlab/analytic.hpp"
#include "geomlab/einstein.hpp"
#include "support.hpp"

using namespace geomlab;
using namespace testsupport;

namespace {

CurvatureField fake_field(const Eigen::MatrixXd& principal) {
    CurvatureField f;
    f.dim = static_cast<int>(principal.cols());
    int count = static_cast<int>(principal.rows());
    f.principal = principal;
    f.points = Eigen::MatrixXd::Zero(count, f.dim + 1);
    f.normals = Eigen::MatrixXd::Zero(count, f.dim + 1);
    f.weights = Eigen::VectorXd::Ones(count);
    f.shapes.resize(count);
    f.frames.resize(count);
    for (int i = 0; i < count; ++i) {
        f.shapes[i] = Eigen::VectorXd(principal.row(i)).asDiagonal();
        f.frames[i] = Eigen::MatrixXd::Identity(f.dim + 1, f.dim);
    }
    return f;
}

} // namespace

TEST_SUITE("einstein") {

TEST_CASE("sphere mesh recovers the round intrinsic curvature") {
    SurfaceAnalysis& ctx = unit_sphere_ctx();
    RicciField ric = ricci_from_gauss(ctx.field());
    CHECK(ric.dim == 2);
    CHECK(ric.eigenvalues.minCoeff() >= 0.97);
    CHECK(ric.eigenvalues.maxCoeff() <= 1.05);
    CHECK(ric.minimum.minCoeff() > 0.0);
    double rbar = ric.average_scalar();
    CHECK(rbar >= 1.98);
    CHECK(rbar <= 2.07);
    CHECK(decomposition_check(ric) <= 1e-14);

    DeficitNorms norms = deficit_norms(ric, 2.0);
    CHECK(norms.traceless_deficit <= 1e-12);
    CHECK(norms.mean_deficit <= 5e-3);
    CHECK(std::abs(norms.rbar - rbar) <= 1e-14 * rbar);
}

TEST_CASE("round three-sphere is exactly einstein") {
    Eigen::VectorXd axes(4);
    axes << 1, 1, 1, 1;
    CurvatureField f = shape_operator(gen_analytic_ellipsoid(axes, 16));
    RicciField ric = ricci_from_gauss(f);
    CHECK((ric.eigenvalues.array() - 2.0).abs().maxCoeff() <= 1e-12);
    CHECK((ric.scalar.array() - 6.0).abs().maxCoeff() <= 1e-12);
    DeficitNorms norms = deficit_norms(ric, 4.0);
    CHECK(norms.mean_deficit <= 1e-12);
    CHECK(norms.traceless_deficit <= 1e-12);
}

TEST_CASE("deficit norms are grid converged on a four-axis ellipsoid") {
    Eigen::VectorXd axes(4);
    axes << 1, 1, 1, 1.2;
    double mean24, mean48;
    {
        RicciField ric =
            ricci_from_gauss(shape_operator(gen_analytic_ellipsoid(axes, 24)));
        mean24 = deficit_norms(ric, 2.0).mean_deficit;
    }
    {
        RicciField ric =
            ricci_from_gauss(shape_operator(gen_analytic_ellipsoid(axes, 48)));
        DeficitNorms norms = deficit_norms(ric, 2.0);
        mean48 = norms.mean_deficit;
        CHECK(norms.rbar >= 5.47);
        CHECK(norms.rbar <= 5.49);
    }
    CHECK(mean24 >= 0.51);
    CHECK(mean24 <= 0.53);
    CHECK(std::abs(mean24 - mean48) <= 1e-5 * mean48);
}

TEST_CASE("convex spectra produce nonnegative intrinsic curvature") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(0.05, 3.0);
    for (int n : {2, 3}) {
        Eigen::MatrixXd principal(2000, n);
        for (int i = 0; i < principal.rows(); ++i) {
            Eigen::VectorXd k(n);
            for (int j = 0; j < n; ++j) k(j) = dist(rng);
            std::sort(k.data(), k.data() + n);
            principal.row(i) = k;
        }
        RicciField ric = ricci_from_gauss(fake_field(principal));
        CHECK(ric.minimum.minCoeff() >= 0.0);
        CHECK(decomposition_check(ric) <= 1e-12);
        // scalar curvature ties to the second mean curvature
        CurvatureField f = fake_field(principal);
        Eigen::VectorXd h2 = higher_mean_curvature(f, 2);
        double worst = 0.0;
        for (int i = 0; i < ric.count(); ++i)
            worst = std::max(worst,
                             std::abs(ric.scalar(i) - n * (n - 1) * h2(i)) /
                                 std::max(1.0, std::abs(ric.scalar(i))));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("trace-split comparison carries its constant only at p equal two") {
    Eigen::VectorXd axes(4);
    axes << 1, 1, 1, 1.2;
    RicciField ric =
        ricci_from_gauss(shape_operator(gen_analytic_ellipsoid(axes, 32)));
    InequalityReport p2 = almost_schur_check(ric, 2.0);
    CHECK(p2.hypotheses_ok);
    CHECK(p2.certified);
    CHECK(p2.lhs <= p2.rhs);
    double constant_free = 9.0 * p2.lhs / p2.rhs;
    CHECK(constant_free >= 5.3);
    CHECK(constant_free <= 6.1);

    InequalityReport p4 = almost_schur_check(ric, 4.0);
    CHECK(p4.hypotheses_ok);
    CHECK_FALSE(p4.certified);
    CHECK(p4.ratio >= 2.5);
    CHECK(p4.ratio <= 3.6);
    CHECK(p4.note.find("constant") != std::string::npos);
}

TEST_CASE("trace-split comparison flags bad hypotheses") {
    SurfaceAnalysis& ctx = unit_sphere_ctx(3);
    RicciField flat = ricci_from_gauss(ctx.field());
    InequalityReport n2 = almost_schur_check(flat, 2.0);
    CHECK_FALSE(n2.hypotheses_ok);
    CHECK(n2.note.find("dimension") != std::string::npos);

    Eigen::MatrixXd principal(2, 3);
    principal << -1.0, 0.1, 0.2, 0.5, 0.6, 0.7;
    RicciField neg = ricci_from_gauss(fake_field(principal));
    CHECK(neg.minimum.minCoeff() < 0.0);
    InequalityReport rep = almost_schur_check(neg, 2.0);
    CHECK_FALSE(rep.hypotheses_ok);
    CHECK(rep.note.find("negative") != std::string::npos);
}

TEST_CASE("eigenvalue gap of round spheres closes scale invariantly") {
    SurfaceAnalysis& unit = unit_sphere_ctx();
    AubryReport base = aubry_deficit(unit, 2.0);
    CHECK(base.applicable);
    CHECK(std::abs(base.gap) <= 0.05);
    CHECK(base.deficit <= 5e-3);
    CHECK(base.gate_lhs <= 1e-6);
    CHECK(base.ratio_hat >= 0.0);

    for (double rho : {0.5, 2.0}) {
        SurfaceAnalysis scaled_ctx(gen_icosphere(4, rho));
        AubryReport rep = aubry_deficit(scaled_ctx, 2.0);
        CHECK(rep.applicable);
        CHECK(std::abs(rho * rho * rep.gap - base.gap) <= 1e-6);
    }
    CHECK_THROWS_AS(aubry_deficit(unit, 1.0), std::invalid_argument);
}

TEST_CASE("full report identifies the round sphere as almost einstein") {
    SurfaceAnalysis& ctx = unit_sphere_ctx();
    EinsteinReport rep = einstein_report(ctx, 4.0, 4.0);
    CHECK(rep.rbar_positive);
    CHECK(rep.scalar_nonnegative);
    CHECK(rep.eps_einstein <= 2e-3);
    CHECK(rep.gauss_identity <= 1e-12);
    CHECK(rep.decomposition <= 1e-14);
    CHECK(rep.chain_applicable);
    CHECK(rep.chain_ok);
    CHECK(rep.chain_lhs >= rep.chain_rhs - 1e-12);
    CHECK(std::abs(rep.radius - 1.0) <= 1e-3);
    CHECK(rep.dev_over_r <= 1e-4);
    CHECK(rep.hausdorff_over_r <= 2e-3);
    CHECK(rep.pinch_epsilon <= 0.03);
    CHECK_FALSE(rep.schur.hypotheses_ok); // dimension two
    CHECK(rep.aubry.applicable);
    CHECK(std::abs(rep.aubry.s - 2.0) <= 1e-14);
}

TEST_CASE("normalized deficit ignores homothety") {
    SurfaceAnalysis a(gen_perturbed_sphere(4, 4, 7, 0.08));
    SurfaceAnalysis b(scaled(gen_perturbed_sphere(4, 4, 7, 0.08), 2.7));
    EinsteinReport ra = einstein_report(a, 4.0, 4.0);
    EinsteinReport rb = einstein_report(b, 4.0, 4.0);
    CHECK(std::abs(ra.eps_einstein - rb.eps_einstein) <=
          1e-8 * std::max(ra.eps_einstein, 1e-8));
}

TEST_CASE("harmonic family sweep follows the predicted power law") {
    FamilySpec spec;
    spec.family = "harmonic-perturbation";
    spec.amplitudes = {0.02, 0.04, 0.06, 0.08, 0.12};
    EinsteinScan scan = einstein_family_scan(spec, 4.0, 4.0);
    REQUIRE(scan.rows.size() == 5);
    CHECK(scan.epsilon_increasing);
    CHECK(std::abs(scan.alpha - 1.0 / 6.0) <= 1e-14);
    CHECK(scan.rows_used == 5);
    CHECK(scan.slope >= 1.0 / 6.0 - 0.02);
    CHECK(scan.c_hat_fit > 0.0);
    CHECK(scan.c_hat_fit < 10.0);
    double prev = 0.0;
    for (const auto& row : scan.rows) {
        CHECK(row.eps_einstein > prev);
        prev = row.eps_einstein;
        CHECK(row.chain_ok);
        CHECK(row.gauss_identity <= 1e-9);
    }
}

TEST_CASE("report exponent guards") {
    SurfaceAnalysis& ctx = unit_sphere_ctx(3);
    CHECK_THROWS_AS(einstein_report(ctx, 2.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(einstein_report(ctx, 4.0, 2.0), std::invalid_argument);
}

} // TEST_SUITE
