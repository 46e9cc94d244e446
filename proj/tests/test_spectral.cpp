#include <doctest.h>

#include <cmath>
#include <random>

#include "geomlab/calculus.hpp"
#include "support.hpp"

using namespace geomlab;
using namespace testsupport;

TEST_SUITE("spectral") {

TEST_CASE("unit sphere spectrum has the coordinate cluster") {
    SurfaceAnalysis& ctx = unit_sphere_ctx();
    const Spectrum& sp = ctx.spectrum_of(TensorChoice::id());
    REQUIRE(sp.values.size() >= 6);
    CHECK(std::abs(sp.values(0)) <= sp.zero_threshold);
    for (int i = 1; i <= 3; ++i) {
        CHECK(sp.values(i) >= 1.98);
        CHECK(sp.values(i) <= 2.02);
    }
    CHECK(sp.values(4) >= 5.7);
    CHECK(sp.values(4) <= 6.3);
    CHECK(sp.residuals.maxCoeff() <= 1e-8);
}

TEST_CASE("eigenvalue tracks the inverse squared radius") {
    SurfaceAnalysis& big = cached_analysis("sphere4r2", gen_icosphere(4, 2.0));
    double lam = big.lambda1_of(TensorChoice::id());
    CHECK(lam >= 0.495);
    CHECK(lam <= 0.505);

    SurfaceAnalysis c1(gen_icosphere(3, 1.0));
    SurfaceAnalysis c3(scaled(gen_icosphere(3, 1.0), 3.0));
    double l1 = c1.lambda1_of(TensorChoice::id());
    double l3 = c3.lambda1_of(TensorChoice::id());
    CHECK(std::abs(l1 - 9.0 * l3) <= 1e-10 * l1);
}

TEST_CASE("eigenvectors satisfy the generalized problem") {
    SurfaceAnalysis& ctx = unit_sphere_ctx();
    const GalerkinPair& pair = ctx.pair(TensorChoice::id());
    const Spectrum& sp = ctx.spectrum_of(TensorChoice::id());
    Eigen::VectorXd v = sp.vectors.col(1);
    double rayleigh = v.dot(pair.stiffness * v) /
                      v.dot(pair.mass.asDiagonal() * v);
    CHECK(std::abs(rayleigh - sp.values(1)) <= 1e-9 * std::abs(sp.values(1)));
    // mass-orthonormality of the block
    Eigen::MatrixXd gram =
        sp.vectors.transpose() * pair.mass.asDiagonal() * sp.vectors;
    gram -= Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
    CHECK(gram.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("stiffness rows annihilate constants") {
    for (double t : {0.0, 0.1}) {
        SurfaceAnalysis& ctx = t == 0.0 ? unit_sphere_ctx() : perturbed_ctx(t);
        for (auto choice : {TensorChoice::id(), TensorChoice::newton(1)}) {
            const GalerkinPair& pair = ctx.pair(choice);
            Eigen::VectorXd ones =
                Eigen::VectorXd::Ones(pair.stiffness.rows());
            Eigen::VectorXd rows = pair.stiffness * ones;
            Eigen::VectorXd diag = pair.stiffness.diagonal();
            double scale = diag.cwiseAbs().maxCoeff();
            CHECK(rows.cwiseAbs().maxCoeff() <= 1e-10 * scale);
        }
    }
}

TEST_CASE("mass is positive and partitions the area") {
    SurfaceAnalysis& ctx = ellipsoid_ctx(0.1);
    const GalerkinPair& pair = ctx.pair(TensorChoice::id());
    CHECK(pair.mass.minCoeff() > 0.0);
    CHECK(std::abs(pair.mass.sum() - area(ctx.mesh())) <=
          1e-12 * pair.mass.sum());
}

TEST_CASE("assembly is linear in the coefficient") {
    SurfaceAnalysis ctx(gen_icosphere(3, 1.0));
    const CurvatureField& f = ctx.field();
    int n = f.dim;
    NewtonTensorField one{0, {}}, two{0, {}};
    one.tensors.assign(f.count(), Eigen::MatrixXd::Identity(n, n));
    two.tensors.assign(f.count(), 2.0 * Eigen::MatrixXd::Identity(n, n));
    GalerkinPair p1 = assemble(ctx.mesh(), &f, &one);
    GalerkinPair p2 = assemble(ctx.mesh(), &f, &two);
    double scale = Eigen::VectorXd(p1.stiffness.diagonal()).cwiseAbs().maxCoeff();
    for (int k = 0; k < p1.stiffness.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(p1.stiffness, k);
             it; ++it)
            CHECK(std::abs(p2.stiffness.coeff(it.row(), it.col()) -
                           2.0 * it.value()) <= 1e-14 * scale);
    CHECK(std::abs(p2.trace_integral - 2.0 * p1.trace_integral) <=
          1e-12 * std::abs(p2.trace_integral));
}

TEST_CASE("unit sphere first newton coefficient acts like the identity") {
    SurfaceAnalysis& ctx = unit_sphere_ctx();
    const GalerkinPair& pid = ctx.pair(TensorChoice::id());
    const GalerkinPair& pt1 = ctx.pair(TensorChoice::newton(1));
    CHECK(pt1.coefficient_positive_definite);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd v(ctx.mesh().vertex_count());
        for (int i = 0; i < v.size(); ++i) v(i) = nd(rng);
        double q1 = v.dot(pid.stiffness * v);
        double q2 = v.dot(pt1.stiffness * v);
        CHECK(std::abs(q2 - q1) <= 2e-2 * q1);
    }
}

TEST_CASE("disconnected surfaces are reported as degenerate") {
    SurfaceAnalysis ctx(two_spheres(2));
    CHECK_THROWS_AS(ctx.lambda1_of(TensorChoice::id()), degenerate_spectrum);
}

TEST_CASE("solver argument guards") {
    SurfaceAnalysis ctx(gen_icosphere(1, 1.0));
    CHECK_THROWS_AS(solve_lowest(ctx.pair(TensorChoice::id()), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_lowest(ctx.pair(TensorChoice::id()), 13),
                    std::invalid_argument);
}

TEST_CASE("discrete curvature vector points inward with magnitude two") {
    double prev_align = 1e300, prev_l2 = 1e300;
    for (int level : {3, 4}) {
        SurfaceAnalysis& ctx = unit_sphere_ctx(level);
        auto ht = discrete_generalized_mean_curvature(
            ctx.pair(TensorChoice::id()), ctx.mesh(), ctx.field());
        Eigen::VectorXd norms = ht.vectors.rowwise().norm();
        double area_total = ctx.field().weights.sum();
        double l2 = std::sqrt(
            ctx.field().weights.dot((norms.array() - 2.0).square().matrix()) /
            area_total);
        CHECK(ht.tangential_alignment < prev_align);
        CHECK(l2 < prev_l2);
        prev_align = ht.tangential_alignment;
        prev_l2 = l2;
        if (level == 4) {
            CHECK(l2 <= 0.05);
            CHECK(ht.tangential_alignment <= 1e-2);
            // inward orientation: against the outward vertex direction
            int inward = 0;
            for (int i = 0; i < norms.size(); ++i)
                if (ht.vectors.row(i).dot(ctx.field().normals.row(i)) < 0.0)
                    ++inward;
            CHECK(inward == norms.size());
        }
    }
}

TEST_CASE("discrete curvature magnitude follows the trace constant") {
    double prev = 1e300;
    for (int level : {3, 4}) {
        SurfaceAnalysis& ctx = unit_sphere_ctx(level);
        auto ht = discrete_generalized_mean_curvature(
            ctx.pair(TensorChoice::newton(1)), ctx.mesh(), ctx.field());
        Eigen::VectorXd lhs = ht.vectors.rowwise().norm();
        Eigen::VectorXd rhs =
            2.0 * higher_mean_curvature(ctx.field(), 2).cwiseAbs();
        double rel = std::sqrt(
            ctx.field().weights.dot((lhs - rhs).array().square().matrix()) /
            ctx.field().weights.dot(rhs.array().square().matrix()));
        CHECK(rel < prev);
        prev = rel;
        if (level == 4) CHECK(rel <= 0.05);
    }
}

TEST_CASE("discrete curvature vector ignores translations") {
    SurfaceAnalysis& ctx = unit_sphere_ctx();
    auto base = discrete_generalized_mean_curvature(
        ctx.pair(TensorChoice::id()), ctx.mesh(), ctx.field());
    SurfaceAnalysis moved(translated(gen_icosphere(4, 1.0),
                                     Eigen::Vector3d(3, -1, 2)));
    auto shifted = discrete_generalized_mean_curvature(
        moved.pair(TensorChoice::id()), moved.mesh(), moved.field());
    CHECK((shifted.vectors - base.vectors).cwiseAbs().maxCoeff() <= 1e-9);
}

} // TEST_SUITE
