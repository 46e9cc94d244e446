#include "geomlab/einstein.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

namespace geomlab {

RicciField ricci_from_gauss(const CurvatureField& field) {
    RicciField ric;
    ric.dim = field.dim;
    const Eigen::MatrixXd& k = field.principal;
    const Eigen::VectorXd s1 = k.rowwise().sum();
    ric.eigenvalues =
        (k.array().colwise() * s1.array() - k.array().square()).matrix();
    ric.scalar = ric.eigenvalues.rowwise().sum();
    ric.minimum = ric.eigenvalues.rowwise().minCoeff();
    ric.weights = field.weights;
    return ric;
}

namespace {

// Pointwise Frobenius norm of Ric - c g for a per-sample scalar c.
Eigen::VectorXd deviation_norms(const RicciField& ric,
                                const Eigen::VectorXd& c) {
    const Eigen::MatrixXd dev =
        ric.eigenvalues.array().colwise() - c.array();
    return dev.array().square().rowwise().sum().sqrt().matrix();
}

} // namespace

DeficitNorms deficit_norms(const RicciField& ric, double p) {
    if (p < 1.0) {
        throw std::invalid_argument("deficit_norms: p must be >= 1");
    }
    DeficitNorms out;
    out.p = p;
    out.rbar = ric.average_scalar();
    const int n = ric.dim;
    const Eigen::VectorXd mean_c =
        Eigen::VectorXd::Constant(ric.count(), out.rbar / n);
    const Eigen::VectorXd trace_c = ric.scalar / n;
    out.mean_deficit = lp_norm(deviation_norms(ric, mean_c), ric.weights, p);
    out.traceless_deficit =
        lp_norm(deviation_norms(ric, trace_c), ric.weights, p);
    return out;
}

double decomposition_check(const RicciField& ric) {
    const int n = ric.dim;
    const double rbar = ric.average_scalar();
    const Eigen::VectorXd mean_c =
        Eigen::VectorXd::Constant(ric.count(), rbar / n);
    const Eigen::VectorXd lhs =
        deviation_norms(ric, mean_c).array().square().matrix();
    const Eigen::VectorXd traceless =
        deviation_norms(ric, ric.scalar / n).array().square().matrix();
    const Eigen::VectorXd rhs =
        traceless +
        ((ric.scalar.array() - rbar).square() / n).matrix();
    double worst = 0.0;
    for (int i = 0; i < ric.count(); ++i) {
        const double scale = std::max(1.0, std::abs(lhs(i)));
        worst = std::max(worst, std::abs(lhs(i) - rhs(i)) / scale);
    }
    return worst;
}

InequalityReport almost_schur_check(const RicciField& ric, double p) {
    if (p < 1.0) {
        throw std::invalid_argument("almost_schur_check: p must be >= 1");
    }
    InequalityReport report;
    const int n = ric.dim;
    char name[48];
    std::snprintf(name, sizeof name, "almost_schur(p=%g)", p);
    report.name = name;
    report.tolerance = 1e-6;
    if (n < 3) {
        report.hypotheses_ok = false;
        report.note = "requires dimension >= 3";
        return report;
    }
    const double scale =
        std::max(1.0, ric.eigenvalues.array().abs().maxCoeff());
    const bool nonneg = ric.minimum.minCoeff() >= -1e-12 * scale;
    report.hypotheses_ok = nonneg;
    if (!nonneg) {
        report.note = "Ricci negative somewhere";
    }

    const double rbar = ric.average_scalar();
    const Eigen::VectorXd mean_dev = deviation_norms(
        ric, Eigen::VectorXd::Constant(ric.count(), rbar / n));
    const Eigen::VectorXd traceless_dev =
        deviation_norms(ric, ric.scalar / n);
    if (p == 2.0) {
        const double ratio_constant =
            static_cast<double>(n) * n / ((n - 2.0) * (n - 2.0));
        report.lhs = ric.weights.dot(mean_dev.array().square().matrix());
        report.rhs = ratio_constant *
                     ric.weights.dot(traceless_dev.array().square().matrix());
        report.ratio = report.lhs / report.rhs;
        report.certified = report.hypotheses_ok &&
                           report.lhs <= report.rhs * (1.0 + report.tolerance);
    } else {
        report.lhs = lp_norm(mean_dev, ric.weights, p);
        report.rhs = lp_norm(traceless_dev, ric.weights, p);
        report.ratio = report.rhs > 0.0 ? report.lhs / report.rhs : 0.0;
        report.note = report.note.empty()
                          ? "no explicit constant at this exponent"
                          : report.note + "; no explicit constant at this "
                                          "exponent";
        report.certified = false;
    }
    return report;
}

AubryReport aubry_deficit(SurfaceAnalysis& ctx, double s) {
    const int n = ctx.field().dim;
    if (!(s > std::max(1.0, n / 4.0))) {
        throw std::invalid_argument("aubry_deficit: requires s > max(1, n/4)");
    }
    AubryReport out;
    out.s = s;
    const RicciField ric = ricci_from_gauss(ctx.field());
    out.rbar = ric.average_scalar();
    out.deficit = deficit_norms(ric, 2.0 * s).mean_deficit;
    const Eigen::VectorXd gate =
        ((n - 1.0) - ric.minimum.array()).max(0.0).pow(2.0 * s).matrix();
    out.gate_lhs = ric.weights.dot(gate) / ric.volume();
    try {
        out.lambda1 = ctx.lambda1_of(TensorChoice::id());
        out.applicable = true;
    } catch (const solver_error& e) {
        out.note = e.what();
        return out;
    }
    out.gap = out.lambda1 - out.rbar / (n - 1.0);
    const double tiny = 1e-9 * std::max(1.0, std::abs(out.rbar));
    if (out.deficit > tiny) {
        out.ratio_hat = std::max(0.0, -out.gap) / out.deficit;
    }
    return out;
}

EinsteinReport einstein_report(SurfaceAnalysis& ctx, double p, double q) {
    const int n = ctx.field().dim;
    if (!(p > std::max(2.0, n / 2.0))) {
        throw std::invalid_argument(
            "einstein_report: requires p > max(2, n/2)");
    }
    if (!(q > n)) {
        throw std::invalid_argument("einstein_report: requires q > n");
    }
    EinsteinReport out;
    out.p = p;
    out.q = q;

    const CurvatureField& field = ctx.field();
    const RicciField ric = ricci_from_gauss(field);
    const DeficitNorms norms = deficit_norms(ric, p);
    out.rbar = norms.rbar;
    out.mean_deficit = norms.mean_deficit;
    out.traceless_deficit = norms.traceless_deficit;
    out.rbar_positive = out.rbar > 0.0;
    const double rscale = std::max(1.0, ric.scalar.array().abs().maxCoeff());
    out.scalar_nonnegative = ric.scalar.minCoeff() >= -1e-12 * rscale;
    if (out.rbar_positive) {
        out.eps_einstein = out.mean_deficit / out.rbar;
    }
    out.decomposition = decomposition_check(ric);

    const Eigen::VectorXd h1 = higher_mean_curvature(field, 1);
    const Eigen::VectorXd h2 = higher_mean_curvature(field, 2);
    double worst = 0.0;
    for (int i = 0; i < field.count(); ++i) {
        const double expected = n * (n - 1.0) * h2(i);
        const double scale = std::max(1.0, std::abs(ric.scalar(i)));
        worst = std::max(worst,
                         std::abs(ric.scalar(i) - expected) / scale);
    }
    out.gauss_identity = worst;

    out.chain_applicable = out.scalar_nonnegative;
    if (out.chain_applicable) {
        const double volume = field.total_area();
        const double h1_l1 = ctx.integral(h1.cwiseAbs()) / volume;
        const double root =
            ctx.integral(h2.array().max(0.0).sqrt().matrix()) / volume;
        out.chain_lhs = h1_l1 * h1_l1;
        out.chain_rhs = root * root;
        out.chain_ok = out.chain_lhs >= out.chain_rhs * (1.0 - 1e-12);
    }

    PinchSetup setup;
    setup.S = TensorChoice::newton(1);
    setup.T = TensorChoice::id();
    setup.p = p / 2.0;
    setup.q = q;
    const PinchReport pinch = pinch_report(ctx, setup);
    out.radius = pinch.quantities.radius;
    out.dev_over_r = pinch.dev_over_r;
    out.hausdorff_over_r = pinch.hausdorff_over_r;
    out.pinch_epsilon = pinch.quantities.epsilon;

    out.schur = almost_schur_check(ric, 2.0);
    out.aubry = aubry_deficit(ctx, p / 2.0);
    return out;
}

EinsteinScan einstein_family_scan(const FamilySpec& spec, double p,
                                  double q) {
    EinsteinScan out;
    out.p = p;
    out.q = q;
    out.amplitudes = spec.amplitudes;

    std::vector<double> eps_rows;
    std::vector<double> haus_rows;
    for (std::size_t i = 0; i < spec.amplitudes.size(); ++i) {
        SurfaceAnalysis ctx(family_member(spec, static_cast<int>(i)));
        out.rows.push_back(einstein_report(ctx, p, q));
        eps_rows.push_back(out.rows.back().eps_einstein);
        haus_rows.push_back(out.rows.back().hausdorff_over_r);
    }

    const int n = 2; // family members are triangle meshes
    const double gamma = n * q / (2.0 * (q - n));
    out.alpha = 1.0 / (2.0 * (gamma + 1.0));

    const PowerLawFit fit = fit_power_law(eps_rows, haus_rows, 1e-9, 0.5);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    out.rows_used = fit.used;

    double c_hat = 0.0;
    for (std::size_t i = 0; i < eps_rows.size(); ++i) {
        if (eps_rows[i] <= 1e-9 || eps_rows[i] >= 0.5) continue;
        c_hat = std::max(c_hat,
                         haus_rows[i] / std::pow(eps_rows[i], out.alpha));
    }
    out.c_hat_fit = c_hat;

    out.epsilon_increasing = eps_rows.size() > 1;
    for (std::size_t i = 1; i < eps_rows.size(); ++i) {
        if (!(eps_rows[i] > eps_rows[i - 1])) {
            out.epsilon_increasing = false;
        }
    }
    return out;
}

} // namespace geomlab
