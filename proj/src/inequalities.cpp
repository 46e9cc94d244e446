#include "geomlab/inequalities.hpp"

#include <cmath>

namespace geomlab {

namespace {

InequalityReport finish(SurfaceAnalysis& ctx, std::string name, double lhs,
                        double rhs, bool hypotheses_ok, std::string note) {
    InequalityReport report;
    report.name = std::move(name);
    report.lhs = lhs;
    report.rhs = rhs;
    report.ratio = lhs / rhs;
    report.tolerance = ctx.tolerance();
    report.hypotheses_ok = hypotheses_ok;
    report.note = std::move(note);
    report.certified =
        hypotheses_ok && lhs <= rhs * (1.0 + report.tolerance);
    return report;
}

} // namespace

InequalityReport reilly_general(SurfaceAnalysis& ctx, const TensorChoice& S,
                                const TensorChoice& T) {
    const CurvatureField& field = ctx.field();
    const NewtonTensorField* s_tensor = ctx.tensor(S);
    const GalerkinPair& t_pair = ctx.pair(T);

    bool hyp = t_pair.coefficient_positive_definite;
    std::string note = hyp ? "" : "coefficient not positive definite";
    const double lam = hyp ? ctx.lambda1_of(T) : 0.0;
    const double tr_s = ctx.integral(tensor_trace(field, s_tensor));
    const double tr_t = ctx.integral(tensor_trace(field, ctx.tensor(T)));
    const Eigen::VectorXd hs = generalized_mean_curvature_scalar(field, s_tensor);
    const double hs2 = ctx.integral(hs.cwiseProduct(hs));

    return finish(ctx, "reilly_general(S=" + S.name() + ",T=" + T.name() + ")",
                  lam * tr_s * tr_s, tr_t * hs2, hyp, std::move(note));
}

InequalityReport bleecker_weiner(SurfaceAnalysis& ctx) {
    const double lam = ctx.lambda1_of(TensorChoice::id());
    const double volume = ctx.field().total_area();
    const Eigen::VectorXd b2 =
        ctx.field().principal.array().square().rowwise().sum();
    return finish(ctx, "bleecker_weiner", lam * volume, ctx.integral(b2),
                  true, "");
}

InequalityReport reilly_h(SurfaceAnalysis& ctx) {
    InequalityReport report = reilly_hr(ctx, 0);
    report.name = "reilly_h";
    return report;
}

InequalityReport reilly_hr(SurfaceAnalysis& ctx, int r) {
    const int n = ctx.field().dim;
    if (r < 0 || r > n - 1)
        throw std::invalid_argument("reilly_hr: need 0 <= r <= n-1");
    const double lam = ctx.lambda1_of(TensorChoice::id());
    const double volume = ctx.field().total_area();
    const Eigen::VectorXd hr = higher_mean_curvature(ctx.field(), r);
    const Eigen::VectorXd hr1 = higher_mean_curvature(ctx.field(), r + 1);
    const double int_hr = ctx.integral(hr);
    const double int_hr1sq = ctx.integral(hr1.cwiseProduct(hr1));
    return finish(ctx, "reilly_hr(r=" + std::to_string(r) + ")",
                  lam * int_hr * int_hr, n * volume * int_hr1sq, true, "");
}

InequalityReport alias_malacarne(SurfaceAnalysis& ctx, int r, int s) {
    const int n = ctx.field().dim;
    if (r < 0 || r > n - 1 || s < 0 || s > n - 1)
        throw std::invalid_argument("alias_malacarne: need 0 <= r, s <= n-1");
    const TensorChoice tr_choice =
        r == 0 ? TensorChoice::id() : TensorChoice::newton(r);
    const GalerkinPair& pair = ctx.pair(tr_choice);

    const Eigen::VectorXd hr = higher_mean_curvature(ctx.field(), r);
    const Eigen::VectorXd hs = higher_mean_curvature(ctx.field(), s);
    const Eigen::VectorXd hs1 = higher_mean_curvature(ctx.field(), s + 1);
    const double int_hr = ctx.integral(hr);
    const double int_hs = ctx.integral(hs);
    const double int_hs1sq = ctx.integral(hs1.cwiseProduct(hs1));

    bool hyp = pair.coefficient_positive_definite && int_hr > 0.0;
    std::string note = hyp ? "" : "needs positive definite T_r and int H_r > 0";
    const double lam = hyp ? ctx.lambda1_of(tr_choice) : 0.0;
    const double c = static_cast<double>(c_of_r(n, r));
    return finish(ctx,
                  "alias_malacarne(r=" + std::to_string(r) +
                      ",s=" + std::to_string(s) + ")",
                  lam * int_hs * int_hs, c * int_hr * int_hs1sq, hyp,
                  std::move(note));
}

InequalityReport acr(SurfaceAnalysis& ctx, int r) {
    const int n = ctx.field().dim;
    if (r < 0 || r > n - 1)
        throw std::invalid_argument("acr: need 0 <= r <= n-1");
    const TensorChoice tr_choice =
        r == 0 ? TensorChoice::id() : TensorChoice::newton(r);
    const GalerkinPair& pair = ctx.pair(tr_choice);
    const Eigen::VectorXd hr = higher_mean_curvature(ctx.field(), r);
    const Eigen::VectorXd hr1 = higher_mean_curvature(ctx.field(), r + 1);
    const double int_hr = ctx.integral(hr);
    const double int_hr1sq = ctx.integral(hr1.cwiseProduct(hr1));

    bool hyp = pair.coefficient_positive_definite && int_hr > 0.0;
    std::string note = hyp ? "" : "needs positive definite T_r and int H_r > 0";
    const double lam = hyp ? ctx.lambda1_of(tr_choice) : 0.0;
    const double c = static_cast<double>(c_of_r(n, r));
    return finish(ctx, "acr(r=" + std::to_string(r) + ")", lam * int_hr,
                  c * int_hr1sq, hyp, std::move(note));
}

InequalityReport corollary_st(SurfaceAnalysis& ctx, const TensorChoice& T) {
    const GalerkinPair& pair = ctx.pair(T);
    bool hyp = pair.coefficient_positive_definite;
    std::string note = hyp ? "" : "coefficient not positive definite";
    const double lam = hyp ? ctx.lambda1_of(T) : 0.0;
    const NewtonTensorField* tensor = ctx.tensor(T);
    const double tr_t = ctx.integral(tensor_trace(ctx.field(), tensor));
    const Eigen::VectorXd ht =
        generalized_mean_curvature_scalar(ctx.field(), tensor);
    const double ht2 = ctx.integral(ht.cwiseProduct(ht));
    return finish(ctx, "corollary_st(T=" + T.name() + ")", lam * tr_t, ht2,
                  hyp, std::move(note));
}

std::vector<InequalityReport> verify_suite(SurfaceAnalysis& ctx) {
    std::vector<InequalityReport> reports;
    const TensorChoice id = TensorChoice::id();
    const TensorChoice t1 = TensorChoice::newton(1);
    for (const auto& s : {id, t1})
        for (const auto& t : {id, t1})
            reports.push_back(reilly_general(ctx, s, t));
    reports.push_back(bleecker_weiner(ctx));
    reports.push_back(reilly_h(ctx));
    for (int r : {0, 1}) reports.push_back(reilly_hr(ctx, r));
    for (int r : {0, 1})
        for (int s : {0, 1}) reports.push_back(alias_malacarne(ctx, r, s));
    for (int r : {0, 1}) reports.push_back(acr(ctx, r));
    reports.push_back(corollary_st(ctx, id));
    reports.push_back(corollary_st(ctx, t1));
    return reports;
}

} // namespace geomlab
