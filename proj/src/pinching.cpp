#include "geomlab/pinching.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include <Eigen/Geometry>

#include "geomlab/common.hpp"
#include "geomlab/spectral.hpp"

namespace geomlab {

namespace {

void check_setup(const SurfaceAnalysis& ctx, const PinchSetup& setup) {
    if (!(setup.p > 1.0))
        throw validation_error("pinch exponent p must exceed 1");
    if (!(setup.q > ctx.field().dim))
        throw validation_error("pinch exponent q must exceed the surface dimension");
}

} // namespace

PinchQuantities pinch_quantities(SurfaceAnalysis& ctx, const PinchSetup& setup) {
    check_setup(ctx, setup);
    const CurvatureField& field = ctx.field();
    const GalerkinPair& pair = ctx.pair(setup.T);
    if (!pair.coefficient_positive_definite)
        throw hypothesis_error("pinch coefficient " + pair.coefficient +
                               " is not positive definite on this surface");

    PinchQuantities out;
    out.lambda1 = ctx.lambda1_of(setup.T);
    out.volume = field.weights.sum();
    out.trace_t = pair.trace_integral;
    out.center = weighted_center(field);

    const Eigen::VectorXd hs = generalized_mean_curvature_scalar(field, ctx.tensor(setup.S));
    out.hs_norm = lp_norm(hs, field.weights, 2.0 * setup.p);
    out.trace_s_lumped = field.weights.dot(tensor_trace(field, ctx.tensor(setup.S)));

    // Pairing of the recentered position with H_S = hs * nu. Recentering
    // keeps the position field mass-orthogonal to constants, which is what
    // the Rayleigh bound below needs.
    double pairing = 0.0;
    for (int v = 0; v < field.points.rows(); ++v) {
        const Eigen::VectorXd x = field.points.row(v).transpose() - out.center;
        pairing -= field.weights(v) * hs(v) * field.normals.row(v).dot(x);
    }
    out.pairing = pairing;

    Eigen::MatrixXd centered = field.points;
    centered.rowwise() -= out.center.transpose();
    out.x_l2 = lp_norm_rows(centered, field.weights, 2.0);
    out.x_l1 = lp_norm_rows(centered, field.weights, 1.0);
    out.x_linf = lp_norm_rows(centered, field.weights,
                              std::numeric_limits<double>::infinity());

    const TangentialField tang = tangential_part(field);
    out.tang_l2 = tang.l2;
    out.tang_linf = tang.linf;

    const double denom = out.trace_t * out.hs_norm * out.hs_norm * out.volume;
    if (!(denom > 0.0))
        throw hypothesis_error("closeness deficit needs positive trace and curvature norms");
    out.epsilon_raw = 1.0 - out.lambda1 * out.pairing * out.pairing / denom;
    out.epsilon = std::clamp(out.epsilon_raw, 0.0, 1.0);
    out.radius = (std::abs(out.pairing) / out.volume) / out.hs_norm;
    return out;
}

double pinch_epsilon(SurfaceAnalysis& ctx, const PinchSetup& setup) {
    return pinch_quantities(ctx, setup).epsilon;
}

double comparison_radius(SurfaceAnalysis& ctx, const PinchSetup& setup) {
    return pinch_quantities(ctx, setup).radius;
}

LemmaChecks lemma_checks(const PinchQuantities& a, double p) {
    LemmaChecks out;
    const double tol = 1e-9;
    const double eps = a.epsilon;
    out.applicable = a.epsilon_raw < 1.0 && a.x_l2 > 0.0 && a.hs_norm > 0.0;
    if (!out.applicable) return out;

    double worst = -std::numeric_limits<double>::infinity();
    auto upper = [&worst](double lhs, double rhs) {
        // Relative margin of the claim lhs <= rhs; positive means violated.
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        const double margin = (lhs - rhs) / scale;
        worst = std::max(worst, margin);
        return margin;
    };

    const double x2sq = a.x_l2 * a.x_l2;
    const double ta = a.trace_t / (a.lambda1 * a.volume);
    const double sv = a.pairing / a.volume;
    const double sh = (sv / a.hs_norm) * (sv / a.hs_norm);

    bool ok = true;
    ok &= upper(ta * (1.0 - eps) * (1.0 - eps), x2sq) <= tol;
    ok &= upper(x2sq, ta) <= tol;
    ok &= upper(sh * (1.0 - eps) * (1.0 - eps), x2sq) <= tol;
    ok &= upper(x2sq, sh / (1.0 - eps)) <= tol;
    out.position_ok = ok;

    out.tangential_ok =
        upper(a.tang_l2 * a.tang_l2, std::max(a.epsilon_raw, 0.0) * x2sq) <= tol;

    const double expo = p / (2.0 * (p - 1.0));
    out.norm_gap_ok =
        upper(1.0 - a.x_l1 / a.x_l2, 1.0 - std::pow(1.0 - eps, expo)) <= tol;

    out.worst_margin = worst;
    return out;
}

IterationRatios iteration_ratios(SurfaceAnalysis& ctx, const PinchSetup& setup) {
    check_setup(ctx, setup);
    const CurvatureField& field = ctx.field();
    const double n = static_cast<double>(field.dim);
    const PinchQuantities a = pinch_quantities(ctx, setup);

    IterationRatios out;
    out.gamma = n * setup.q / (2.0 * (setup.q - n));
    out.alpha = 1.0 / (2.0 * (out.gamma + 1.0));

    // ||H||_q and ||B||_q with |B| the Frobenius norm of the shape operator.
    Eigen::VectorXd h1(field.points.rows());
    Eigen::VectorXd bnorm(field.points.rows());
    for (int v = 0; v < field.points.rows(); ++v) {
        h1(v) = field.principal.row(v).mean();
        bnorm(v) = field.shapes[static_cast<std::size_t>(v)].norm();
    }
    const double volume = field.weights.sum();
    out.vh_q_n = volume * std::pow(lp_norm(h1, field.weights, setup.q), n);
    out.vb_q_n = volume * std::pow(lp_norm(bnorm, field.weights, setup.q), n);

    const double norm_gap = 1.0 - a.x_l1 / a.x_l2;
    Eigen::MatrixXd centered = field.points;
    centered.rowwise() -= a.center.transpose();
    Eigen::VectorXd rad_dev(field.points.rows());
    for (int v = 0; v < field.points.rows(); ++v)
        rad_dev(v) = std::abs(centered.row(v).norm() - a.x_l2);
    const double rad_sup = rad_dev.maxCoeff();

    const double tiny = 1e-14 * std::max(a.x_l2, 1.0);
    const double g_denom = std::pow(out.vh_q_n, out.gamma / n) * a.x_l2 *
                           std::pow(std::max(norm_gap, 0.0), out.alpha);
    const double c_denom =
        std::pow(out.vb_q_n * a.x_linf, out.gamma / (out.gamma + 1.0)) *
        std::pow(a.tang_l2, 1.0 / (out.gamma + 1.0));
    out.applicable = g_denom > tiny && c_denom > tiny;
    if (out.applicable) {
        out.gamma_hat = rad_sup / g_denom;
        out.c_hat = a.tang_linf / c_denom;
    }
    return out;
}

bool ray_starshaped(const Mesh& mesh, const Eigen::Vector3d& center,
                    int directions, std::uint64_t seed) {
    if (directions < 1)
        throw validation_error("starshapedness needs at least one ray");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<char> hit_once(static_cast<std::size_t>(directions), 0);
    std::atomic<bool> ok{true};
    std::vector<Eigen::Vector3d> dirs(static_cast<std::size_t>(directions));
    for (auto& d : dirs) {
        do {
            d = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        } while (d.norm() < 1e-8);
        d.normalize();
    }

    parallel_for(static_cast<std::size_t>(directions), [&](std::size_t i) {
        const Eigen::Vector3d& d = dirs[i];
        int hits = 0;
        for (const auto& face : mesh.faces) {
            const Eigen::Vector3d& a = mesh.vertices[static_cast<std::size_t>(face[0])];
            const Eigen::Vector3d& b = mesh.vertices[static_cast<std::size_t>(face[1])];
            const Eigen::Vector3d& c = mesh.vertices[static_cast<std::size_t>(face[2])];
            const Eigen::Vector3d e1 = b - a, e2 = c - a;
            const Eigen::Vector3d pv = d.cross(e2);
            const double det = e1.dot(pv);
            if (std::abs(det) < 1e-14) continue;
            const Eigen::Vector3d tv = center - a;
            const double u = tv.dot(pv) / det;
            if (u < 0.0 || u > 1.0) continue;
            const Eigen::Vector3d qv = tv.cross(e1);
            const double v = d.dot(qv) / det;
            if (v < 0.0 || u + v > 1.0) continue;
            const double t = e2.dot(qv) / det;
            if (t > 1e-12) ++hits;
        }
        if (hits != 1) ok.store(false, std::memory_order_relaxed);
    });
    return ok.load();
}

double isometry_distortion(const Mesh& mesh, const Eigen::Vector3d& center,
                           double radius, int pairs, std::uint64_t seed) {
    if (pairs < 1)
        throw validation_error("distortion estimate needs at least one pair");
    if (!(radius > 0.0))
        throw validation_error("distortion estimate needs a positive radius");

    const int nv = mesh.vertex_count();
    std::vector<std::vector<std::pair<int, double>>> adj(
        static_cast<std::size_t>(nv));
    for (const auto& face : mesh.faces) {
        for (int c = 0; c < 3; ++c) {
            const int a = face[static_cast<std::size_t>(c)];
            const int b = face[static_cast<std::size_t>((c + 1) % 3)];
            const double len = (mesh.vertices[static_cast<std::size_t>(a)] -
                                mesh.vertices[static_cast<std::size_t>(b)])
                                   .norm();
            adj[static_cast<std::size_t>(a)].emplace_back(b, len);
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, nv - 1);
    std::vector<std::pair<int, int>> endpoints(static_cast<std::size_t>(pairs));
    for (auto& e : endpoints) {
        e.first = pick(rng);
        do {
            e.second = pick(rng);
        } while (e.second == e.first);
    }

    // One Dijkstra per distinct source covers every requested pair.
    std::vector<int> sources;
    for (const auto& e : endpoints) sources.push_back(e.first);
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

    std::vector<std::vector<double>> dist(sources.size());
    parallel_for(sources.size(), [&](std::size_t si) {
        std::vector<double>& d = dist[si];
        d.assign(static_cast<std::size_t>(nv),
                 std::numeric_limits<double>::infinity());
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        d[static_cast<std::size_t>(sources[si])] = 0.0;
        heap.emplace(0.0, sources[si]);
        while (!heap.empty()) {
            const auto [dv, v] = heap.top();
            heap.pop();
            if (dv > d[static_cast<std::size_t>(v)]) continue;
            for (const auto& [w, len] : adj[static_cast<std::size_t>(v)]) {
                const double cand = dv + len;
                if (cand < d[static_cast<std::size_t>(w)]) {
                    d[static_cast<std::size_t>(w)] = cand;
                    heap.emplace(cand, w);
                }
            }
        }
    });

    double worst = 0.0;
    for (const auto& [s, t] : endpoints) {
        const auto si = static_cast<std::size_t>(
            std::lower_bound(sources.begin(), sources.end(), s) -
            sources.begin());
        const double graph = dist[si][static_cast<std::size_t>(t)];
        if (!std::isfinite(graph))
            throw validation_error("mesh edge graph is disconnected");
        const Eigen::Vector3d u =
            (mesh.vertices[static_cast<std::size_t>(s)] - center).normalized();
        const Eigen::Vector3d v =
            (mesh.vertices[static_cast<std::size_t>(t)] - center).normalized();
        const double angle = std::atan2(u.cross(v).norm(), u.dot(v));
        const double sphere = radius * angle;
        if (sphere < 1e-12) continue;
        worst = std::max(worst, std::abs(graph - sphere) / sphere);
    }
    return worst;
}

PinchReport pinch_report(SurfaceAnalysis& ctx, const PinchSetup& setup) {
    PinchReport out;
    out.s_name = setup.S.name();
    out.t_name = setup.T.name();
    out.p = setup.p;
    out.q = setup.q;
    out.quantities = pinch_quantities(ctx, setup);
    out.lemmas = lemma_checks(out.quantities, setup.p);
    out.ratios = iteration_ratios(ctx, setup);

    const PinchQuantities& a = out.quantities;
    out.radial_dev = radial_deviation(ctx.field(), a.center, a.radius);
    out.hausdorff = hausdorff_to_sphere(ctx.mesh(), a.center, a.radius);
    out.distortion =
        isometry_distortion(ctx.mesh(), a.center, a.radius, 200, 0x5EEDu);
    out.starshaped = ray_starshaped(ctx.mesh(), a.center, 64, 0x5EEDu);
    out.dev_over_r = out.radial_dev / a.radius;
    out.hausdorff_over_r = out.hausdorff / a.radius;
    out.tang_over_r = a.tang_l2 / a.radius;
    return out;
}

FamilyScan family_scan(const FamilySpec& spec, const PinchSetup& setup) {
    FamilyScan out;
    out.setup = setup;
    out.amplitudes = spec.amplitudes;
    for (std::size_t i = 0; i < spec.amplitudes.size(); ++i) {
        SurfaceAnalysis ctx(family_member(spec, static_cast<int>(i)));
        out.rows.push_back(pinch_report(ctx, setup));
    }

    // Power-law fit of dev/r against the deficit on rows where the deficit
    // is resolved above discretization noise but still in the small regime.
    std::vector<double> eps_rows, dev_rows;
    out.c_hat_fit = 0.0;
    const double n = out.rows.empty()
                         ? 2.0
                         : static_cast<double>(out.rows.front().quantities.center.size() - 1);
    const double gamma = n * setup.q / (2.0 * (setup.q - n));
    const double alpha = 1.0 / (2.0 * (gamma + 1.0));
    for (const PinchReport& row : out.rows) {
        const double eps = row.quantities.epsilon;
        eps_rows.push_back(eps);
        dev_rows.push_back(row.dev_over_r);
        if (eps > 1e-9 && eps < 0.5)
            out.c_hat_fit =
                std::max(out.c_hat_fit, row.dev_over_r / std::pow(eps, alpha));
    }
    const PowerLawFit fit = fit_power_law(eps_rows, dev_rows, 1e-9, 0.5);
    out.rows_used = fit.used;
    out.slope = fit.slope;
    out.intercept = fit.intercept;

    out.epsilon_increasing = out.rows.size() >= 2;
    out.dev_decreasing = out.rows.size() >= 2;
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        if (!(out.rows[i].quantities.epsilon >
              out.rows[i - 1].quantities.epsilon))
            out.epsilon_increasing = false;
        if (!(out.rows[i].dev_over_r >= out.rows[i - 1].dev_over_r))
            out.dev_decreasing = false;
    }
    return out;
}

} // namespace geomlab
