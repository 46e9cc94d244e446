#pragma once

#include <string>
#include <vector>

#include "geomlab/analysis.hpp"
#include "geomlab/inequalities.hpp"
#include "geomlab/pinching.hpp"

namespace geomlab {

// Intrinsic curvature recovered algebraically from the shape operator. For
// a hypersurface of flat space the Ricci tensor is diagonal in the
// principal frame with entries kappa_i (S_1 - kappa_i), so only the
// eigenvalue rows (same column order as CurvatureField::principal) and the
// derived scalars are stored.
struct RicciField {
    int dim = 0;
    Eigen::MatrixXd eigenvalues; // N x n, Ricci in the principal frame
    Eigen::VectorXd scalar;      // R = trace(Ric), per sample
    Eigen::VectorXd minimum;     // smallest Ricci eigenvalue per sample
    Eigen::VectorXd weights;     // quadrature weights copied from the field

    int count() const { return static_cast<int>(weights.size()); }
    double volume() const { return weights.sum(); }
    double average_scalar() const {
        return weights.dot(scalar) / weights.sum();
    }
};

RicciField ricci_from_gauss(const CurvatureField& field);

// Volume-normalized L^p norms of the two Ricci deficits, pointwise
// Frobenius in the orthonormal frame: the gap to the constant trace part
// (rbar / n) g and the gap to the pointwise trace part (R / n) g.
struct DeficitNorms {
    double p = 0.0;
    double mean_deficit = 0.0;      // ||Ric - (rbar/n) g||_p
    double traceless_deficit = 0.0; // ||Ric - (R/n) g||_p
    double rbar = 0.0;              // (1/V) int R
};

DeficitNorms deficit_norms(const RicciField& ric, double p);

// Largest pointwise violation of the split
//   |Ric - (rbar/n) g|^2 = |Ric - (R/n) g|^2 + (R - rbar)^2 / n,
// scaled by max(1, lhs) so the answer stays meaningful at any curvature
// magnitude.
double decomposition_check(const RicciField& ric);

// Comparison of the two deficits in integral form. At p = 2 the dimensional
// constant n^2 / (n-2)^2 multiplies the right side and the report is
// certified; at any other exponent no explicit constant is available, so
// only the constant-free ratio is reported. Requires n >= 3 (the traceless
// part vanishes identically in dimension two); Ricci negative somewhere
// only clears the hypothesis flag.
InequalityReport almost_schur_check(const RicciField& ric, double p);

// First-eigenvalue gap against the Lichnerowicz-type threshold
// rbar / (n - 1) alongside the Ricci deficit that controls it.
struct AubryReport {
    double s = 0.0;         // norm exponent is 2s
    bool applicable = false; // lambda_1 was available
    double lambda1 = 0.0;
    double rbar = 0.0;
    double gap = 0.0;       // lambda1 - rbar / (n - 1)
    double deficit = 0.0;   // ||Ric - (rbar/n) g||_{2s}
    double ratio_hat = 0.0; // max(0, -gap) / deficit, 0 near zero deficit
    double gate_lhs = 0.0;  // (1/V) int ((n - 1) - ric_min)_+^{2s}
    std::string note;
};

// Requires s > max(1, n/4). The ratio is an empirical stand-in for the
// constant in the lower bound; it is reported, never asserted. gate_lhs
// records the size of the negative part of ric_min - (n - 1) entering the
// smallness hypothesis, whose admissible threshold is not explicit.
AubryReport aubry_deficit(SurfaceAnalysis& ctx, double s);

// Almost-Einstein closeness report: deficit norms and the normalized
// deficit eps_einstein = ||Ric - (rbar/n) g||_p / rbar, the algebraic
// identities tying R to H_2, the scalar-curvature chain inequality, sphere
// distances pulled from the closeness analysis run with S = T_1 and norm
// exponent p, and the almost-Schur and eigenvalue-gap sub-reports.
struct EinsteinReport {
    double p = 0.0;
    double q = 0.0;
    bool rbar_positive = false;
    bool scalar_nonnegative = false;
    double rbar = 0.0;
    double mean_deficit = 0.0;
    double traceless_deficit = 0.0;
    double eps_einstein = 0.0;
    double decomposition = 0.0;  // max split violation
    double gauss_identity = 0.0; // max scaled |R - n(n-1) H_2|
    bool chain_applicable = false;
    bool chain_ok = false;    // ||H_1||_1^2 >= ((1/V) int sqrt(H_2)_+)^2
    double chain_lhs = 0.0;
    double chain_rhs = 0.0;
    double radius = 0.0;
    double dev_over_r = 0.0;
    double hausdorff_over_r = 0.0;
    double pinch_epsilon = 0.0;
    InequalityReport schur;  // at exponent 2
    AubryReport aubry;       // at s = p / 2
};

// Requires p > max(2, n/2) and q > n. Hypothesis failures (rbar <= 0 or R
// negative somewhere) are flagged and the report is still emitted.
EinsteinReport einstein_report(SurfaceAnalysis& ctx, double p, double q);

// Family sweep of einstein_report with the fitted power law of the
// Hausdorff distance ratio against eps_einstein. Fit and smallest-constant
// scan use rows with eps_einstein in (1e-9, 0.5); the reference exponent is
// alpha = 1 / (2 (gamma + 1)) with gamma = n q / (2 (q - n)).
struct EinsteinScan {
    double p = 0.0;
    double q = 0.0;
    std::vector<double> amplitudes;
    std::vector<EinsteinReport> rows;
    double alpha = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double c_hat_fit = 0.0;
    int rows_used = 0;
    bool epsilon_increasing = false;
};

EinsteinScan einstein_family_scan(const FamilySpec& spec, double p, double q);

} // namespace geomlab
