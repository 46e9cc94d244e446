#pragma once

#include <string>
#include <vector>

#include "geomlab/analysis.hpp"
#include "geomlab/calculus.hpp"

namespace geomlab {

// Coefficient pair and exponents for the closeness analysis. Requires
// p > 1 and q > n.
struct PinchSetup {
    TensorChoice S = TensorChoice::id();
    TensorChoice T = TensorChoice::id();
    double p = 2.0;
    double q = 4.0;
};

// Scalar quantities entering the spectral closeness deficit. The pairing
// integral is the quadrature of -<X, H_S> with X recentered, which agrees
// with int tr S up to discretization but keeps the deficit and the
// constant-free lemma checks exact consequences of one another at the
// discrete level. trace_t is the face-consistent coefficient trace stored
// in the Galerkin pair for the same reason.
struct PinchQuantities {
    double lambda1 = 0.0;       // of L_T
    double pairing = 0.0;       // -int <X, H_S>
    double trace_s_lumped = 0.0; // plain int tr S (diagnostic)
    double trace_t = 0.0;       // face-consistent int tr T
    double hs_norm = 0.0;       // ||H_S||_{2p}
    double volume = 0.0;
    double x_l1 = 0.0, x_l2 = 0.0, x_linf = 0.0;
    double tang_l2 = 0.0, tang_linf = 0.0;
    double epsilon_raw = 0.0;   // 1 - lambda1 pairing^2 / (trace_t hs^2 V)
    double epsilon = 0.0;       // clamped to [0, 1]
    double radius = 0.0;        // (|pairing| / V) / hs_norm
    Eigen::VectorXd center;
};

PinchQuantities pinch_quantities(SurfaceAnalysis& ctx, const PinchSetup& setup);

// The closeness deficit alone (clamped copy in .epsilon).
double pinch_epsilon(SurfaceAnalysis& ctx, const PinchSetup& setup);

// (|int <X, H_S>| / V) / ||H_S||_{2p}, the radius of the comparison sphere.
double comparison_radius(SurfaceAnalysis& ctx, const PinchSetup& setup);

// Constant-free consequences of the deficit definition, each asserted with
// relative tolerance 1e-9 when epsilon_raw < 1:
//  - position bounds: trace_t (1-eps)^2 / (lambda1 V) <= ||X||_2^2
//      <= trace_t / (lambda1 V), and the same pair phrased through the
//      pairing and ||H_S||_{2p};
//  - tangential bound: ||X^T||_2^2 <= eps ||X||_2^2;
//  - norm-gap bound: 1 - ||X||_1 / ||X||_2 <= 1 - (1-eps)^{p/(2(p-1))}.
struct LemmaChecks {
    bool applicable = false;  // epsilon_raw < 1 and denominators nonzero
    bool position_ok = false;
    bool tangential_ok = false;
    bool norm_gap_ok = false;
    double worst_margin = 0.0; // most positive violation, relative
};

LemmaChecks lemma_checks(const PinchQuantities& a, double p);

// Ratio statistics of the sup-norm iteration steps; reported, never
// asserted. Infinity/NaN-free: not_applicable is set when a denominator
// underflows (exact round sphere).
struct IterationRatios {
    double gamma = 0.0;       // nq / (2(q - n))
    double alpha = 0.0;       // 1 / (2(gamma + 1))
    double gamma_hat = 0.0;   // radial sup bound ratio
    double c_hat = 0.0;       // tangential sup bound ratio
    bool applicable = false;
    double vh_q_n = 0.0;      // V ||H||_q^n
    double vb_q_n = 0.0;      // V ||B||_q^n
};

IterationRatios iteration_ratios(SurfaceAnalysis& ctx, const PinchSetup& setup);

// Star-shapedness with respect to the weighted center by seeded
// ray-intersection counting.
bool ray_starshaped(const Mesh& mesh, const Eigen::Vector3d& center,
                    int directions, std::uint64_t seed);

// Worst relative gap between edge-graph geodesics and great-circle
// distances on the comparison sphere over seeded vertex pairs.
double isometry_distortion(const Mesh& mesh, const Eigen::Vector3d& center,
                           double radius, int pairs, std::uint64_t seed);

// Full per-surface closeness report.
struct PinchReport {
    std::string s_name, t_name;
    double p = 0.0, q = 0.0;
    PinchQuantities quantities;
    LemmaChecks lemmas;
    IterationRatios ratios;
    double radial_dev = 0.0;
    double hausdorff = 0.0;
    double distortion = 0.0;
    bool starshaped = false;
    double dev_over_r = 0.0;
    double hausdorff_over_r = 0.0;
    double tang_over_r = 0.0; // ||X^T||_2 / r
};

PinchReport pinch_report(SurfaceAnalysis& ctx, const PinchSetup& setup);

// One row of a family sweep plus the fitted power law of dev/r against the
// deficit. The fit uses rows with epsilon in (1e-9, 0.5); c_hat_fit is the
// smallest constant with dev/r <= c ε^alpha across the used rows.
struct FamilyScan {
    PinchSetup setup;
    std::vector<double> amplitudes;
    std::vector<PinchReport> rows;
    double slope = 0.0;
    double intercept = 0.0;
    double c_hat_fit = 0.0;
    int rows_used = 0;
    bool epsilon_increasing = false;
    bool dev_decreasing = false; // dev/r decreases towards small amplitude
};

FamilyScan family_scan(const FamilySpec& spec, const PinchSetup& setup);

} // namespace geomlab
