#pragma once

#include <string>
#include <vector>

#include "geomlab/analysis.hpp"

namespace geomlab {

// One eigenvalue bound instance. ratio = lhs / rhs; certified means the
// hypotheses hold and lhs <= rhs * (1 + tolerance), where the tolerance is
// the analysis tolerance (1e-6 plus the discretization allowance).
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double tolerance = 0.0;
    bool hypotheses_ok = true;
    std::string note;
    bool certified = false;
};

// lambda1(L_T) (int tr S)^2 <= (int tr T) int |H_S|^2.
InequalityReport reilly_general(SurfaceAnalysis& ctx, const TensorChoice& S,
                                const TensorChoice& T);

// lambda1 V <= int |B|^2.
InequalityReport bleecker_weiner(SurfaceAnalysis& ctx);

// lambda1 V^2 <= n V int H^2.
InequalityReport reilly_h(SurfaceAnalysis& ctx);

// lambda1 (int H_r)^2 <= n V int H_{r+1}^2.
InequalityReport reilly_hr(SurfaceAnalysis& ctx, int r);

// lambda1(L_r) (int H_s)^2 <= c(r) int H_r int H_{s+1}^2.
InequalityReport alias_malacarne(SurfaceAnalysis& ctx, int r, int s);

// lambda1(L_r) int H_r <= c(r) int H_{r+1}^2.
InequalityReport acr(SurfaceAnalysis& ctx, int r);

// lambda1(L_T) int tr T <= int |H_T|^2.
InequalityReport corollary_st(SurfaceAnalysis& ctx, const TensorChoice& T);

// The full battery over S, T in {id, t1} and r, s in {0, 1}.
std::vector<InequalityReport> verify_suite(SurfaceAnalysis& ctx);

} // namespace geomlab
