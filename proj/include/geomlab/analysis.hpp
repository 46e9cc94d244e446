#pragma once

#include <map>
#include <memory>
#include <string>

#include "geomlab/curvature.hpp"
#include "geomlab/spectral.hpp"
#include "geomlab/surface.hpp"

namespace geomlab {

// Per-surface cache shared by the verification drivers: curvature field plus
// Galerkin pairs, spectra and first eigenvalues keyed by coefficient choice.
class SurfaceAnalysis {
public:
    // Keeps its own copy of the mesh so callers may pass temporaries.
    explicit SurfaceAnalysis(Mesh mesh);

    const Mesh& mesh() const { return mesh_; }
    const CurvatureField& field() const { return field_; }
    const NewtonTensorField* tensor(const TensorChoice& choice);
    const GalerkinPair& pair(const TensorChoice& choice);
    const Spectrum& spectrum_of(const TensorChoice& choice);
    double lambda1_of(const TensorChoice& choice);

    // Certification slack: 1e-6 plus a discretization allowance of 0.02 at
    // refinement level 4, halved per extra level (estimated from the vertex
    // count of a geodesic-sphere-like mesh).
    double allowance() const { return allowance_; }
    double tolerance() const { return 1e-6 + allowance_; }

    // Plain surface integral under the lumped weights.
    double integral(const Eigen::VectorXd& values) const {
        return field_.weights.dot(values);
    }

private:
    Mesh mesh_;
    CurvatureField field_;
    double allowance_;
    std::map<std::string, std::unique_ptr<NewtonTensorField>> tensors_;
    std::map<std::string, GalerkinPair> pairs_;
    std::map<std::string, Spectrum> spectra_;
    std::map<std::string, double> lambda1_;
};

} // namespace geomlab
