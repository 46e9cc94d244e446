#include "geomlab/analysis.hpp"

#include <cmath>
#include <utility>

namespace geomlab {

SurfaceAnalysis::SurfaceAnalysis(Mesh mesh)
    : mesh_(std::move(mesh)), field_(shape_operator(mesh_)) {
    const double arg = std::max(1.0, (mesh_.vertex_count() - 2) / 10.0);
    const double level = std::log(arg) / std::log(4.0);
    allowance_ = std::clamp(0.02 * std::exp2(4.0 - level), 1e-4, 0.16);
}

const NewtonTensorField* SurfaceAnalysis::tensor(const TensorChoice& choice) {
    if (choice.is_identity()) return nullptr;
    const std::string key = choice.name();
    auto it = tensors_.find(key);
    if (it == tensors_.end())
        it = tensors_
                 .emplace(key, std::make_unique<NewtonTensorField>(
                                   newton_tensor(field_, choice.order)))
                 .first;
    return it->second.get();
}

const GalerkinPair& SurfaceAnalysis::pair(const TensorChoice& choice) {
    const std::string key = choice.name();
    auto it = pairs_.find(key);
    if (it == pairs_.end())
        it = pairs_.emplace(key, assemble(mesh_, &field_, tensor(choice))).first;
    return it->second;
}

const Spectrum& SurfaceAnalysis::spectrum_of(const TensorChoice& choice) {
    const std::string key = choice.name();
    auto it = spectra_.find(key);
    if (it == spectra_.end())
        it = spectra_.emplace(key, solve_lowest(pair(choice), 6)).first;
    return it->second;
}

double SurfaceAnalysis::lambda1_of(const TensorChoice& choice) {
    const std::string key = choice.name();
    auto it = lambda1_.find(key);
    if (it == lambda1_.end())
        it = lambda1_.emplace(key, lambda1(spectrum_of(choice))).first;
    return it->second;
}

} // namespace geomlab
