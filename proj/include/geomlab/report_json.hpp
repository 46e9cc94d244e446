#pragma once

#include <string>
#include <vector>

#include "geomlab/einstein.hpp"
#include "geomlab/inequalities.hpp"
#include "geomlab/pinching.hpp"
#include "geomlab/stability.hpp"

namespace geomlab {

// Report serialization. Every JSON document carries "schema": "geomlab/1"
// and a "kind" naming the producing command. Entries that participate in
// the exit-code contract carry "asserted": true; fitted diagnostics with no
// explicit constant carry false and never fail a run. Output is
// deterministic: doubles print as shortest round-trip decimals in JSON and
// as %.17g fields in CSV.

struct MeshMeta {
    std::string source; // file path or generator description
    int vertices = 0;
    int faces = 0;
    double area = 0.0;
    double volume = 0.0;
    int level = -1; // generator refinement level, -1 when unknown
};

MeshMeta mesh_meta(const Mesh& mesh, const std::string& source,
                   int level = -1);

std::string gen_json(const MeshMeta& meta);

// Summary statistics of the curvature field (ranges of the principal
// curvatures and integrals of H_1, H_2).
std::string curvature_json(const MeshMeta& meta, const CurvatureField& field);

// Per-sample table: index, principal curvatures, H_1, H_2, weight.
std::string curvature_csv(const CurvatureField& field);

std::string spectrum_json(const MeshMeta& meta, const std::string& tensor,
                          const Spectrum& spectrum);

std::string suite_json(const MeshMeta& meta,
                       const std::vector<InequalityReport>& entries,
                       double lambda1_residual);

std::string pinch_json(const MeshMeta& meta, const PinchReport& report);

std::string stability_json(const MeshMeta& meta,
                           const StabilityReport& report);

std::string einstein_json(const MeshMeta& meta, const EinsteinReport& report);

std::string pinch_scan_json(const FamilyScan& scan);
std::string pinch_scan_csv(const FamilyScan& scan);
std::string einstein_scan_json(const EinsteinScan& scan);
std::string einstein_scan_csv(const EinsteinScan& scan);

// Writes to a temporary file next to path and renames on success, so a
// failed run never leaves a partial file. Throws error on I/O failure.
void write_text_atomic(const std::string& path, const std::string& text);

} // namespace geomlab
