#include "geomlab/report_json.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace geomlab {

namespace {

using json = nlohmann::ordered_json;

json document(const char* kind) {
    json doc;
    doc["schema"] = "geomlab/1";
    doc["kind"] = kind;
    return doc;
}

json meta_block(const MeshMeta& meta) {
    json m;
    m["source"] = meta.source;
    m["vertices"] = meta.vertices;
    m["faces"] = meta.faces;
    m["area"] = meta.area;
    m["volume"] = meta.volume;
    if (meta.level >= 0) m["level"] = meta.level;
    return m;
}

json inequality_block(const InequalityReport& r) {
    json e;
    e["name"] = r.name;
    e["lhs"] = r.lhs;
    e["rhs"] = r.rhs;
    e["ratio"] = r.ratio;
    e["slack"] = r.rhs * (1.0 + r.tolerance) - r.lhs;
    e["tolerance"] = r.tolerance;
    e["certified"] = r.certified;
    e["hypotheses"] = r.hypotheses_ok;
    e["notes"] = r.note;
    e["asserted"] = r.hypotheses_ok;
    return e;
}

json aubry_block(const AubryReport& a) {
    json e;
    e["s"] = a.s;
    e["applicable"] = a.applicable;
    e["lambda1"] = a.lambda1;
    e["rbar"] = a.rbar;
    e["gap"] = a.gap;
    e["deficit"] = a.deficit;
    e["ratio_hat"] = a.ratio_hat;
    e["gate_lhs"] = a.gate_lhs;
    if (!a.note.empty()) e["notes"] = a.note;
    e["asserted"] = false;
    return e;
}

json quantities_block(const PinchQuantities& q) {
    json e;
    e["lambda1"] = q.lambda1;
    e["pairing"] = q.pairing;
    e["trace_s_lumped"] = q.trace_s_lumped;
    e["trace_t"] = q.trace_t;
    e["hs_norm"] = q.hs_norm;
    e["volume"] = q.volume;
    e["x_l1"] = q.x_l1;
    e["x_l2"] = q.x_l2;
    e["x_linf"] = q.x_linf;
    e["tang_l2"] = q.tang_l2;
    e["tang_linf"] = q.tang_linf;
    e["epsilon_raw"] = q.epsilon_raw;
    e["epsilon"] = q.epsilon;
    e["radius"] = q.radius;
    e["center"] = std::vector<double>(q.center.data(),
                                      q.center.data() + q.center.size());
    return e;
}

json pinch_block(const PinchReport& r) {
    json e;
    e["S"] = r.s_name;
    e["T"] = r.t_name;
    e["p"] = r.p;
    e["q"] = r.q;
    e["quantities"] = quantities_block(r.quantities);
    json lem;
    lem["applicable"] = r.lemmas.applicable;
    lem["position_ok"] = r.lemmas.position_ok;
    lem["tangential_ok"] = r.lemmas.tangential_ok;
    lem["norm_gap_ok"] = r.lemmas.norm_gap_ok;
    lem["worst_margin"] = r.lemmas.worst_margin;
    lem["asserted"] = true;
    e["lemmas"] = lem;
    json rat;
    rat["gamma"] = r.ratios.gamma;
    rat["alpha"] = r.ratios.alpha;
    rat["gamma_hat"] = r.ratios.gamma_hat;
    rat["c_hat"] = r.ratios.c_hat;
    rat["applicable"] = r.ratios.applicable;
    rat["v_hq_n"] = r.ratios.vh_q_n;
    rat["v_bq_n"] = r.ratios.vb_q_n;
    rat["asserted"] = false;
    e["ratios"] = rat;
    e["radial_dev"] = r.radial_dev;
    e["hausdorff"] = r.hausdorff;
    e["distortion"] = r.distortion;
    e["starshaped"] = r.starshaped;
    e["dev_over_r"] = r.dev_over_r;
    e["hausdorff_over_r"] = r.hausdorff_over_r;
    e["tang_over_r"] = r.tang_over_r;
    return e;
}

json einstein_block(const EinsteinReport& r) {
    json e;
    e["p"] = r.p;
    e["q"] = r.q;
    e["rbar"] = r.rbar;
    e["rbar_positive"] = r.rbar_positive;
    e["scalar_nonnegative"] = r.scalar_nonnegative;
    e["mean_deficit"] = r.mean_deficit;
    e["traceless_deficit"] = r.traceless_deficit;
    e["eps_einstein"] = r.eps_einstein;
    e["decomposition"] = r.decomposition;
    e["gauss_identity"] = r.gauss_identity;
    json chain;
    chain["applicable"] = r.chain_applicable;
    chain["ok"] = r.chain_ok;
    chain["lhs"] = r.chain_lhs;
    chain["rhs"] = r.chain_rhs;
    chain["asserted"] = true;
    e["chain"] = chain;
    e["radius"] = r.radius;
    e["dev_over_r"] = r.dev_over_r;
    e["hausdorff_over_r"] = r.hausdorff_over_r;
    e["pinch_epsilon"] = r.pinch_epsilon;
    e["schur"] = inequality_block(r.schur);
    e["aubry"] = aubry_block(r.aubry);
    return e;
}

std::string field(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

MeshMeta mesh_meta(const Mesh& mesh, const std::string& source, int level) {
    MeshMeta meta;
    meta.source = source;
    meta.vertices = mesh.vertex_count();
    meta.faces = mesh.face_count();
    meta.area = area(mesh);
    meta.volume = enclosed_volume(mesh);
    meta.level = level;
    return meta;
}

std::string gen_json(const MeshMeta& meta) {
    json doc = document("gen");
    doc["mesh"] = meta_block(meta);
    return doc.dump(2) + "\n";
}

std::string curvature_json(const MeshMeta& meta,
                           const CurvatureField& field_data) {
    json doc = document("curvature");
    doc["mesh"] = meta_block(meta);
    const Eigen::VectorXd h1 = higher_mean_curvature(field_data, 1);
    const Eigen::VectorXd h2 = higher_mean_curvature(field_data, 2);
    json s;
    s["dim"] = field_data.dim;
    s["samples"] = field_data.count();
    s["kappa_min"] = field_data.principal.minCoeff();
    s["kappa_max"] = field_data.principal.maxCoeff();
    s["h1_integral"] = field_data.weights.dot(h1);
    s["h2_integral"] = field_data.weights.dot(h2);
    doc["curvature"] = s;
    return doc.dump(2) + "\n";
}

std::string curvature_csv(const CurvatureField& field_data) {
    const Eigen::VectorXd h1 = higher_mean_curvature(field_data, 1);
    const Eigen::VectorXd h2 = higher_mean_curvature(field_data, 2);
    std::string out = "index";
    for (int j = 0; j < field_data.dim; ++j) {
        out += ",kappa_" + std::to_string(j + 1);
    }
    out += ",h1,h2,weight\n";
    for (int i = 0; i < field_data.count(); ++i) {
        out += std::to_string(i);
        for (int j = 0; j < field_data.dim; ++j) {
            out += "," + field(field_data.principal(i, j));
        }
        out += "," + field(h1(i)) + "," + field(h2(i)) + "," +
               field(field_data.weights(i)) + "\n";
    }
    return out;
}

std::string spectrum_json(const MeshMeta& meta, const std::string& tensor,
                          const Spectrum& spectrum) {
    json doc = document("spectrum");
    doc["mesh"] = meta_block(meta);
    doc["tensor"] = tensor;
    doc["values"] = std::vector<double>(
        spectrum.values.data(),
        spectrum.values.data() + spectrum.values.size());
    doc["residuals"] = std::vector<double>(
        spectrum.residuals.data(),
        spectrum.residuals.data() + spectrum.residuals.size());
    doc["zero_threshold"] = spectrum.zero_threshold;
    return doc.dump(2) + "\n";
}

std::string suite_json(const MeshMeta& meta,
                       const std::vector<InequalityReport>& entries,
                       double lambda1_residual) {
    json doc = document("verify");
    json m = meta_block(meta);
    m["lambda1_residual"] = lambda1_residual;
    doc["mesh"] = m;
    json list = json::array();
    for (const InequalityReport& r : entries) {
        list.push_back(inequality_block(r));
    }
    doc["entries"] = list;
    return doc.dump(2) + "\n";
}

std::string pinch_json(const MeshMeta& meta, const PinchReport& report) {
    json doc = document("pinch");
    doc["mesh"] = meta_block(meta);
    doc["pinch"] = pinch_block(report);
    return doc.dump(2) + "\n";
}

std::string stability_json(const MeshMeta& meta,
                           const StabilityReport& report) {
    json doc = document("stability");
    doc["mesh"] = meta_block(meta);
    json s;
    s["r"] = report.r;
    s["mu_min"] = report.mu_min;
    s["deficit"] = report.deficit;
    s["curvature_positive"] = report.curvature_positive;
    s["constancy"] = report.constancy;
    json chain;
    chain["applicable"] = report.chain_applicable;
    chain["ok"] = report.chain_ok;
    chain["lhs"] = report.chain_lhs;
    chain["rhs"] = report.chain_rhs;
    chain["asserted"] = true;
    s["chain"] = chain;
    doc["stability"] = s;
    return doc.dump(2) + "\n";
}

std::string einstein_json(const MeshMeta& meta,
                          const EinsteinReport& report) {
    json doc = document("einstein");
    doc["mesh"] = meta_block(meta);
    doc["einstein"] = einstein_block(report);
    return doc.dump(2) + "\n";
}

std::string pinch_scan_json(const FamilyScan& scan) {
    json doc = document("scan-pinch");
    doc["S"] = scan.setup.S.name();
    doc["T"] = scan.setup.T.name();
    doc["p"] = scan.setup.p;
    doc["q"] = scan.setup.q;
    json rows = json::array();
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        json row = pinch_block(scan.rows[i]);
        row["t"] = scan.amplitudes[i];
        rows.push_back(row);
    }
    doc["rows"] = rows;
    json fit;
    fit["slope"] = scan.slope;
    fit["intercept"] = scan.intercept;
    fit["c_hat_fit"] = scan.c_hat_fit;
    fit["rows_used"] = scan.rows_used;
    fit["epsilon_increasing"] = scan.epsilon_increasing;
    fit["dev_decreasing"] = scan.dev_decreasing;
    doc["fit"] = fit;
    return doc.dump(2) + "\n";
}

std::string pinch_scan_csv(const FamilyScan& scan) {
    std::string out =
        "t,epsilon,dev_over_r,tang_inf_over_r,hausdorff_over_r,gamma,alpha,"
        "VHq,VBq\n";
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const PinchReport& r = scan.rows[i];
        const double radius = r.quantities.radius;
        const double tang_inf =
            radius > 0.0 ? r.quantities.tang_linf / radius : 0.0;
        out += field(scan.amplitudes[i]) + "," +
               field(r.quantities.epsilon) + "," + field(r.dev_over_r) + "," +
               field(tang_inf) + "," + field(r.hausdorff_over_r) + "," +
               field(r.ratios.gamma) + "," + field(r.ratios.alpha) + "," +
               field(r.ratios.vh_q_n) + "," + field(r.ratios.vb_q_n) + "\n";
    }
    out += "# fit slope=" + field(scan.slope) +
           " intercept=" + field(scan.intercept) +
           " c_hat=" + field(scan.c_hat_fit) +
           " rows_used=" + std::to_string(scan.rows_used) + "\n";
    return out;
}

std::string einstein_scan_json(const EinsteinScan& scan) {
    json doc = document("scan-einstein");
    doc["p"] = scan.p;
    doc["q"] = scan.q;
    json rows = json::array();
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        json row = einstein_block(scan.rows[i]);
        row["t"] = scan.amplitudes[i];
        rows.push_back(row);
    }
    doc["rows"] = rows;
    json fit;
    fit["alpha"] = scan.alpha;
    fit["slope"] = scan.slope;
    fit["intercept"] = scan.intercept;
    fit["c_hat_fit"] = scan.c_hat_fit;
    fit["rows_used"] = scan.rows_used;
    fit["epsilon_increasing"] = scan.epsilon_increasing;
    doc["fit"] = fit;
    return doc.dump(2) + "\n";
}

std::string einstein_scan_csv(const EinsteinScan& scan) {
    std::string out =
        "t,eps_E,hausdorff_over_r,dev_over_r,schur_ratio,aubry_gap,"
        "deficit_2s\n";
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
        const EinsteinReport& r = scan.rows[i];
        out += field(scan.amplitudes[i]) + "," + field(r.eps_einstein) + "," +
               field(r.hausdorff_over_r) + "," + field(r.dev_over_r) + "," +
               field(r.schur.ratio) + "," + field(r.aubry.gap) + "," +
               field(r.aubry.deficit) + "\n";
    }
    out += "# fit alpha=" + field(scan.alpha) +
           " slope=" + field(scan.slope) +
           " intercept=" + field(scan.intercept) +
           " c_hat=" + field(scan.c_hat_fit) +
           " rows_used=" + std::to_string(scan.rows_used) + "\n";
    return out;
}

void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw error("cannot open " + tmp + " for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out.flush()) throw error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw error("cannot rename " + tmp + " to " + path);
    }
}

} // namespace geomlab
