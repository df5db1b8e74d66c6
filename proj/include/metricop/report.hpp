#pragma once

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "metricop/lattice.hpp"
#include "metricop/pip.hpp"
#include "metricop/pseudo.hpp"
#include "metricop/scale.hpp"
#include "metricop/similarity.hpp"

namespace metricop {

using Json = nlohmann::json;

inline constexpr const char* tool_version = "0.1.0";

inline Json provenance_block(const Json& tolerances, double wall_ms) {
    return Json{{"version", tool_version}, {"tolerances", tolerances}, {"wall_ms", wall_ms}};
}

// Write-then-rename so readers never observe a half-written report.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("atomic_write: cannot open " + tmp.string());
        out << content;
        if (!out) throw Error("atomic_write: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline Json lattice_to_json(const SpaceLattice& lat) {
    Json nodes = Json::array();
    for (const LatticeNode& n : lat.nodes)
        nodes.push_back({{"label", n.label},
                         {"min_eigenvalue", n.op.min_eigenvalue()},
                         {"max_eigenvalue", n.op.max_eigenvalue()}});
    Json edges = Json::array();
    for (const LatticeEdge& e : lat.edges)
        edges.push_back({{"from", e.from}, {"to", e.to}, {"constant", e.constant}});
    return Json{{"nodes", nodes}, {"edges", edges}, {"extremes", lat.extremes}};
}

inline Json growth_fit_to_json(const GrowthFit& fit) {
    return Json{{"slope", fit.slope}, {"rms_residual", fit.rms_residual}};
}

inline Json growth_table_to_json(const GrowthTable& table) {
    Json rows = Json::array();
    for (const GrowthRow& r : table.rows)
        rows.push_back(
            {{"alpha", r.alpha}, {"norms", r.norms}, {"fit", growth_fit_to_json(r.fit)}});
    return Json{{"sizes", table.sizes}, {"dims", table.dims}, {"rows", rows}};
}

inline std::string growth_table_to_csv(const GrowthTable& table) {
    std::ostringstream out;
    out << "alpha,level,dim,norm,fitted_exponent\n";
    out.precision(17);
    for (const GrowthRow& r : table.rows)
        for (size_t lvl = 0; lvl < r.norms.size(); ++lvl)
            out << r.alpha << ',' << lvl << ',' << table.dims[lvl] << ',' << r.norms[lvl] << ','
                << r.fit.slope << '\n';
    return out.str();
}

inline Json scale_to_json(const ScaleFamily& fam) {
    return Json{{"mode", fam.mode == ScaleMode::r_power ? "r_power" : "g_power"},
                {"auto_switched", fam.auto_switched},
                {"warning", fam.warning},
                {"exponents", fam.exponents},
                {"dim", fam.base.dim()}};
}

inline Json spectrum_to_json(const SpectrumReport& rep) {
    Json clusters = Json::array();
    for (const EigenCluster& c : rep.clusters)
        clusters.push_back(
            {{"re", c.value.real()}, {"im", c.value.imag()}, {"multiplicity", c.multiplicity}});
    return Json{{"clusters", clusters},
                {"dimension", rep.dimension},
                {"cluster_tol", rep.cluster_tol}};
}

inline std::string spectrum_to_csv(const SpectrumReport& rep) {
    std::ostringstream out;
    out << "re,im,multiplicity\n";
    out.precision(17);
    for (const EigenCluster& c : rep.clusters)
        out << c.value.real() << ',' << c.value.imag() << ',' << c.multiplicity << '\n';
    return out.str();
}

inline Json verdict_to_json(const SimilarityVerdict& v) {
    Json out{{"class", to_string(v.cls)},
             {"intertwine_residual", v.intertwine_residual},
             {"cond_t", v.cond_t == std::numeric_limits<double>::infinity() ? Json("inf")
                                                                            : Json(v.cond_t)}};
    out["unitarity_defect"] = v.unitarity_defect == std::numeric_limits<double>::infinity()
                                  ? Json("inf")
                                  : Json(v.unitarity_defect);
    return out;
}

inline Json inclusion_to_json(const InclusionReport& rep) {
    Json entries = Json::array();
    for (const InclusionEntry& e : rep.entries)
        entries.push_back({{"a_re", e.a_value.real()},
                           {"a_im", e.a_value.imag()},
                           {"b_re", e.b_value.real()},
                           {"b_im", e.b_value.imag()},
                           {"distance", e.distance},
                           {"mult_a", e.mult_a},
                           {"mult_b", e.mult_b},
                           {"ok", e.ok}});
    return Json{{"entries", entries}, {"holds", rep.holds}, {"tol", rep.tol}};
}

inline Json jay_to_json(const JayMap& map) {
    Json entries = Json::array();
    for (const JayEntry& e : map.entries)
        entries.push_back({{"alpha", e.alpha},
                           {"beta", e.beta},
                           {"norms", e.norms},
                           {"fit", growth_fit_to_json(e.fit)},
                           {"verdict", e.bounded ? "bounded" : "growing"}});
    return Json{{"alpha_grid", map.alpha_grid},
                {"sizes", map.sizes},
                {"entries", entries},
                {"growth_threshold", map.options.threshold},
                {"residual_cap", map.options.residual_cap},
                {"diagonal_bounded", map.diagonal_bounded()},
                {"diagonal_symmetric", map.diagonal_symmetric()}};
}

inline std::string jay_to_csv(const JayMap& map) {
    std::ostringstream out;
    out << "alpha,beta,level,size,norm,fitted_exponent,verdict\n";
    out.precision(17);
    for (const JayEntry& e : map.entries)
        for (size_t lvl = 0; lvl < e.norms.size(); ++lvl)
            out << e.alpha << ',' << e.beta << ',' << lvl << ',' << map.sizes[lvl] << ','
                << e.norms[lvl] << ',' << e.fit.slope << ','
                << (e.bounded ? "bounded" : "growing") << '\n';
    return out.str();
}

inline Json klmn_certificate_to_json(const KlmnCertificate& cert) {
    Json levels = Json::array();
    for (const KlmnLevel& l : cert.levels)
        levels.push_back({{"dim", l.dim},
                          {"min_singular_value", l.min_sv},
                          {"herm_residual", l.herm_residual},
                          {"lambda_distance", l.lambda_distance}});
    return Json{{"lambda", cert.lambda},
                {"floor", cert.floor},
                {"herm_tol", cert.herm_tol},
                {"levels", levels},
                {"min_singular_value", cert.min_sv_overall},
                {"max_herm_residual", cert.max_herm_residual},
                {"min_lambda_distance", cert.min_lambda_distance},
                {"verdict", cert.pass ? "pass" : "fail"}};
}

inline Json klmn_applicability_to_json(const KlmnApplicabilityReport& rep) {
    Json out{{"verdict", to_string(rep.verdict)},
             {"g1_fit", growth_fit_to_json(rep.g1_fit)},
             {"g2_fit", growth_fit_to_json(rep.g2_fit)},
             {"g1_bounded", rep.g1_bounded},
             {"g2_bounded", rep.g2_bounded}};
    if (rep.embedding_fit) {
        out["embedding_constants"] = rep.embedding_constants;
        out["embedding_fit"] = growth_fit_to_json(*rep.embedding_fit);
    }
    return out;
}

inline Json physical_to_json(const QuasiHermitianPair& pair, const PhysicalSystem& sys) {
    return Json{{"dieudonne_residual", pair.residual},
                {"metric_scale", pair.metric_scale},
                {"hermiticity_residual", sys.hermiticity_residual},
                {"spectrum", spectrum_to_json(sys.spectrum)}};
}

} // namespace metricop
