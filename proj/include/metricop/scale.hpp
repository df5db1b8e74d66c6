#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "metricop/growth.hpp"
#include "metricop/grid.hpp"
#include "metricop/metric.hpp"

namespace metricop {

enum class ScaleMode { g_power, r_power };

// A finite sample of the scale of spaces H_alpha with norms |base^{alpha/2} xi|.
// In r_power mode the base is 1 + G, which is always >= 1; g_power mode keeps
// G itself and is reserved for G >= 1.
struct ScaleFamily {
    MetricOperator base;
    ScaleMode mode = ScaleMode::g_power;
    bool auto_switched = false;
    std::string warning;
    std::vector<double> exponents;
    std::vector<ComplexMatrix> operators;

    Eigen::Index index_of(double alpha) const {
        for (size_t k = 0; k < exponents.size(); ++k)
            if (std::abs(exponents[k] - alpha) <= 1e-12) return static_cast<Eigen::Index>(k);
        throw Error("ScaleFamily: exponent " + std::to_string(alpha) + " not in family");
    }

    const ComplexMatrix& op(double alpha) const {
        return operators[static_cast<size_t>(index_of(alpha))];
    }

    // |base^{alpha/2} xi| without touching the materialized powers.
    double norm_at(double alpha, const ComplexVector& xi) const {
        return base.apply_power(0.5 * alpha, xi).norm();
    }
};

inline std::vector<double> default_alpha_grid() {
    return {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
}

inline ScaleFamily build_scale(const MetricOperator& g, std::vector<double> exponents,
                               ScaleMode mode = ScaleMode::g_power) {
    std::sort(exponents.begin(), exponents.end());
    exponents.erase(std::unique(exponents.begin(), exponents.end(),
                                [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                    exponents.end());
    for (double a : exponents)
        if (!std::isfinite(a)) throw Error("build_scale: non-finite exponent");

    ScaleFamily fam;
    fam.mode = mode;
    if (mode == ScaleMode::g_power && g.min_eigenvalue() < 1.0 - 1e-12) {
        fam.mode = ScaleMode::r_power;
        fam.auto_switched = true;
        fam.warning = "base has eigenvalues below 1; switched to the 1+G scale";
    }
    fam.base = (fam.mode == ScaleMode::r_power) ? r_of(g) : g;
    fam.exponents = std::move(exponents);
    fam.operators.reserve(fam.exponents.size());
    for (double a : fam.exponents) fam.operators.push_back(fam.base.power(a));
    return fam;
}

// The generalized Cauchy-Schwarz check for the dual pair (H_alpha, H_-alpha):
// |<f, g>| <= |base^{alpha/2} f| * |base^{-alpha/2} g|.
struct DualityPair {
    double norm_plus = 0.0;
    double norm_minus = 0.0;
    Complex pairing{0.0, 0.0};
    double slack = 0.0;
    bool ok = false;
};

inline DualityPair duality_pair(const ScaleFamily& fam, double alpha, const ComplexVector& f,
                                const ComplexVector& g) {
    DualityPair out;
    out.norm_plus = fam.norm_at(alpha, f);
    out.norm_minus = fam.norm_at(-alpha, g);
    out.pairing = (f.array() * g.conjugate().array()).sum();
    out.slack = out.norm_plus * out.norm_minus - std::abs(out.pairing);
    const double scale = std::max(1.0, out.norm_plus * out.norm_minus);
    out.ok = out.slack >= -1e-10 * scale;
    return out;
}

using MetricRecipe = std::function<MetricOperator(const Grid&)>;
using VectorRecipe = std::function<ComplexVector(const Grid&)>;

// One row per alpha: quadrature norms |G^{alpha/2} xi|_w at every refinement
// level plus the fitted growth exponent. Divergence of a row as the domain
// grows is the finite stand-in for "xi leaves H_alpha in the continuum".
struct GrowthRow {
    double alpha = 0.0;
    std::vector<double> norms;
    GrowthFit fit;
};

struct GrowthTable {
    std::vector<double> sizes;        // fit abscissa per level
    std::vector<Eigen::Index> dims;   // grid points per level
    std::vector<GrowthRow> rows;      // one per alpha, ascending
};

inline GrowthTable end_space_diagnostic(const RefinementFamily& family, const MetricRecipe& base,
                                        std::vector<double> alphas, const VectorRecipe& xi) {
    if (family.levels.size() < 3)
        throw InsufficientLevels("end_space_diagnostic: need at least 3 levels");
    std::sort(alphas.begin(), alphas.end());
    GrowthTable table;
    table.sizes = growth_abscissa(family);

    std::vector<MetricOperator> bases;
    std::vector<ComplexVector> vectors;
    for (const Grid& grid : family.levels) {
        bases.push_back(base(grid));
        vectors.push_back(xi(grid));
        table.dims.push_back(grid.points);
    }
    for (double a : alphas) {
        GrowthRow row;
        row.alpha = a;
        for (size_t lvl = 0; lvl < family.levels.size(); ++lvl) {
            ComplexVector powered = bases[lvl].apply_power(0.5 * a, vectors[lvl]);
            row.norms.push_back(weighted_norm(family.levels[lvl], powered));
        }
        row.fit = fit_log_growth(table.sizes, row.norms);
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace metricop
