#pragma once

#include <cmath>
#include <vector>

#include "metricop/errors.hpp"
#include "metricop/grid.hpp"

namespace metricop {

// Least-squares slope of log(value) against log(size), with the RMS of the
// log-residuals. This is the detector for "grows like a power of the domain
// size" versus "stays bounded" across a refinement family.
struct GrowthFit {
    double slope = 0.0;
    double rms_residual = 0.0;
};

struct GrowthOptions {
    double threshold = 0.1;    // max slope still called bounded
    double residual_cap = 0.2; // max fit RMS for the slope to be trusted
};

// Abscissa for growth fits: the half-widths when they increase level to
// level (domain-growth families), otherwise the interval counts
// (fixed-domain halving families).
inline std::vector<double> growth_abscissa(const RefinementFamily& family) {
    bool l_grows = true;
    for (size_t k = 0; k + 1 < family.levels.size(); ++k)
        if (!(family.levels[k + 1].half_width > family.levels[k].half_width)) l_grows = false;
    std::vector<double> out;
    out.reserve(family.levels.size());
    for (const Grid& g : family.levels)
        out.push_back(l_grows ? g.half_width : static_cast<double>(g.points - 1));
    return out;
}

inline GrowthFit fit_log_growth(const std::vector<double>& sizes,
                                const std::vector<double>& values) {
    if (sizes.size() != values.size())
        throw DimensionMismatch("fit_log_growth: sizes vs values");
    if (sizes.size() < 3)
        throw InsufficientLevels("fit_log_growth: need at least 3 levels");
    const size_t n = sizes.size();
    std::vector<double> xs(n), ys(n);
    for (size_t k = 0; k < n; ++k) {
        if (!(sizes[k] > 0.0)) throw Error("fit_log_growth: sizes must be positive");
        if (!std::isfinite(values[k]) || values[k] < 0.0)
            throw Error("fit_log_growth: values must be finite and nonnegative");
        xs[k] = std::log(sizes[k]);
        ys[k] = std::log(std::max(values[k], 1e-300));
    }
    double mx = 0.0, my = 0.0;
    for (size_t k = 0; k < n; ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t k = 0; k < n; ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    if (sxx <= 0.0) throw Error("fit_log_growth: abscissa is constant");
    GrowthFit fit;
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (size_t k = 0; k < n; ++k) {
        const double r = ys[k] - (intercept + fit.slope * xs[k]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

inline bool is_bounded_growth(const GrowthFit& fit, const GrowthOptions& opts = {}) {
    return fit.slope <= opts.threshold && fit.rms_residual <= opts.residual_cap;
}

} // namespace metricop
