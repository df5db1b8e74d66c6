#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "metricop/growth.hpp"
#include "metricop/grid.hpp"
#include "metricop/metric.hpp"
#include "metricop/scale.hpp"

namespace metricop {

using OperatorRecipe = std::function<ComplexMatrix(const Grid&)>;

namespace detail {

// Exact zeros off the diagonal; used to route grid multiplication
// operators through entrywise arithmetic instead of dense factorizations.
inline bool is_diagonal(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (r != c && m(r, c) != Complex(0.0, 0.0)) return false;
    return true;
}

inline bool is_real_diagonal(const ComplexMatrix& m) {
    if (!is_diagonal(m)) return false;
    for (Eigen::Index k = 0; k < m.rows(); ++k)
        if (m(k, k).imag() != 0.0) return false;
    return true;
}

} // namespace detail

// |G^{alpha/2} A G^{-beta/2}|: the norm of A viewed as a map H(G^beta) ->
// H(G^alpha). Diagonal triples reduce to a scan over entries.
inline double representative_norm(const ComplexMatrix& a, const MetricOperator& g, double alpha,
                                  double beta) {
    require_square(a, "representative_norm");
    if (a.rows() != g.dim()) throw DimensionMismatch("representative_norm: A vs G");
    if (g.diagonal()) {
        const bool a_diagonal = detail::is_diagonal(a);
        if (a_diagonal) {
            double best = 0.0;
            for (Eigen::Index k = 0; k < a.rows(); ++k) {
                const double gk = g.matrix()(k, k).real();
                best = std::max(best, std::pow(gk, 0.5 * alpha) * std::abs(a(k, k)) *
                                          std::pow(gk, -0.5 * beta));
            }
            return best;
        }
    }
    return operator_norm(g.power(0.5 * alpha) * a * g.power(-0.5 * beta));
}

// One (alpha, beta) cell of the boundedness map: the representative norms
// across refinement levels and the growth verdict.
struct JayEntry {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> norms;
    GrowthFit fit;
    bool bounded = false;
};

struct JayMap {
    std::vector<double> alpha_grid;
    std::vector<double> sizes;
    std::vector<JayEntry> entries; // row-major over alpha_grid x alpha_grid
    GrowthOptions options;

    const JayEntry& entry(double alpha, double beta) const {
        for (const JayEntry& e : entries)
            if (std::abs(e.alpha - alpha) <= 1e-12 && std::abs(e.beta - beta) <= 1e-12) return e;
        throw Error("JayMap: no entry for the requested pair");
    }

    // s(A): the alphas whose diagonal cell (alpha, alpha) is bounded.
    std::vector<double> diagonal_bounded() const {
        std::vector<double> out;
        for (double a : alpha_grid)
            if (entry(a, a).bounded) out.push_back(a);
        return out;
    }

    // Is s(A) closed under alpha -> -alpha (expected for A = A*)?
    bool diagonal_symmetric() const {
        for (double a : alpha_grid) {
            bool has_neg = false;
            for (double b : alpha_grid)
                if (std::abs(b + a) <= 1e-12) has_neg = true;
            if (!has_neg) continue;
            if (entry(a, a).bounded != entry(-a, -a).bounded) return false;
        }
        return true;
    }
};

inline JayMap jay_scan(const OperatorRecipe& a_recipe, const MetricRecipe& g_recipe,
                       std::vector<double> alpha_grid, const RefinementFamily& family,
                       const GrowthOptions& options = {}) {
    if (family.levels.size() < 3) throw InsufficientLevels("jay_scan: need at least 3 levels");
    std::sort(alpha_grid.begin(), alpha_grid.end());
    JayMap map;
    map.alpha_grid = alpha_grid;
    map.options = options;
    map.sizes = growth_abscissa(family);

    std::vector<ComplexMatrix> as;
    std::vector<MetricOperator> gs;
    for (const Grid& grid : family.levels) {
        as.push_back(a_recipe(grid));
        gs.push_back(g_recipe(grid));
    }
    for (double alpha : alpha_grid) {
        for (double beta : alpha_grid) {
            JayEntry e;
            e.alpha = alpha;
            e.beta = beta;
            for (size_t lvl = 0; lvl < family.levels.size(); ++lvl)
                e.norms.push_back(representative_norm(as[lvl], gs[lvl], alpha, beta));
            e.fit = fit_log_growth(map.sizes, e.norms);
            e.bounded = is_bounded_growth(e.fit, options);
            map.entries.push_back(std::move(e));
        }
    }
    return map;
}

// The partial inner product <G^{alpha/2} f, G^{-alpha/2} g>_w per level,
// with the compatibility verdict: both factor norms must stay bounded
// across the family for the pairing to survive the continuum limit.
struct CompatibilityReport {
    double alpha = 0.0;
    std::vector<Complex> values;
    std::vector<double> f_norms;
    std::vector<double> g_norms;
    GrowthFit f_fit;
    GrowthFit g_fit;
    bool compatible = false;

    Complex value() const { return values.empty() ? Complex(0.0, 0.0) : values.back(); }
};

inline CompatibilityReport compatibility(const VectorRecipe& f, const VectorRecipe& g,
                                         const MetricRecipe& base, double alpha,
                                         const RefinementFamily& family,
                                         const GrowthOptions& options = {}) {
    if (family.levels.size() < 3)
        throw InsufficientLevels("compatibility: need at least 3 levels");
    CompatibilityReport rep;
    rep.alpha = alpha;
    std::vector<double> sizes = growth_abscissa(family);
    for (const Grid& grid : family.levels) {
        MetricOperator gop = base(grid);
        ComplexVector fv = gop.apply_power(0.5 * alpha, f(grid));
        ComplexVector gv = gop.apply_power(-0.5 * alpha, g(grid));
        rep.values.push_back(weighted_inner(grid, fv, gv));
        rep.f_norms.push_back(weighted_norm(grid, fv));
        rep.g_norms.push_back(weighted_norm(grid, gv));
    }
    rep.f_fit = fit_log_growth(sizes, rep.f_norms);
    rep.g_fit = fit_log_growth(sizes, rep.g_norms);
    rep.compatible = is_bounded_growth(rep.f_fit, options) && is_bounded_growth(rep.g_fit, options);
    return rep;
}

// Per-level evidence that (A - lambda) viewed H(G^{-1}) -> H(G) is
// invertible: the smallest singular value of G^{1/2}(A - lambda)G^{1/2},
// plus the self-adjointness residual of A and dist(lambda, sigma(A)).
struct KlmnLevel {
    Eigen::Index dim = 0;
    double min_sv = 0.0;
    double herm_residual = 0.0;
    double lambda_distance = 0.0;
};

struct KlmnCertificate {
    double lambda = 0.0;
    double floor = 0.0;
    double herm_tol = 0.0;
    std::vector<KlmnLevel> levels;
    double min_sv_overall = 0.0;
    double max_herm_residual = 0.0;
    double min_lambda_distance = 0.0;
    bool pass = false;
};

struct KlmnOptions {
    double floor = 1e-6;     // uniform lower bound demanded of the min singular value
    double herm_tol = 1e-10; // relative hermiticity tolerance on A
};

inline KlmnCertificate klmn_restrict(const OperatorRecipe& a_recipe, const MetricRecipe& g_recipe,
                                     double lambda, const RefinementFamily& family,
                                     const KlmnOptions& options = {}) {
    KlmnCertificate cert;
    cert.lambda = lambda;
    cert.floor = options.floor;
    cert.herm_tol = options.herm_tol;
    cert.min_sv_overall = std::numeric_limits<double>::infinity();
    cert.min_lambda_distance = std::numeric_limits<double>::infinity();
    for (const Grid& grid : family.levels) {
        ComplexMatrix a = a_recipe(grid);
        require_square(a, "klmn_restrict");
        const double defect = hermiticity_defect(a);
        if (defect > options.herm_tol)
            throw NotSymmetric("klmn_restrict: A is not Hermitian (defect " +
                               std::to_string(defect) + ")");
        MetricOperator g = g_recipe(grid);
        if (a.rows() != g.dim()) throw DimensionMismatch("klmn_restrict: A vs G");

        KlmnLevel lvl;
        lvl.dim = a.rows();
        if (g.diagonal() && detail::is_real_diagonal(a)) {
            // Entrywise route: G^{1/2}(A - lambda)G^{1/2} is diagonal with
            // entries g_j (a_jj - lambda), so the singular values are their
            // moduli and the spectrum of A is its diagonal. Exact, and it
            // keeps large grids out of dense SVD territory.
            lvl.herm_residual = 0.0;
            double min_sv = std::numeric_limits<double>::infinity();
            double dist = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < a.rows(); ++k) {
                const double gap = std::abs(a(k, k).real() - lambda);
                min_sv = std::min(min_sv, g.matrix()(k, k).real() * gap);
                dist = std::min(dist, gap);
            }
            lvl.min_sv = min_sv;
            lvl.lambda_distance = dist;
        } else {
            lvl.herm_residual = operator_norm(a - a.adjoint());
            ComplexMatrix half = g.power(0.5);
            ComplexMatrix rep =
                half * (a - lambda * ComplexMatrix::Identity(a.rows(), a.rows())) * half;
            lvl.min_sv = min_singular_value(rep);

            ComplexMatrix herm_a = 0.5 * (a + a.adjoint().eval());
            HermitianEigenResult eig = hermitian_eigen(herm_a);
            double dist = std::numeric_limits<double>::infinity();
            for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k)
                dist = std::min(dist, std::abs(eig.eigenvalues(k) - lambda));
            lvl.lambda_distance = dist;
        }

        cert.min_sv_overall = std::min(cert.min_sv_overall, lvl.min_sv);
        cert.max_herm_residual = std::max(cert.max_herm_residual, lvl.herm_residual);
        cert.min_lambda_distance = std::min(cert.min_lambda_distance, lvl.lambda_distance);
        cert.levels.push_back(lvl);
    }
    cert.pass = !cert.levels.empty() && cert.min_sv_overall >= options.floor;
    return cert;
}

enum class KlmnApplicability {
    applies_with_inclusion,
    applies_unconditionally,
    does_not_apply,
};

inline const char* to_string(KlmnApplicability v) {
    switch (v) {
        case KlmnApplicability::applies_with_inclusion: return "applies-with-inclusion";
        case KlmnApplicability::applies_unconditionally: return "applies-unconditionally";
        case KlmnApplicability::does_not_apply: return "does-not-apply";
    }
    return "does-not-apply";
}

struct KlmnApplicabilityReport {
    KlmnApplicability verdict = KlmnApplicability::does_not_apply;
    GrowthFit g1_fit;
    GrowthFit g2_fit;
    bool g1_bounded = false;
    bool g2_bounded = false;
    std::vector<double> embedding_constants;
    std::optional<GrowthFit> embedding_fit;
};

// The three-way case split on the boundedness types of the two metric
// families. "Bounded family" means the operator norms stay bounded across
// refinement; in the mixed cases the verdict is unconditional, and for
// matching types everything rides on the embedding H(G1) -> H(G2).
inline KlmnApplicabilityReport klmn_applicability(const MetricRecipe& g1_recipe,
                                                  const MetricRecipe& g2_recipe,
                                                  const RefinementFamily& family,
                                                  const GrowthOptions& options = {}) {
    if (family.levels.size() < 3)
        throw VerdictUnavailable("klmn_applicability: need at least 3 levels");
    KlmnApplicabilityReport rep;
    std::vector<double> sizes = growth_abscissa(family);
    std::vector<double> n1, n2;
    std::vector<MetricOperator> g1s, g2s;
    for (const Grid& grid : family.levels) {
        g1s.push_back(g1_recipe(grid));
        g2s.push_back(g2_recipe(grid));
        n1.push_back(g1s.back().max_eigenvalue());
        n2.push_back(g2s.back().max_eigenvalue());
    }
    rep.g1_fit = fit_log_growth(sizes, n1);
    rep.g2_fit = fit_log_growth(sizes, n2);
    rep.g1_bounded = is_bounded_growth(rep.g1_fit, options);
    rep.g2_bounded = is_bounded_growth(rep.g2_fit, options);

    if (!rep.g1_bounded && rep.g2_bounded) {
        rep.verdict = KlmnApplicability::applies_unconditionally;
        return rep;
    }
    if (rep.g1_bounded && !rep.g2_bounded) {
        rep.verdict = KlmnApplicability::does_not_apply;
        return rep;
    }
    for (size_t lvl = 0; lvl < family.levels.size(); ++lvl)
        rep.embedding_constants.push_back(embedding_constant(g1s[lvl], g2s[lvl]));
    rep.embedding_fit = fit_log_growth(sizes, rep.embedding_constants);
    rep.verdict = is_bounded_growth(*rep.embedding_fit, options)
                      ? KlmnApplicability::applies_with_inclusion
                      : KlmnApplicability::does_not_apply;
    return rep;
}

} // namespace metricop
