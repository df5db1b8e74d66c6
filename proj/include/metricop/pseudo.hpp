#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "metricop/eigensolve.hpp"
#include "metricop/grid.hpp"
#include "metricop/metric.hpp"
#include "metricop/similarity.hpp"

namespace metricop {

// |H*G - GH| / (|H| |G|): how far (H, G) is from the relation H*G = GH.
inline double dieudonne_residual(const ComplexMatrix& h, const MetricOperator& g) {
    require_square(h, "dieudonne_residual");
    if (h.rows() != g.dim()) throw DimensionMismatch("dieudonne_residual: H vs G");
    const double num = operator_norm(h.adjoint() * g.matrix() - g.matrix() * h);
    const double den = operator_norm(h) * g.max_eigenvalue();
    return den > 0.0 ? num / den : num;
}

// The same defect applied to one vector in the quadrature norm; smooth
// probes isolate the stencil Taylor error from the highest grid modes.
inline double dieudonne_action_residual(const ComplexMatrix& h, const MetricOperator& g,
                                        const ComplexVector& phi, const Grid& grid) {
    if (phi.size() != h.rows()) throw DimensionMismatch("dieudonne_action_residual: phi");
    ComplexVector r = h.adjoint() * (g.matrix() * phi) - g.matrix() * (h * phi);
    const double rn = std::sqrt((r.array().abs2() * grid.weights.array()).sum());
    const double fn = std::sqrt((phi.array().abs2() * grid.weights.array()).sum());
    return rn / std::max(fn, 1e-300);
}

struct QuasiHermitianPair {
    ComplexMatrix h;
    MetricOperator g;
    double residual = 0.0;     // dieudonne_residual(h, g)
    double metric_scale = 1.0; // positive scalar the metric was divided by
};

inline QuasiHermitianPair make_quasi_hermitian_pair(ComplexMatrix h, MetricOperator g,
                                                    double metric_scale = 1.0) {
    QuasiHermitianPair pair;
    pair.residual = dieudonne_residual(h, g);
    pair.h = std::move(h);
    pair.g = std::move(g);
    pair.metric_scale = metric_scale;
    return pair;
}

struct PhysicalOptions {
    bool strict = false;      // reject pairs whose residual exceeds strict_tol
    double strict_tol = 1e-8;
    double cluster_tol = -1.0; // forwarded to the spectrum report
};

// h = G^{1/2} H G^{-1/2} with its spectrum: the Hermitian (up to the pair
// residual) operator on the flat space that H represents on H(G).
struct PhysicalSystem {
    ComplexMatrix h;
    ComplexMatrix w; // G^{1/2}
    double hermiticity_residual = 0.0;
    SpectrumReport spectrum;
};

inline PhysicalSystem physical_hamiltonian(const QuasiHermitianPair& pair,
                                           const PhysicalOptions& options = {}) {
    if (options.strict && pair.residual > options.strict_tol)
        throw NotQuasiHermitian("physical_hamiltonian: pair residual " +
                                std::to_string(pair.residual) + " above strict tolerance");
    PhysicalSystem sys;
    sys.w = pair.g.power(0.5);
    sys.h = sys.w * pair.h * pair.g.power(-0.5);
    sys.hermiticity_residual = hermiticity_defect(sys.h);
    sys.spectrum = SpectrumReport::from_matrix(sys.h, options.cluster_tol);
    return sys;
}

// Partial sums of sum_n |H^n phi|_G t^n / n! with the term ratios; the
// ratio trend is the convergence diagnostic and t_star the largest t the
// last step would still tolerate.
struct AnalyticVectorDiagnostic {
    std::vector<double> norms;
    std::vector<double> partial_sums;
    std::vector<double> ratios;
    bool converging = false;
    double t_star = std::numeric_limits<double>::infinity();
};

inline AnalyticVectorDiagnostic analytic_vector_diagnostic(const ComplexMatrix& h,
                                                           const MetricOperator& g,
                                                           const ComplexVector& phi, double t,
                                                           int n_max) {
    require_square(h, "analytic_vector_diagnostic");
    if (phi.size() != h.rows()) throw DimensionMismatch("analytic_vector_diagnostic: phi");
    if (!(t > 0.0)) throw Error("analytic_vector_diagnostic: t must be positive");
    if (n_max < 3) throw Error("analytic_vector_diagnostic: n_max must be at least 3");

    AnalyticVectorDiagnostic diag;
    ComplexVector v = phi;
    double term = space_norm(g, v); // |H^0 phi|_G * t^0 / 0!
    diag.norms.push_back(term);
    diag.partial_sums.push_back(term);
    for (int n = 1; n <= n_max; ++n) {
        v = h * v;
        const double nrm = space_norm(g, v);
        diag.norms.push_back(nrm);
        const double prev = diag.norms[static_cast<size_t>(n - 1)];
        if (prev == 0.0) { // H is nilpotent on phi; the series has terminated
            diag.ratios.push_back(0.0);
            diag.partial_sums.push_back(diag.partial_sums.back());
            continue;
        }
        const double ratio = (nrm * t / static_cast<double>(n)) / prev;
        diag.ratios.push_back(ratio);
        term *= ratio;
        diag.partial_sums.push_back(diag.partial_sums.back() + term);
    }
    diag.converging = !diag.ratios.empty() && diag.ratios.back() < 1.0;
    const double last = diag.norms.back();
    const double before = diag.norms[diag.norms.size() - 2];
    if (last > 0.0)
        diag.t_star = static_cast<double>(n_max) * before / last;
    return diag;
}

namespace detail {

// Fourth-order central stencils. The first difference stays exactly
// antisymmetric and the second exactly symmetric, so H(-alpha) = H(alpha)*
// holds to the bit while the eigenvalue error stays below the acceptance
// tolerances even on moderate grids.
inline void add_band(ComplexMatrix& m, int offset, double value) {
    const Eigen::Index n = m.rows();
    for (Eigen::Index j = std::max(0, -offset); j < n && j + offset < n; ++j)
        if (j + offset >= 0) m(j, j + offset) += value;
}

inline ComplexMatrix first_difference_4(const Grid& grid) {
    ComplexMatrix d = ComplexMatrix::Zero(grid.points, grid.points);
    const double c = 1.0 / (12.0 * grid.dx);
    add_band(d, 1, 8.0 * c);
    add_band(d, -1, -8.0 * c);
    add_band(d, 2, -c);
    add_band(d, -2, c);
    return d;
}

inline ComplexMatrix second_difference_4(const Grid& grid) {
    ComplexMatrix d = ComplexMatrix::Zero(grid.points, grid.points);
    const double c = 1.0 / (12.0 * grid.dx * grid.dx);
    add_band(d, 0, -30.0 * c);
    add_band(d, 1, 16.0 * c);
    add_band(d, -1, 16.0 * c);
    add_band(d, 2, -c);
    add_band(d, -2, -c);
    return d;
}

} // namespace detail

// H = 1/2 (p - i alpha)^2 + 1/2 omega^2 x^2 in expanded form
// -1/2 D2 - alpha D1 - alpha^2/2 + omega^2 x^2 / 2, with the metric
// G = e^{2 alpha x} rescaled by its largest entry.
inline QuasiHermitianPair pt_oscillator(double alpha, double omega, const Grid& grid) {
    if (!(omega > 0.0)) throw Error("pt_oscillator: omega must be positive");
    if (grid.points < 5) throw GridTooCoarse("pt_oscillator: need at least 5 points");
    if (grid.dx * std::max(std::abs(alpha), omega * grid.half_width) > 1.0)
        throw GridTooCoarse("pt_oscillator: dx too large for the requested alpha, omega");

    const Eigen::Index n = grid.points;
    ComplexMatrix h = -0.5 * detail::second_difference_4(grid) -
                      alpha * detail::first_difference_4(grid);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double x = grid.nodes(j);
        h(j, j) += -0.5 * alpha * alpha + 0.5 * omega * omega * x * x;
    }

    double peak = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) peak = std::max(peak, 2.0 * alpha * grid.nodes(j));
    ComplexMatrix gm = ComplexMatrix::Zero(n, n);
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double v = std::exp(2.0 * alpha * grid.nodes(j) - peak);
        gm(j, j) = v;
        smallest = std::min(smallest, v);
    }
    MetricOperator g = make_metric(std::move(gm), 0.5 * smallest, "exp(2ax)/max");
    return make_quasi_hermitian_pair(std::move(h), std::move(g), std::exp(peak));
}

// Lowest fraction of a finite spectrum in the (re, im) order; the slice on
// which discretized eigenvalues track the continuum ones.
inline std::vector<Complex> lowest_interior(std::vector<Complex> values,
                                            double fraction = 1.0 / 3.0) {
    std::sort(values.begin(), values.end(), complex_less);
    size_t keep = static_cast<size_t>(static_cast<double>(values.size()) * fraction);
    keep = std::max<size_t>(keep, 1);
    keep = std::min(keep, values.size());
    values.resize(keep);
    return values;
}

} // namespace metricop
