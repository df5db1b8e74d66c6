#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "metricop/metric.hpp"

namespace metricop {

// Uniform grid on [-L, L] with trapezoidal quadrature weights. Nodes are
// computed as (2j - (N-1)) * (L / (N-1)) so the set is symmetric about 0
// to the last bit for both parities of N.
struct Grid {
    double half_width = 0.0;
    int points = 0;
    double dx = 0.0;
    RealVector nodes;
    RealVector weights;

    static Grid uniform(double half_width, int points) {
        if (half_width <= 0.0) throw Error("Grid: half_width must be positive");
        if (points < 3) throw GridTooCoarse("Grid: need at least 3 points");
        Grid g;
        g.half_width = half_width;
        g.points = points;
        g.dx = 2.0 * half_width / static_cast<double>(points - 1);
        g.nodes.resize(points);
        g.weights.resize(points);
        const double step = half_width / static_cast<double>(points - 1);
        for (int j = 0; j < points; ++j) {
            g.nodes(j) = (2.0 * j - (points - 1)) * step;
            g.weights(j) = (j == 0 || j == points - 1) ? 0.5 * g.dx : g.dx;
        }
        return g;
    }
};

// Quadrature inner product, linear in the first argument.
inline Complex weighted_inner(const Grid& grid, const ComplexVector& u, const ComplexVector& v) {
    if (u.size() != grid.points || v.size() != grid.points)
        throw DimensionMismatch("weighted_inner: vector length");
    return (u.array() * v.conjugate().array() * grid.weights.array().cast<Complex>()).sum();
}

inline double weighted_norm(const Grid& grid, const ComplexVector& u) {
    return std::sqrt(std::max(0.0, weighted_inner(grid, u, u).real()));
}

// A sequence of grids emulating the continuum limit: N roughly doubles
// level to level while L grows by a fixed increment (possibly zero).
struct RefinementFamily {
    std::string base_recipe;
    std::vector<Grid> levels;

    static RefinementFamily desk_default(std::string base_recipe = "") {
        RefinementFamily f;
        f.base_recipe = std::move(base_recipe);
        f.levels = {Grid::uniform(10.0, 401), Grid::uniform(14.0, 801), Grid::uniform(20.0, 1601)};
        return f;
    }

    // Fixed L, N doubling: N, 2N-1, 4N-3, ... (odd stays odd).
    static RefinementFamily halving(double half_width, int points0, int n_levels,
                                    std::string base_recipe = "") {
        if (n_levels < 3) throw InsufficientLevels("RefinementFamily: need at least 3 levels");
        RefinementFamily f;
        f.base_recipe = std::move(base_recipe);
        int n = points0;
        for (int k = 0; k < n_levels; ++k) {
            f.levels.push_back(Grid::uniform(half_width, n));
            n = 2 * n - 1;
        }
        return f;
    }

    static RefinementFamily growing(double half_width0, double dL, int points0, int n_levels,
                                    std::string base_recipe = "") {
        if (n_levels < 3) throw InsufficientLevels("RefinementFamily: need at least 3 levels");
        RefinementFamily f;
        f.base_recipe = std::move(base_recipe);
        double L = half_width0;
        int n = points0;
        for (int k = 0; k < n_levels; ++k) {
            f.levels.push_back(Grid::uniform(L, n));
            L += dL;
            n = 2 * n - 1;
        }
        return f;
    }
};

// Diagonal matrix of weight(x_j).
inline ComplexMatrix multiplication_op(const Grid& grid, const std::function<double(double)>& weight) {
    ComplexMatrix m = ComplexMatrix::Zero(grid.points, grid.points);
    for (int j = 0; j < grid.points; ++j) {
        const double w = weight(grid.nodes(j));
        if (!std::isfinite(w)) throw NonFiniteWeight("multiplication_op: weight at x = " +
                                                     std::to_string(grid.nodes(j)));
        m(j, j) = w;
    }
    return m;
}

inline ComplexMatrix position_op(const Grid& grid) {
    return multiplication_op(grid, [](double x) { return x; });
}

enum class DerivativeScheme { central_antisymmetric, spectral };

// First derivative with implicit zero extension beyond the endpoints.
// Both schemes yield exactly antisymmetric matrices, so the discrete
// spectrum stays on the imaginary axis like the continuum operator's.
inline ComplexMatrix derivative_op(const Grid& grid,
                                   DerivativeScheme scheme = DerivativeScheme::central_antisymmetric) {
    if (grid.points < 5) throw GridTooCoarse("derivative_op: need at least 5 points");
    const int n = grid.points;
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    if (scheme == DerivativeScheme::central_antisymmetric) {
        const double c = 1.0 / (2.0 * grid.dx);
        for (int j = 0; j + 1 < n; ++j) {
            d(j, j + 1) = c;
            d(j + 1, j) = -c;
        }
    } else {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (j == k) continue;
                const int m = j - k;
                const double sign = (m % 2 == 0) ? 1.0 : -1.0;
                d(j, k) = sign / (static_cast<double>(m) * grid.dx);
            }
        }
    }
    return d;
}

// Symmetric second difference (zero extension): tridiag(1, -2, 1)/dx^2.
inline ComplexMatrix second_difference(const Grid& grid) {
    if (grid.points < 5) throw GridTooCoarse("second_difference: need at least 5 points");
    const int n = grid.points;
    const double c = 1.0 / (grid.dx * grid.dx);
    ComplexMatrix d2 = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        d2(j, j) = -2.0 * c;
        if (j + 1 < n) {
            d2(j, j + 1) = c;
            d2(j + 1, j) = c;
        }
    }
    return d2;
}

// (I - D2)^{1/2}: the grid Sobolev metric. I - D2 >= I, so the square
// root is taken on eigenvalues >= 1 and the result is >= I.
inline MetricOperator sobolev_metric(const Grid& grid) {
    ComplexMatrix base = ComplexMatrix::Identity(grid.points, grid.points) - second_difference(grid);
    base = 0.5 * (base + base.adjoint().eval());
    return make_metric(matrix_power(base, 0.5), -1.0, "sobolev");
}

// (I + A^2)^{1/2} for Hermitian A; always >= I.
inline MetricOperator ga_metric(const ComplexMatrix& a) {
    require_square(a, "ga_metric");
    if (hermiticity_defect(a) > 1e-10) throw NotHermitian("ga_metric: A must be Hermitian");
    HermitianEigenResult eig = hermitian_eigen(a);
    RealVector mapped(a.rows());
    for (Eigen::Index k = 0; k < a.rows(); ++k)
        mapped(k) = std::sqrt(1.0 + eig.eigenvalues(k) * eig.eigenvalues(k));
    ComplexMatrix g = eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
    g = 0.5 * (g + g.adjoint().eval());
    return make_metric(std::move(g), -1.0, "(1+A^2)^1/2");
}

// phi(x) = e^{-x^2/2} / pi^{1/4}, renormalized to unit quadrature norm.
inline ComplexVector normalized_gaussian(const Grid& grid) {
    ComplexVector phi(grid.points);
    const double c = std::pow(M_PI, -0.25);
    for (int j = 0; j < grid.points; ++j)
        phi(j) = c * std::exp(-0.5 * grid.nodes(j) * grid.nodes(j));
    return phi / weighted_norm(grid, phi);
}

// Rank-one pair: P = phi <., phi>_w, A f = <(1+Q^2) f, phi>_w (1+Q^2)^{-1} phi,
// T = (1+Q^2)^{-1}. A T = T P holds by construction up to roundoff.
struct ProjectorPair {
    ComplexMatrix p;
    ComplexMatrix a;
    ComplexMatrix t;
    ComplexVector phi;
};

inline ProjectorPair projector_pair(const Grid& grid, const ComplexVector& phi) {
    if (phi.size() != grid.points) throw DimensionMismatch("projector_pair: phi length");
    const double nrm = weighted_norm(grid, phi);
    if (std::abs(nrm - 1.0) > 1e-10)
        throw NotNormalized("projector_pair: |phi|_w = " + std::to_string(nrm));
    const int n = grid.points;
    RealVector q(n); // 1 + x^2
    for (int j = 0; j < n; ++j) q(j) = 1.0 + grid.nodes(j) * grid.nodes(j);

    ProjectorPair out;
    out.phi = phi;
    ComplexVector p_row = grid.weights.cast<Complex>().cwiseProduct(phi.conjugate());
    out.p = phi * p_row.transpose();
    ComplexVector v(n), a_row(n);
    for (int j = 0; j < n; ++j) {
        v(j) = phi(j) / q(j);
        a_row(j) = grid.weights(j) * q(j) * std::conj(phi(j));
    }
    out.a = v * a_row.transpose();
    out.t = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) out.t(j, j) = 1.0 / q(j);
    return out;
}

// First-derivative pair: B = d/dx, A = B - 2x/(1+x^2), T = (1+Q^2)^{-1},
// with T A ~ B T up to the discretization error of the central stencil.
struct DerivativePair {
    ComplexMatrix a;
    ComplexMatrix b;
    ComplexMatrix t;
};

// Matrix-free action of the derivative-pair A, for grids too fine to hold
// a dense matrix. Matches the dense construction entry for entry.
inline ComplexVector apply_derivative_pair_a(const Grid& grid, const ComplexVector& f) {
    if (f.size() != grid.points) throw DimensionMismatch("apply_derivative_pair_a: length");
    if (grid.points < 5) throw GridTooCoarse("apply_derivative_pair_a: need at least 5 points");
    const int n = grid.points;
    const double c = 1.0 / (2.0 * grid.dx);
    ComplexVector out(n);
    for (int j = 0; j < n; ++j) {
        Complex d = Complex(0.0, 0.0);
        if (j + 1 < n) d += c * f(j + 1);
        if (j - 1 >= 0) d -= c * f(j - 1);
        const double x = grid.nodes(j);
        out(j) = d - (2.0 * x / (1.0 + x * x)) * f(j);
    }
    return out;
}

inline DerivativePair derivative_pair(const Grid& grid) {
    DerivativePair out;
    out.b = derivative_op(grid, DerivativeScheme::central_antisymmetric);
    out.a = out.b - multiplication_op(grid, [](double x) { return 2.0 * x / (1.0 + x * x); });
    out.t = ComplexMatrix::Zero(grid.points, grid.points);
    for (int j = 0; j < grid.points; ++j)
        out.t(j, j) = 1.0 / (1.0 + grid.nodes(j) * grid.nodes(j));
    return out;
}

} // namespace metricop
