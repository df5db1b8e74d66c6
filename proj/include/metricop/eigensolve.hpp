#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "metricop/matrix.hpp"

namespace metricop {

// Lexicographic order on complex numbers: by real part, then imaginary.
// All eigenvalue lists in this library are reported in this order.
inline bool complex_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

struct HermitianEigenResult {
    RealVector eigenvalues;    // ascending
    ComplexMatrix eigenvectors; // columns, orthonormal
};

struct HermitianEigenOptions {
    double hermiticity_tol = 1e-10;
};

// Eigendecomposition of a Hermitian matrix. The contract is the residual,
// not the algorithm: |M - V diag(w) V*| <= n * 1e-12 * max(1, |M|).
inline HermitianEigenResult hermitian_eigen(const ComplexMatrix& m,
                                            const HermitianEigenOptions& opts = {}) {
    require_square(m, "hermitian_eigen");
    if (!all_finite(m)) throw NotHermitian("hermitian_eigen: non-finite entry");
    const double defect = hermiticity_defect(m);
    if (defect > opts.hermiticity_tol)
        throw NotHermitian("hermitian_eigen: hermiticity defect " + std::to_string(defect) +
                           " exceeds tolerance");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("hermitian_eigen: solver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// All singular values, descending.
inline RealVector singular_values(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return RealVector(0);
    if (!all_finite(m)) throw NoConvergence("singular_values: non-finite entry");
    if (std::min(m.rows(), m.cols()) < 32) {
        Eigen::JacobiSVD<ComplexMatrix> svd(m);
        return svd.singularValues();
    }
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

inline double operator_norm(const ComplexMatrix& m) {
    RealVector sv = singular_values(m);
    return sv.size() == 0 ? 0.0 : sv(0);
}

inline double min_singular_value(const ComplexMatrix& m) {
    RealVector sv = singular_values(m);
    return sv.size() == 0 ? 0.0 : sv(sv.size() - 1);
}

struct GeneralEigenOptions {
    // Max eigenpair residual |Mv - lambda v| / max(1, |M|_F), v normalized.
    double residual_tol = 1e-8;
};

// Eigenvalues of a general square matrix, sorted lexicographically by
// (real, imag). Each reported eigenpair is validated against residual_tol.
inline std::vector<Complex> general_eigenvalues(const ComplexMatrix& m,
                                                const GeneralEigenOptions& opts = {}) {
    require_square(m, "general_eigenvalues");
    if (!all_finite(m)) throw NoConvergence("general_eigenvalues: non-finite entry");
    if (m.rows() == 0) return {};
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
    if (solver.info() != Eigen::Success)
        throw NoConvergence("general_eigenvalues: solver did not converge");
    const double scale = std::max(1.0, m.norm());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        ComplexVector v = solver.eigenvectors().col(k);
        const double nv = v.norm();
        if (nv == 0.0) throw NoConvergence("general_eigenvalues: zero eigenvector");
        worst = std::max(worst, (m * v - solver.eigenvalues()(k) * v).norm() / (nv * scale));
    }
    if (worst > opts.residual_tol)
        throw NoConvergence("general_eigenvalues: eigenpair residual " + std::to_string(worst) +
                            " exceeds tolerance");
    std::vector<Complex> vals(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + m.rows());
    std::sort(vals.begin(), vals.end(), complex_less);
    return vals;
}

struct EigenCluster {
    Complex value;    // mean of members
    int multiplicity; // number of members
};

// Group a lexicographically sorted eigenvalue list into clusters: a value
// joins the current cluster when within tol of its running mean.
inline std::vector<EigenCluster> cluster_eigenvalues(const std::vector<Complex>& sorted_values,
                                                     double tol) {
    std::vector<EigenCluster> clusters;
    for (std::size_t k = 0; k < sorted_values.size(); ++k) {
        const Complex v = sorted_values[k];
        if (!clusters.empty() && std::abs(v - clusters.back().value) <= tol) {
            auto& c = clusters.back();
            c.value = (c.value * static_cast<double>(c.multiplicity) + v) /
                      static_cast<double>(c.multiplicity + 1);
            c.multiplicity += 1;
        } else {
            clusters.push_back({v, 1});
        }
    }
    return clusters;
}

// Functional calculus power of a Hermitian, strictly positive matrix:
// V diag(w^alpha) V*. Throws NotPositive when min eigenvalue <= floor.
// floor < 0 selects the default 1e-12 * max|eigenvalue|.
inline ComplexMatrix matrix_power(const ComplexMatrix& g, double alpha, double floor = -1.0) {
    HermitianEigenResult eig = hermitian_eigen(g);
    const Eigen::Index n = g.rows();
    if (n == 0) return g;
    const double top = std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(n - 1)));
    const double eff_floor = floor >= 0.0 ? floor : 1e-12 * top;
    if (eig.eigenvalues(0) <= eff_floor)
        throw NotPositive("matrix_power: min eigenvalue " + std::to_string(eig.eigenvalues(0)) +
                          " at or below floor " + std::to_string(eff_floor));
    RealVector powered(n);
    for (Eigen::Index k = 0; k < n; ++k) powered(k) = std::pow(eig.eigenvalues(k), alpha);
    ComplexMatrix out = eig.eigenvectors * powered.asDiagonal() *
                        eig.eigenvectors.adjoint();
    out = 0.5 * (out + out.adjoint().eval()); // keep the result exactly Hermitian
    return out;
}

} // namespace metricop
