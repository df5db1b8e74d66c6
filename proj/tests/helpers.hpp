#pragma once

#include <random>

#include <metricop/metricop.hpp>

namespace testhelp {

using metricop::Complex;
using metricop::ComplexMatrix;
using metricop::ComplexVector;
using metricop::RealVector;

inline ComplexMatrix random_matrix(std::mt19937& rng, Eigen::Index n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = Complex(dist(rng), dist(rng));
    return m;
}

inline ComplexVector random_vector(std::mt19937& rng, Eigen::Index n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexVector v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = Complex(dist(rng), dist(rng));
    return v;
}

inline ComplexMatrix random_hermitian(std::mt19937& rng, Eigen::Index n) {
    ComplexMatrix m = random_matrix(rng, n);
    return 0.5 * (m + m.adjoint().eval());
}

inline ComplexMatrix random_unitary(std::mt19937& rng, Eigen::Index n) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(rng, n));
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    return q;
}

// Positive definite with eigenvalues log-uniform in [e^-2, e^2].
inline ComplexMatrix random_metric_matrix(std::mt19937& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    ComplexMatrix q = random_unitary(rng, n);
    RealVector vals(n);
    for (Eigen::Index k = 0; k < n; ++k) vals(k) = std::exp(dist(rng));
    ComplexMatrix g = q * vals.asDiagonal() * q.adjoint();
    return 0.5 * (g + g.adjoint().eval());
}

// Invertible T with prescribed condition number (singular values geometric
// from 1 down to 1/cond).
inline ComplexMatrix random_conditioned(std::mt19937& rng, Eigen::Index n, double cond) {
    ComplexMatrix u = random_unitary(rng, n);
    ComplexMatrix v = random_unitary(rng, n);
    RealVector sv(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double f = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.0;
        sv(k) = std::pow(cond, -f);
    }
    return u * sv.asDiagonal() * v.adjoint();
}

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    const double den = std::max(1.0, std::max(a.norm(), b.norm()));
    return (a - b).norm() / den;
}

} // namespace testhelp
