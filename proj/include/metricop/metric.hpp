#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "metricop/eigensolve.hpp"
#include "metricop/matrix.hpp"

namespace metricop {

// A metric operator: Hermitian, strictly positive, with everywhere-defined
// inverse at the working floor. Construction validates both properties.
// Diagonal matrices (exact zeros off the diagonal, exactly real diagonal)
// take an entrywise fast path for powers and inverses, so lattice algebra
// on grid multiplication operators is exact scalar arithmetic.
class MetricOperator {
  public:
    MetricOperator() = default;

    static constexpr double default_floor_rel = 1e-12;
    static constexpr double default_hermiticity_tol = 1e-10;

    // floor < 0 selects the default positivity floor 1e-12 * |G|.
    static MetricOperator make(ComplexMatrix m, double floor = -1.0, std::string label = "") {
        require_square(m, "make_metric");
        if (!all_finite(m)) throw Error("make_metric: non-finite entry");
        MetricOperator g;
        g.mat_ = std::move(m);
        g.label_ = std::move(label);
        const Eigen::Index n = g.mat_.rows();
        g.diagonal_ = detect_diagonal(g.mat_);
        if (g.diagonal_) {
            g.diag_ = g.mat_.diagonal().real();
            g.min_eig_ = n == 0 ? 0.0 : g.diag_.minCoeff();
            g.max_eig_ = n == 0 ? 0.0 : g.diag_.maxCoeff();
        } else {
            if (hermiticity_defect(g.mat_) > default_hermiticity_tol)
                throw NotHermitian("make_metric: matrix is not Hermitian");
            HermitianEigenResult eig = hermitian_eigen(g.mat_);
            g.eigvals_ = std::move(eig.eigenvalues);
            g.eigvecs_ = std::move(eig.eigenvectors);
            g.min_eig_ = n == 0 ? 0.0 : g.eigvals_(0);
            g.max_eig_ = n == 0 ? 0.0 : g.eigvals_(n - 1);
        }
        const double top = std::max(std::abs(g.min_eig_), std::abs(g.max_eig_));
        g.floor_ = floor >= 0.0 ? floor : default_floor_rel * top;
        if (n > 0 && g.min_eig_ <= g.floor_)
            throw NotPositive("make_metric: min eigenvalue " + std::to_string(g.min_eig_) +
                              " at or below floor " + std::to_string(g.floor_));
        return g;
    }

    static MetricOperator identity(Eigen::Index n) {
        return make(ComplexMatrix::Identity(n, n), -1.0, "I");
    }

    const ComplexMatrix& matrix() const { return mat_; }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }
    Eigen::Index dim() const { return mat_.rows(); }
    bool diagonal() const { return diagonal_; }
    double min_eigenvalue() const { return min_eig_; }
    double max_eigenvalue() const { return max_eig_; }
    double floor_used() const { return floor_; }
    std::optional<int> refinement_level() const { return level_; }
    void set_refinement_level(int level) { level_ = level; }

    // Ascending eigenvalues (sorted copy on the diagonal path).
    RealVector eigenvalues() const {
        if (!diagonal_) return eigvals_;
        RealVector v = diag_;
        std::sort(v.data(), v.data() + v.size());
        return v;
    }

    // G^alpha by functional calculus; entrywise on the diagonal path.
    ComplexMatrix power(double alpha) const {
        if (diagonal_) {
            ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
            for (Eigen::Index k = 0; k < dim(); ++k)
                out(k, k) = diag_power(diag_(k), alpha);
            return out;
        }
        RealVector powered(dim());
        for (Eigen::Index k = 0; k < dim(); ++k) powered(k) = std::pow(eigvals_(k), alpha);
        ComplexMatrix out = eigvecs_ * powered.asDiagonal() * eigvecs_.adjoint();
        out = 0.5 * (out + out.adjoint().eval());
        return out;
    }

    // G^alpha applied to a vector without materializing the power.
    ComplexVector apply_power(double alpha, const ComplexVector& xi) const {
        if (xi.size() != dim()) throw DimensionMismatch("apply_power: vector length");
        if (diagonal_) {
            ComplexVector out(dim());
            for (Eigen::Index k = 0; k < dim(); ++k) out(k) = diag_power(diag_(k), alpha) * xi(k);
            return out;
        }
        ComplexVector coeffs = eigvecs_.adjoint() * xi;
        for (Eigen::Index k = 0; k < dim(); ++k) coeffs(k) *= std::pow(eigvals_(k), alpha);
        return eigvecs_ * coeffs;
    }

    // Exact reciprocal on the diagonal path; eigenbasis reuse otherwise.
    MetricOperator inverse() const {
        MetricOperator g;
        g.label_ = label_.empty() ? "" : "inv(" + label_ + ")";
        g.level_ = level_;
        g.diagonal_ = diagonal_;
        if (diagonal_) {
            RealVector inv_diag(dim());
            for (Eigen::Index k = 0; k < dim(); ++k) inv_diag(k) = 1.0 / diag_(k);
            g.diag_ = inv_diag;
            g.mat_ = ComplexMatrix::Zero(dim(), dim());
            for (Eigen::Index k = 0; k < dim(); ++k) g.mat_(k, k) = inv_diag(k);
            g.min_eig_ = dim() == 0 ? 0.0 : inv_diag.minCoeff();
            g.max_eig_ = dim() == 0 ? 0.0 : inv_diag.maxCoeff();
        } else {
            RealVector inv_vals(dim());
            for (Eigen::Index k = 0; k < dim(); ++k)
                inv_vals(k) = 1.0 / eigvals_(dim() - 1 - k); // keep ascending order
            g.eigvals_ = inv_vals;
            g.eigvecs_ = eigvecs_.rowwise().reverse().eval();
            ComplexMatrix m = eigvecs_ * (eigvals_.cwiseInverse()).asDiagonal() *
                              eigvecs_.adjoint();
            g.mat_ = 0.5 * (m + m.adjoint().eval());
            g.min_eig_ = dim() == 0 ? 0.0 : inv_vals(0);
            g.max_eig_ = dim() == 0 ? 0.0 : inv_vals(dim() - 1);
        }
        const double top = std::max(std::abs(g.min_eig_), std::abs(g.max_eig_));
        g.floor_ = default_floor_rel * top;
        return g;
    }

  private:
    static bool detect_diagonal(const ComplexMatrix& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                if (r == c) {
                    if (m(r, c).imag() != 0.0) return false;
                } else if (m(r, c) != Complex(0.0, 0.0)) {
                    return false;
                }
            }
        }
        return true;
    }

    static double diag_power(double v, double alpha) {
        if (alpha == 1.0) return v;
        if (alpha == -1.0) return 1.0 / v;
        return std::pow(v, alpha);
    }

    ComplexMatrix mat_;
    RealVector diag_;      // diagonal path: raw entries, original order
    RealVector eigvals_;   // dense path: ascending
    ComplexMatrix eigvecs_;
    bool diagonal_ = true;
    double min_eig_ = 0.0;
    double max_eig_ = 0.0;
    double floor_ = 0.0;
    std::string label_;
    std::optional<int> level_;
};

inline MetricOperator make_metric(ComplexMatrix m, double floor = -1.0, std::string label = "") {
    return MetricOperator::make(std::move(m), floor, std::move(label));
}

inline std::string combined_label(const MetricOperator& x, const MetricOperator& y,
                                  const char* op) {
    if (x.label().empty() || y.label().empty()) return "";
    return "(" + x.label() + op + y.label() + ")";
}

// Lattice meet: the projective combination, realized by the form sum,
// which for matrices is the plain sum.
inline MetricOperator meet(const MetricOperator& x, const MetricOperator& y) {
    require_same_shape(x.matrix(), y.matrix(), "meet");
    return make_metric(x.matrix() + y.matrix(), -1.0, combined_label(x, y, "&"));
}

// Lattice join: the inductive combination, (X^-1 + Y^-1)^-1.
inline MetricOperator join(const MetricOperator& x, const MetricOperator& y) {
    require_same_shape(x.matrix(), y.matrix(), "join");
    MetricOperator m = meet(x.inverse(), y.inverse());
    MetricOperator out = m.inverse();
    out.set_label(combined_label(x, y, "|"));
    return out;
}

// 1 + G, the operator whose quadratic form is the graph norm squared.
inline MetricOperator r_of(const MetricOperator& g) {
    MetricOperator out = meet(MetricOperator::identity(g.dim()), g);
    if (!g.label().empty()) out.set_label("(1+" + g.label() + ")");
    return out;
}

inline double quadratic_form(const MetricOperator& g, const ComplexVector& xi) {
    if (xi.size() != g.dim()) throw DimensionMismatch("quadratic_form: vector length");
    return (xi.adjoint() * (g.matrix() * xi))(0, 0).real();
}

// |xi|_G = sqrt(<G xi, xi>).
inline double space_norm(const MetricOperator& g, const ComplexVector& xi) {
    return std::sqrt(std::max(0.0, quadratic_form(g, xi)));
}

// |xi|_{1+G}: the graph norm, sqrt(|xi|^2 + |xi|_G^2).
inline double graph_norm(const MetricOperator& g, const ComplexVector& xi) {
    return std::sqrt(std::max(0.0, xi.squaredNorm() + quadratic_form(g, xi)));
}

// Smallest gamma with |xi|_{G2}^2 <= gamma |xi|_{G1}^2 for all xi: the top
// eigenvalue of G1^{-1/2} G2 G1^{-1/2}. Finite gamma means the identity
// embeds H(G1) into H(G2) continuously with norm sqrt(gamma).
inline double embedding_constant(const MetricOperator& g1, const MetricOperator& g2) {
    require_same_shape(g1.matrix(), g2.matrix(), "embedding_constant");
    if (g1.dim() == 0) return 0.0;
    if (g1.diagonal() && g2.diagonal()) {
        double best = 0.0;
        for (Eigen::Index k = 0; k < g1.dim(); ++k)
            best = std::max(best, g2.matrix()(k, k).real() / g1.matrix()(k, k).real());
        return best;
    }
    ComplexMatrix p = g1.power(-0.5);
    ComplexMatrix pinched = p * g2.matrix() * p;
    pinched = 0.5 * (pinched + pinched.adjoint().eval());
    HermitianEigenResult eig = hermitian_eigen(pinched);
    return eig.eigenvalues(g1.dim() - 1);
}

} // namespace metricop
