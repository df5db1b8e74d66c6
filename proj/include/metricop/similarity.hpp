#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "metricop/eigensolve.hpp"
#include "metricop/matrix.hpp"
#include "metricop/metric.hpp"

namespace metricop {

// A candidate intertwining B T = T A (or B T = S A when a couple (T, S) is
// supplied). A acts on space 1, B on space 2, T and S map space 1 -> space 2.
struct IntertwiningCase {
    ComplexMatrix a;
    ComplexMatrix b;
    ComplexMatrix t;
    std::optional<ComplexMatrix> s;
    double intertwine_residual = 0.0;
    double cond_t = std::numeric_limits<double>::infinity();

    const ComplexMatrix& right_factor() const { return s ? *s : t; }
};

inline IntertwiningCase make_case(ComplexMatrix a, ComplexMatrix b, ComplexMatrix t,
                                  std::optional<ComplexMatrix> s = std::nullopt) {
    require_square(a, "make_case A");
    require_square(b, "make_case B");
    if (t.cols() != a.rows() || t.rows() != b.rows())
        throw DimensionMismatch("make_case: T must map the space of A to the space of B");
    if (s && (s->rows() != t.rows() || s->cols() != t.cols()))
        throw DimensionMismatch("make_case: S must have the shape of T");

    IntertwiningCase c;
    c.a = std::move(a);
    c.b = std::move(b);
    c.t = std::move(t);
    c.s = std::move(s);

    const ComplexMatrix& rf = c.right_factor();
    const double num = operator_norm(c.b * c.t - rf * c.a);
    const double den =
        operator_norm(c.b) * operator_norm(c.t) + operator_norm(rf) * operator_norm(c.a);
    c.intertwine_residual = den > 0.0 ? num / den : num;

    RealVector sv = singular_values(c.t);
    if (sv.size() > 0 && sv(sv.size() - 1) > 0.0) c.cond_t = sv(0) / sv(sv.size() - 1);
    return c;
}

struct IntertwineCheck {
    double residual = 0.0;
    bool pass = false;
};

inline IntertwineCheck check_intertwining(const IntertwiningCase& c, double tol = 1e-10) {
    return {c.intertwine_residual, c.intertwine_residual <= tol};
}

inline IntertwineCheck check_intertwining(const ComplexMatrix& a, const ComplexMatrix& b,
                                          const ComplexMatrix& t, double tol = 1e-10) {
    return check_intertwining(make_case(a, b, t), tol);
}

// Residual of the relation applied to one vector, in the quadrature norm
// when weights are given. This is the convergence-order probe: the matrix
// norm of B T - T A is dominated by the highest grid modes, while smooth
// probes see the Taylor error of the stencils.
inline double action_residual(const IntertwiningCase& c, const ComplexVector& f,
                              const RealVector* weights = nullptr) {
    if (f.size() != c.a.rows()) throw DimensionMismatch("action_residual: vector length");
    ComplexVector r = c.b * (c.t * f) - c.right_factor() * (c.a * f);
    if (weights == nullptr) return r.norm() / std::max(f.norm(), 1e-300);
    if (weights->size() != r.size()) throw DimensionMismatch("action_residual: weights length");
    const double rn = std::sqrt((r.array().abs2() * weights->array()).sum());
    const double fn = std::sqrt((f.array().abs2() * weights->array()).sum());
    return rn / std::max(fn, 1e-300);
}

enum class SimilarityClass {
    unitary_equivalent,
    similar,
    quasi_similar,
    semi_similar,
    not_intertwined,
};

inline const char* to_string(SimilarityClass c) {
    switch (c) {
        case SimilarityClass::unitary_equivalent: return "unitary-equivalent";
        case SimilarityClass::similar: return "similar";
        case SimilarityClass::quasi_similar: return "quasi-similar";
        case SimilarityClass::semi_similar: return "semi-similar";
        case SimilarityClass::not_intertwined: return "not-intertwined";
    }
    return "not-intertwined";
}

struct ClassifyOptions {
    double kappa_max = 1e6;
    double unitary_tol = 1e-10;
    double intertwine_tol = 1e-10;
    double invert_floor_rel = 1e-12;
};

struct SimilarityVerdict {
    SimilarityClass cls = SimilarityClass::not_intertwined;
    double intertwine_residual = 0.0;
    double cond_t = std::numeric_limits<double>::infinity();
    double unitarity_defect = std::numeric_limits<double>::infinity();
};

// Taxonomy walk, strongest class first. A couple (T, S) with S distinct
// from T is its own class; otherwise T's conditioning decides: unitary,
// invertible with moderate cond (similar), invertible at the floor but
// ill-conditioned (quasi-similar: the finite stand-in for bounded T with
// unbounded inverse), singular at the floor (no verdict stronger than
// the bare relation, reported as not-intertwined).
inline SimilarityVerdict classify(const IntertwiningCase& c, const ClassifyOptions& opts = {}) {
    if (c.intertwine_residual > opts.intertwine_tol)
        throw NotIntertwined("classify: intertwining residual " +
                             std::to_string(c.intertwine_residual) + " above tolerance");
    SimilarityVerdict v;
    v.intertwine_residual = c.intertwine_residual;
    v.cond_t = c.cond_t;

    const bool s_is_t = c.s && c.s->rows() == c.t.rows() && c.s->cols() == c.t.cols() &&
                        (c.s->array() == c.t.array()).all();
    if (c.s && !s_is_t) {
        v.cls = SimilarityClass::semi_similar;
        return v;
    }
    if (c.t.rows() == c.t.cols()) {
        v.unitarity_defect =
            operator_norm(c.t.adjoint() * c.t - ComplexMatrix::Identity(c.t.cols(), c.t.cols()));
        if (v.unitarity_defect <= opts.unitary_tol) {
            v.cls = SimilarityClass::unitary_equivalent;
            return v;
        }
    }
    RealVector sv = singular_values(c.t);
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double smin = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
    if (c.t.rows() == c.t.cols() && smin > opts.invert_floor_rel * smax) {
        v.cls = (c.cond_t <= opts.kappa_max) ? SimilarityClass::similar
                                             : SimilarityClass::quasi_similar;
        return v;
    }
    v.cls = SimilarityClass::not_intertwined;
    return v;
}

// (A, B, T) -> (B*, A*, T*); a couple (T, S) maps to (S*, T*), which is
// exactly what transposing B T = S A produces.
inline IntertwiningCase adjoint_case(const IntertwiningCase& c) {
    if (c.s) return make_case(c.b.adjoint(), c.a.adjoint(), c.s->adjoint(), c.t.adjoint());
    return make_case(c.b.adjoint(), c.a.adjoint(), c.t.adjoint());
}

// The G-adjoint: star_G(A) = G^{-1} A* G, the adjoint with respect to the
// inner product <G., .>.
inline ComplexMatrix star_g(const ComplexMatrix& a, const MetricOperator& g) {
    require_square(a, "star_g");
    if (a.rows() != g.dim()) throw DimensionMismatch("star_g: A vs G");
    return g.inverse().matrix() * a.adjoint() * g.matrix();
}

// b_zero(A, G) = (star_G(A))* = G A G^{-1}, the minimal closed operator
// with B0 G = G A.
inline ComplexMatrix b_zero(const ComplexMatrix& a, const MetricOperator& g) {
    return star_g(a, g).adjoint();
}

// Eigenvalue clusters of one matrix, the finite report of sigma(.).
struct SpectrumReport {
    std::vector<EigenCluster> clusters;
    Eigen::Index dimension = 0;
    double cluster_tol = 0.0;

    static constexpr double default_cluster_rel = 1e-7;

    static SpectrumReport from_matrix(const ComplexMatrix& m, double cluster_tol = -1.0) {
        require_square(m, "SpectrumReport");
        SpectrumReport rep;
        rep.dimension = m.rows();
        std::vector<Complex> values = general_eigenvalues(m);
        rep.cluster_tol = cluster_tol >= 0.0
                              ? cluster_tol
                              : default_cluster_rel * std::max(1.0, operator_norm(m));
        rep.clusters = cluster_eigenvalues(values, rep.cluster_tol);
        return rep;
    }

    std::vector<Complex> flattened() const {
        std::vector<Complex> out;
        for (const EigenCluster& c : clusters)
            for (Eigen::Index k = 0; k < c.multiplicity; ++k) out.push_back(c.value);
        return out;
    }
};

struct InclusionEntry {
    Complex a_value{0.0, 0.0};
    Complex b_value{0.0, 0.0};
    double distance = std::numeric_limits<double>::infinity();
    Eigen::Index mult_a = 0;
    Eigen::Index mult_b = 0;
    bool ok = false;
};

struct InclusionReport {
    std::vector<InclusionEntry> entries;
    bool holds = false;
    double tol = 0.0;
};

// One-sided check sigma_p(A) within sigma_p(B): each A-cluster grabs the
// nearest B-cluster with spare capacity (greedy in the sorted order), and
// inclusion holds when every match is within tol with enough multiplicity.
inline InclusionReport spectral_inclusion(const SpectrumReport& ra, const SpectrumReport& rb,
                                          double tol) {
    InclusionReport rep;
    rep.tol = tol;
    rep.holds = true;
    std::vector<Eigen::Index> capacity;
    capacity.reserve(rb.clusters.size());
    for (const EigenCluster& c : rb.clusters) capacity.push_back(c.multiplicity);

    for (const EigenCluster& ca : ra.clusters) {
        InclusionEntry e;
        e.a_value = ca.value;
        e.mult_a = ca.multiplicity;
        int best = -1;
        for (size_t k = 0; k < rb.clusters.size(); ++k) {
            if (capacity[k] <= 0) continue;
            const double d = std::abs(rb.clusters[k].value - ca.value);
            if (d < e.distance) {
                e.distance = d;
                best = static_cast<int>(k);
            }
        }
        if (best >= 0) {
            e.b_value = rb.clusters[static_cast<size_t>(best)].value;
            e.mult_b = capacity[static_cast<size_t>(best)];
            e.ok = e.distance <= tol && e.mult_a <= e.mult_b;
            capacity[static_cast<size_t>(best)] -= std::min(e.mult_a, e.mult_b);
        }
        if (!e.ok) rep.holds = false;
        rep.entries.push_back(e);
    }
    return rep;
}

namespace detail {

inline double distance_to_spectrum(const ComplexMatrix& m, Complex lambda) {
    std::vector<Complex> values = general_eigenvalues(m);
    double d = std::numeric_limits<double>::infinity();
    for (Complex v : values) d = std::min(d, std::abs(v - lambda));
    return d;
}

inline void require_t_invertible(const ComplexMatrix& t, double floor_rel) {
    if (t.rows() != t.cols()) throw TNotInvertible("resolvent: T is not square");
    RealVector sv = singular_values(t);
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    if (sv.size() == 0 || sv(sv.size() - 1) <= floor_rel * smax)
        throw TNotInvertible("resolvent: T singular at the working floor");
}

} // namespace detail

struct ResolventOptions {
    double spectrum_floor_rel = 1e-8;  // min |lambda - sigma| relative to the norm
    double invert_floor_rel = 1e-12;   // T invertibility floor
};

// X_lambda = T (A - lambda)^{-1} T^{-1}, the pullback of A's resolvent.
// It satisfies (B - lambda) X_lambda = I whenever B T = T A holds.
inline ComplexMatrix resolvent_x(const IntertwiningCase& c, Complex lambda,
                                 const ResolventOptions& opts = {}) {
    if (c.a.rows() != c.b.rows())
        throw DimensionMismatch("resolvent_x: spaces must share a dimension");
    const double dist = detail::distance_to_spectrum(c.a, lambda);
    if (dist < opts.spectrum_floor_rel * operator_norm(c.a))
        throw LambdaInSpectrum("resolvent_x: lambda at distance " + std::to_string(dist) +
                               " from the spectrum of A");
    detail::require_t_invertible(c.t, opts.invert_floor_rel);
    const Eigen::Index n = c.a.rows();
    ComplexMatrix shifted = c.a - lambda * ComplexMatrix::Identity(n, n);
    Eigen::PartialPivLU<ComplexMatrix> lu_t(c.t);
    Eigen::PartialPivLU<ComplexMatrix> lu_a(shifted);
    return c.t * lu_a.solve(lu_t.solve(ComplexMatrix::Identity(n, n)));
}

// Y_lambda = T^{-1} (B - lambda)^{-1} T; satisfies Y_lambda (A - lambda) = I.
inline ComplexMatrix resolvent_y(const IntertwiningCase& c, Complex lambda,
                                 const ResolventOptions& opts = {}) {
    if (c.a.rows() != c.b.rows())
        throw DimensionMismatch("resolvent_y: spaces must share a dimension");
    const double dist = detail::distance_to_spectrum(c.b, lambda);
    if (dist < opts.spectrum_floor_rel * operator_norm(c.b))
        throw LambdaInSpectrum("resolvent_y: lambda at distance " + std::to_string(dist) +
                               " from the spectrum of B");
    detail::require_t_invertible(c.t, opts.invert_floor_rel);
    const Eigen::Index n = c.b.rows();
    ComplexMatrix shifted = c.b - lambda * ComplexMatrix::Identity(n, n);
    Eigen::PartialPivLU<ComplexMatrix> lu_t(c.t);
    Eigen::PartialPivLU<ComplexMatrix> lu_b(shifted);
    return lu_t.solve(lu_b.solve(c.t));
}

// Max |Im| over sigma(B) for a case whose A side is Hermitian and whose
// verdict is at least quasi-similar; the finite form of "quasi-similar to
// self-adjoint implies real spectrum".
inline double real_spectrum_check(const IntertwiningCase& c, const ClassifyOptions& opts = {}) {
    if (hermiticity_defect(c.a) > 1e-10)
        throw NotHermitian("real_spectrum_check: A must be Hermitian");
    SimilarityVerdict v = classify(c, opts);
    if (v.cls != SimilarityClass::unitary_equivalent && v.cls != SimilarityClass::similar &&
        v.cls != SimilarityClass::quasi_similar)
        throw NotIntertwined("real_spectrum_check: case must be at least quasi-similar");
    std::vector<Complex> values = general_eigenvalues(c.b);
    double worst = 0.0;
    for (Complex z : values) worst = std::max(worst, std::abs(z.imag()));
    return worst;
}

} // namespace metricop
