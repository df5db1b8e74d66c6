#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace metricop;

namespace {

// B = T A T^-1 packaged as an intertwining case; exact by construction.
IntertwiningCase conjugated_case(std::mt19937& rng, Eigen::Index n, double cond) {
    ComplexMatrix a = testhelp::random_matrix(rng, n);
    ComplexMatrix t = testhelp::random_conditioned(rng, n, cond);
    ComplexMatrix b = t * a * Eigen::PartialPivLU<ComplexMatrix>(t).inverse();
    return make_case(std::move(a), std::move(b), std::move(t));
}

} // namespace

TEST_CASE("intertwining residual vanishes for constructed pairs") {
    std::mt19937 rng(601);
    IntertwiningCase c = conjugated_case(rng, 12, 100.0);
    REQUIRE(c.intertwine_residual <= 1e-12);
    REQUIRE(check_intertwining(c).pass);
    REQUIRE(c.cond_t == Catch::Approx(100.0).epsilon(1e-8));
}

TEST_CASE("unrelated operators are reported as not intertwined") {
    std::mt19937 rng(602);
    ComplexMatrix a = testhelp::random_matrix(rng, 6);
    ComplexMatrix b = testhelp::random_matrix(rng, 6);
    ComplexMatrix t = testhelp::random_unitary(rng, 6);
    IntertwiningCase c = make_case(a, b, t);
    REQUIRE_FALSE(check_intertwining(c).pass);
    REQUIRE_THROWS_AS(classify(c), NotIntertwined);
}

TEST_CASE("classification walks the taxonomy by conditioning") {
    std::mt19937 rng(603);
    SECTION("unitary T") {
        ComplexMatrix a = testhelp::random_matrix(rng, 8);
        ComplexMatrix q = testhelp::random_unitary(rng, 8);
        ComplexMatrix b = q * a * q.adjoint();
        SimilarityVerdict v = classify(make_case(a, b, q));
        REQUIRE(v.cls == SimilarityClass::unitary_equivalent);
        REQUIRE(v.unitarity_defect <= 1e-10);
    }
    SECTION("well-conditioned T") {
        SimilarityVerdict v = classify(conjugated_case(rng, 8, 1e3));
        REQUIRE(v.cls == SimilarityClass::similar);
        REQUIRE(std::string(to_string(v.cls)) == "similar");
    }
    SECTION("ill-conditioned T crosses into quasi-similarity") {
        ClassifyOptions opts;
        opts.intertwine_tol = 1e-6; // roundoff grows with cond(T)
        SimilarityVerdict v = classify(conjugated_case(rng, 8, 1e8), opts);
        REQUIRE(v.cls == SimilarityClass::quasi_similar);
    }
    SECTION("singular T cannot be promoted") {
        ComplexMatrix a = ComplexMatrix::Identity(3, 3);
        ComplexMatrix t = ComplexMatrix::Zero(3, 3);
        t(0, 0) = 1.0;
        t(1, 1) = 1.0; // rank 2
        SimilarityVerdict v = classify(make_case(a, a, t));
        REQUIRE(v.cls == SimilarityClass::not_intertwined);
    }
}

TEST_CASE("an intertwining couple with S distinct from T is semi-similar") {
    std::mt19937 rng(604);
    // B T = S A with B = S = I: T arbitrary invertible against A = T.
    ComplexMatrix t = testhelp::random_conditioned(rng, 5, 10.0);
    ComplexMatrix id = ComplexMatrix::Identity(5, 5);
    SimilarityVerdict v = classify(make_case(t, id, t, id));
    REQUIRE(v.cls == SimilarityClass::semi_similar);
    REQUIRE(std::string(to_string(v.cls)) == "semi-similar");
}

TEST_CASE("adjoint case transposes the relation") {
    std::mt19937 rng(605);
    IntertwiningCase c = conjugated_case(rng, 7, 50.0);
    IntertwiningCase adj = adjoint_case(c);
    REQUIRE(adj.intertwine_residual <= 1e-11);
    REQUIRE((adj.t.array() == c.t.adjoint().array()).all());
    REQUIRE((adj.a.array() == c.b.adjoint().array()).all());
    REQUIRE((adj.b.array() == c.a.adjoint().array()).all());
}

TEST_CASE("metric adjoint reduces to the ordinary adjoint for G = I") {
    std::mt19937 rng(606);
    ComplexMatrix a = testhelp::random_matrix(rng, 6);
    MetricOperator id = MetricOperator::identity(6);
    REQUIRE(testhelp::rel_diff(star_g(a, id), a.adjoint()) <= 1e-14);
}

TEST_CASE("metric adjoint is the adjoint for the G inner product") {
    std::mt19937 rng(607);
    MetricOperator g = make_metric(testhelp::random_metric_matrix(rng, 9));
    ComplexMatrix a = testhelp::random_matrix(rng, 9);
    ComplexMatrix a_star = star_g(a, g);
    for (int trial = 0; trial < 20; ++trial) {
        ComplexVector xi = testhelp::random_vector(rng, 9);
        ComplexVector eta = testhelp::random_vector(rng, 9);
        const Complex lhs = (eta.adjoint() * (g.matrix() * (a * xi)))(0, 0);
        const Complex rhs = ((a_star * eta).adjoint() * (g.matrix() * xi))(0, 0);
        REQUIRE(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("b_zero is the G-conjugate G A G^-1") {
    std::mt19937 rng(608);
    MetricOperator g = make_metric(testhelp::random_metric_matrix(rng, 7));
    ComplexMatrix a = testhelp::random_matrix(rng, 7);
    ComplexMatrix direct = g.matrix() * a * g.inverse().matrix();
    REQUIRE(testhelp::rel_diff(b_zero(a, g), direct) <= 1e-10);
}

TEST_CASE("spectrum report clusters a degenerate spectrum") {
    ComplexMatrix m = ComplexMatrix::Zero(5, 5);
    m(0, 0) = 2.0;
    m(1, 1) = 2.0;
    m(2, 2) = 2.0;
    m(3, 3) = -1.0;
    m(4, 4) = -1.0;
    SpectrumReport rep = SpectrumReport::from_matrix(m);
    REQUIRE(rep.dimension == 5);
    REQUIRE(rep.clusters.size() == 2);
    REQUIRE(rep.clusters[0].multiplicity == 2);
    REQUIRE(rep.clusters[0].value.real() == Catch::Approx(-1.0).margin(1e-12));
    REQUIRE(rep.clusters[1].multiplicity == 3);
    REQUIRE(rep.flattened().size() == 5);
}

TEST_CASE("spectral inclusion holds for transported spectra and fails otherwise") {
    std::mt19937 rng(609);
    IntertwiningCase c = conjugated_case(rng, 10, 20.0);
    SpectrumReport ra = SpectrumReport::from_matrix(c.a);
    SpectrumReport rb = SpectrumReport::from_matrix(c.b);
    InclusionReport inc = spectral_inclusion(ra, rb, 1e-7);
    REQUIRE(inc.holds);
    for (const InclusionEntry& e : inc.entries) REQUIRE(e.distance <= 1e-7);

    ComplexMatrix shifted = c.a + 0.5 * ComplexMatrix::Identity(10, 10);
    InclusionReport bad = spectral_inclusion(SpectrumReport::from_matrix(shifted), rb, 1e-7);
    REQUIRE_FALSE(bad.holds);
}

TEST_CASE("resolvent transport identities hold on both sides") {
    std::mt19937 rng(610);
    IntertwiningCase c = conjugated_case(rng, 9, 30.0);
    const Complex lambda(0.37, 1.21);
    ComplexMatrix id = ComplexMatrix::Identity(9, 9);

    ComplexMatrix x = resolvent_x(c, lambda);
    REQUIRE(testhelp::rel_diff((c.b - lambda * id) * x, id) <= 1e-9);
    REQUIRE(testhelp::rel_diff(x * (c.b - lambda * id), id) <= 1e-9);

    ComplexMatrix y = resolvent_y(c, lambda);
    REQUIRE(testhelp::rel_diff(y * (c.a - lambda * id), id) <= 1e-9);
    REQUIRE(testhelp::rel_diff((c.a - lambda * id) * y, id) <= 1e-9);
}

TEST_CASE("resolvents refuse lambda at the spectrum") {
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    a(2, 2) = 3.0;
    IntertwiningCase c = make_case(a, a, ComplexMatrix::Identity(3, 3));
    REQUIRE_THROWS_AS(resolvent_x(c, Complex(2.0, 0.0)), LambdaInSpectrum);
    REQUIRE_NOTHROW(resolvent_x(c, Complex(2.0, 1.0)));
}

TEST_CASE("resolvent transport refuses a singular T") {
    ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    ComplexMatrix t = ComplexMatrix::Zero(3, 3);
    t(0, 0) = 1.0;
    t(1, 1) = 1.0;
    IntertwiningCase c = make_case(a, a, t);
    REQUIRE_THROWS_AS(resolvent_x(c, Complex(0.0, 2.0)), TNotInvertible);
}

TEST_CASE("transported Hermitian spectra stay real") {
    std::mt19937 rng(611);
    ComplexMatrix a = testhelp::random_hermitian(rng, 10);
    ComplexMatrix t = testhelp::random_conditioned(rng, 10, 100.0);
    ComplexMatrix b = t * a * Eigen::PartialPivLU<ComplexMatrix>(t).inverse();
    IntertwiningCase c = make_case(a, b, t);
    const double max_im = real_spectrum_check(c);
    REQUIRE(max_im <= 1e-10);
}

TEST_CASE("real spectrum check demands a Hermitian left operand") {
    std::mt19937 rng(612);
    ComplexMatrix a = testhelp::random_matrix(rng, 5);
    IntertwiningCase c = make_case(a, a, ComplexMatrix::Identity(5, 5));
    REQUIRE_THROWS_AS(real_spectrum_check(c), NotHermitian);
}
