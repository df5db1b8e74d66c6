#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace metricop;

TEST_CASE("dieudonne residual vanishes for Hermitian operators on the flat metric") {
    std::mt19937 rng(801);
    ComplexMatrix h = testhelp::random_hermitian(rng, 10);
    MetricOperator id = MetricOperator::identity(10);
    REQUIRE(dieudonne_residual(h, id) <= 1e-14);
}

TEST_CASE("dieudonne residual vanishes for an exactly balanced pair") {
    // H = G^{-1/2} h G^{1/2} with Hermitian h satisfies H* G = G H by
    // construction, up to the power roundoff.
    std::mt19937 rng(802);
    MetricOperator g = make_metric(testhelp::random_metric_matrix(rng, 8));
    ComplexMatrix h_flat = testhelp::random_hermitian(rng, 8);
    ComplexMatrix big_h = g.power(-0.5) * h_flat * g.power(0.5);
    REQUIRE(dieudonne_residual(big_h, g) <= 1e-11);

    // breaking the balance breaks the relation
    big_h(0, 0) += 1.0;
    REQUIRE(dieudonne_residual(big_h, g) > 1e-4);
}

TEST_CASE("quasi-Hermitian pair records the residual and scale") {
    std::mt19937 rng(803);
    MetricOperator g = make_metric(testhelp::random_metric_matrix(rng, 6));
    ComplexMatrix h = g.power(-0.5) * testhelp::random_hermitian(rng, 6) * g.power(0.5);
    QuasiHermitianPair pair = make_quasi_hermitian_pair(h, g, 2.5);
    REQUIRE(pair.residual <= 1e-11);
    REQUIRE(pair.metric_scale == 2.5);
}

TEST_CASE("physical hamiltonian is Hermitian with the transported spectrum") {
    std::mt19937 rng(804);
    MetricOperator g = make_metric(testhelp::random_metric_matrix(rng, 8));
    ComplexMatrix h_flat = testhelp::random_hermitian(rng, 8);
    ComplexMatrix big_h = g.power(-0.5) * h_flat * g.power(0.5);
    PhysicalSystem sys = physical_hamiltonian(make_quasi_hermitian_pair(big_h, g));
    REQUIRE(sys.hermiticity_residual <= 1e-10);
    REQUIRE(testhelp::rel_diff(sys.h, h_flat) <= 1e-10);
    REQUIRE(testhelp::rel_diff(sys.w * sys.w, g.matrix()) <= 1e-10);

    // spectra agree with the flat Hermitian model
    HermitianEigenResult eig = hermitian_eigen(h_flat);
    std::vector<Complex> flat = sys.spectrum.flattened();
    REQUIRE(static_cast<Eigen::Index>(flat.size()) == 8);
    for (Eigen::Index k = 0; k < 8; ++k)
        REQUIRE(std::abs(flat[static_cast<size_t>(k)] - Complex(eig.eigenvalues(k), 0.0)) <= 1e-8);
}

TEST_CASE("strict mode rejects a pair that is not quasi-Hermitian") {
    std::mt19937 rng(805);
    ComplexMatrix h = testhelp::random_matrix(rng, 6);
    MetricOperator g = make_metric(testhelp::random_metric_matrix(rng, 6));
    QuasiHermitianPair pair = make_quasi_hermitian_pair(h, g);
    PhysicalOptions opts;
    opts.strict = true;
    REQUIRE(pair.residual > opts.strict_tol);
    REQUIRE_THROWS_AS(physical_hamiltonian(pair, opts), NotQuasiHermitian);
}

TEST_CASE("analytic vector series converges for bounded H and stalls for scaled H") {
    std::mt19937 rng(806);
    MetricOperator id = MetricOperator::identity(5);
    ComplexMatrix h = testhelp::random_unitary(rng, 5); // norms |H^n phi| stay 1
    ComplexVector phi = testhelp::random_vector(rng, 5);
    phi /= phi.norm();

    AnalyticVectorDiagnostic good = analytic_vector_diagnostic(h, id, phi, 1.0, 12);
    REQUIRE(good.converging);
    REQUIRE(good.norms.size() == 13);
    // partial sums approach e^t for unit-norm iterates
    REQUIRE(good.partial_sums.back() == Catch::Approx(std::exp(1.0)).epsilon(1e-3));
    REQUIRE(good.t_star > 1.0);

    AnalyticVectorDiagnostic slow = analytic_vector_diagnostic(20.0 * h, id, phi, 1.0, 12);
    REQUIRE_FALSE(slow.converging);
    REQUIRE(slow.ratios.back() > 1.0);
}

TEST_CASE("analytic vector series terminates for a nilpotent operator") {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 1) = 1.0;
    h(1, 2) = 1.0; // h^3 = 0
    ComplexVector phi(3);
    phi << 0.0, 0.0, 1.0;
    AnalyticVectorDiagnostic diag =
        analytic_vector_diagnostic(h, MetricOperator::identity(3), phi, 5.0, 8);
    REQUIRE(diag.converging);
    REQUIRE(diag.norms[0] == 1.0);
    REQUIRE(diag.norms[3] == 0.0);
    REQUIRE(diag.partial_sums.back() == diag.partial_sums[2]);
}

TEST_CASE("analytic vector diagnostic guards its inputs") {
    ComplexMatrix h = ComplexMatrix::Identity(3, 3);
    ComplexVector phi(3);
    phi << 1.0, 0.0, 0.0;
    MetricOperator id = MetricOperator::identity(3);
    REQUIRE_THROWS_AS(analytic_vector_diagnostic(h, id, phi, -1.0, 8), Error);
    REQUIRE_THROWS_AS(analytic_vector_diagnostic(h, id, phi, 1.0, 2), Error);
}

TEST_CASE("shifted oscillator assembles the documented bands and metric") {
    Grid grid = Grid::uniform(6.0, 80);
    QuasiHermitianPair pair = pt_oscillator(0.5, 1.0, grid);
    const int n = grid.points;
    REQUIRE(pair.h.rows() == n);

    // interior row of -1/2 D2 - alpha D1 - alpha^2/2 + omega^2 x^2 / 2
    const int j = n / 2;
    const double inv12dx2 = 1.0 / (12.0 * grid.dx * grid.dx);
    const double inv12dx = 1.0 / (12.0 * grid.dx);
    const double x = grid.nodes(j);
    REQUIRE(pair.h(j, j).real() ==
            Catch::Approx(15.0 * inv12dx2 - 0.125 + 0.5 * x * x).margin(1e-10));
    REQUIRE(pair.h(j, j + 1).real() == Catch::Approx(-8.0 * inv12dx2 - 0.5 * 8.0 * inv12dx)
                                           .epsilon(1e-12));
    REQUIRE(pair.h(j, j + 2).real() ==
            Catch::Approx(0.5 * inv12dx2 + 0.5 * inv12dx).epsilon(1e-12));

    // metric entries are exp(2 alpha x) scaled so the largest is 1
    REQUIRE(pair.g.diagonal());
    REQUIRE(pair.g.max_eigenvalue() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(pair.metric_scale == Catch::Approx(std::exp(2.0 * 0.5 * 6.0)).epsilon(1e-12));
    const double ratio = pair.g.matrix()(1, 1).real() / pair.g.matrix()(0, 0).real();
    REQUIRE(ratio == Catch::Approx(std::exp(2.0 * 0.5 * grid.dx)).epsilon(1e-10));
}

TEST_CASE("oscillator guards frequency and resolution") {
    Grid grid = Grid::uniform(6.0, 80);
    REQUIRE_THROWS_AS(pt_oscillator(0.5, -1.0, grid), Error);
    Grid coarse = Grid::uniform(30.0, 12);
    REQUIRE_THROWS_AS(pt_oscillator(1.0, 1.0, coarse), GridTooCoarse);
}

TEST_CASE("shifted oscillator spectrum is real and matches harmonic levels") {
    // modest grid: enough for the first few levels at loose tolerance
    Grid grid = Grid::uniform(10.0, 240);
    QuasiHermitianPair pair = pt_oscillator(1.0, 1.0, grid);
    REQUIRE(pair.residual <= 1e-3); // balance holds to discretization order
    PhysicalSystem sys = physical_hamiltonian(pair);
    REQUIRE(sys.hermiticity_residual <= 1e-2);
    std::vector<Complex> low = lowest_interior(sys.spectrum.flattened());
    REQUIRE(low.size() >= 3);
    for (const Complex& z : low) REQUIRE(std::abs(z.imag()) <= 1e-6);
    REQUIRE(low[0].real() == Catch::Approx(0.5).margin(1e-3));
    REQUIRE(low[1].real() == Catch::Approx(1.5).margin(1e-3));
    REQUIRE(low[2].real() == Catch::Approx(2.5).margin(1e-3));
}

TEST_CASE("action residual agrees with the matrix residual on a normalized probe") {
    Grid grid = Grid::uniform(6.0, 80);
    QuasiHermitianPair pair = pt_oscillator(0.5, 1.0, grid);
    ComplexVector phi = normalized_gaussian(grid);
    const double action = dieudonne_action_residual(pair.h, pair.g, phi, grid);
    REQUIRE(action > 0.0);
    // a smooth probe sees only the interior defect, never more than the
    // operator-norm bound
    const double bound = operator_norm(pair.h.adjoint() * pair.g.matrix() -
                                       pair.g.matrix() * pair.h);
    REQUIRE(action <= bound * 10.0);
    ComplexVector wrong(3);
    wrong.setOnes();
    REQUIRE_THROWS_AS(dieudonne_action_residual(pair.h, pair.g, wrong, grid),
                      DimensionMismatch);
}

TEST_CASE("lowest interior keeps the requested fraction in sorted order") {
    std::vector<Complex> vals = {Complex(5.0, 0.0), Complex(1.0, 0.2), Complex(3.0, 0.0),
                                 Complex(2.0, -0.1), Complex(4.0, 0.0), Complex(0.0, 0.0)};
    std::vector<Complex> low = lowest_interior(vals, 0.5);
    REQUIRE(low.size() == 3);
    REQUIRE(low[0] == Complex(0.0, 0.0));
    REQUIRE(low[1] == Complex(1.0, 0.2));
    REQUIRE(low[2] == Complex(2.0, -0.1));
}
