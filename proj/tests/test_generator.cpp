#include <catch2/catch_amalgamated.hpp>

#include "focklind/generator.hpp"
#include "focklind/rng.hpp"
#include "focklind/sobolev.hpp"

using namespace focklind;
using Catch::Approx;

namespace {

Matrix ket_bra(int i, int j, int dim)
{
    Matrix m = Matrix::Zero(dim, dim);
    m(i, j) = 1.0;
    return m;
}

// Hermitian random matrix supported on the first `support` basis states.
Matrix interior_hermitian(Rng& rng, int dim, int support)
{
    Matrix m = Matrix::Zero(dim, dim);
    for (int j = 0; j < support; ++j) {
        m(j, j) = rng.normal();
        for (int i = 0; i < j; ++i) {
            const Complex v = rng.normal_complex();
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    }
    return m;
}

} // namespace

TEST_CASE("build_derives_qou_drift")
{
    const double lambda = 1.3, mu = 0.4;
    const auto gen = GkslGenerator::build(
        OperatorPolynomial::zero(),
        {OperatorPolynomial::annihilation() * lambda, OperatorPolynomial::creation() * mu});
    // G = -1/2 (λ² N + μ² (N + 1))
    const auto expect = OperatorPolynomial::number() * Complex(-0.5 * (lambda * lambda + mu * mu))
                      - OperatorPolynomial::constant(0.5 * mu * mu);
    CHECK(OperatorPolynomial::distance(gen.G, expect) <= 1e-15);
    CHECK(gen.degree == 1);
}

TEST_CASE("build_rejects_non_symmetric_hamiltonian")
{
    CHECK_THROWS_AS(GkslGenerator::build(OperatorPolynomial::annihilation(), {}),
                    std::invalid_argument);
}

TEST_CASE("apply_pure_loss_on_one_photon")
{
    const auto gen = GkslGenerator::build(OperatorPolynomial::zero(),
                                          {OperatorPolynomial::annihilation()});
    const auto rgen = realize(gen, FockBasisSpec({4}));
    const Matrix out = rgen.apply(ket_bra(1, 1, 4));
    const Matrix expect = ket_bra(0, 0, 4) - ket_bra(1, 1, 4);
    CHECK((out - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("apply_hamiltonian_commutator_sign")
{
    // H = N, no jumps: L(x) = -i[N, x]; on |0><1| this gives +i|0><1|.
    const auto gen = GkslGenerator::build(OperatorPolynomial::number(), {});
    const auto rgen = realize(gen, FockBasisSpec({4}));
    const Matrix out = rgen.apply(ket_bra(0, 1, 4));
    CHECK((out - Complex(0.0, 1.0) * ket_bra(0, 1, 4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("trace_annihilation_on_interior_states")
{
    Rng rng(57);
    const FockBasisSpec basis({24});
    const std::vector<std::string> models{"pure_loss", "qou", "l_photon", "z_theta"};
    for (const auto& name : models) {
        ModelParams p;
        p.lambda = 1.2;
        p.mu = 0.7;
        p.alpha = 1.5;
        p.epsilon = 0.3;
        const auto gen = std::get<GkslGenerator>(catalog(name, p));
        const auto rgen = realize(gen, basis);
        for (int trial = 0; trial < 5; ++trial) {
            const Matrix x = interior_hermitian(rng, 24, 24 - 2 * gen.degree);
            const Matrix out = rgen.apply(x);
            CHECK(std::abs(out.trace()) <= 1e-10 * trace_norm(x));
            // Hermiticity preservation
            CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * out.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("duality_of_apply_and_adjoint_apply")
{
    Rng rng(91);
    const FockBasisSpec basis({20});
    ModelParams p;
    p.alpha = 1.3;
    p.epsilon = 0.2;
    const auto gen = std::get<GkslGenerator>(catalog("z_theta", p));
    const auto rgen = realize(gen, basis);
    for (int trial = 0; trial < 8; ++trial) {
        const Matrix rho = interior_hermitian(rng, 20, 20 - 2 * gen.degree);
        const Matrix X = interior_hermitian(rng, 20, 20);
        const Complex lhs = (rgen.apply(rho) * X).trace();
        const Complex rhs = (rho * rgen.adjoint_apply(X)).trace();
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("adjoint_apply_qou_on_first_moment")
{
    // L†((N+1)) = (μ² - λ²)N + μ² on the interior.
    const double lambda = 1.4, mu = 0.6;
    ModelParams p;
    p.lambda = lambda;
    p.mu = mu;
    const auto rgen = realize(std::get<GkslGenerator>(catalog("qou", p)), FockBasisSpec({18}));
    const Matrix W = weight_matrix(2.0, FockBasisSpec({18})).entries; // diag(n+1)
    const Matrix out = rgen.adjoint_apply(Matrix(W * W)); // W² = N + 1
    // weight_matrix(2) = (N+1)^{1/2}; square it to get N+1.
    for (int n = 0; n < 16; ++n) {
        const double expect = (mu * mu - lambda * lambda) * n + mu * mu;
        CHECK(std::abs(out(n, n).real() - expect) < 1e-12);
    }
}

TEST_CASE("adjoint_apply_two_photon_diagonal_structure")
{
    // l = 2 dissipation on (N+1): interior diagonal is -2n(n-1).
    ModelParams p;
    p.l = 2;
    p.alpha = 2.0;
    const auto rgen = realize(std::get<GkslGenerator>(catalog("l_photon", p)), FockBasisSpec({20}));
    const Matrix W2 = weight_matrix(4.0, FockBasisSpec({20})).entries; // diag(n+1)
    const Matrix out = rgen.adjoint_apply(W2);
    for (int n = 0; n < 17; ++n)
        CHECK(std::abs(out(n, n).real() - (-2.0 * n * (n - 1))) < 1e-11);
}

TEST_CASE("catalog_qou_mu_zero_degenerates_to_pure_loss")
{
    ModelParams p;
    p.lambda = 1.0;
    p.mu = 0.0;
    const auto qou = std::get<GkslGenerator>(catalog("qou", p));
    const auto loss = std::get<GkslGenerator>(catalog("pure_loss", ModelParams{}));
    CHECK(OperatorPolynomial::distance(qou.G, loss.G) == 0.0);
    REQUIRE(qou.jumps.size() == 1);
}

TEST_CASE("catalog_l_photon_jump")
{
    ModelParams p;
    p.l = 2;
    p.alpha = 2.0;
    p.kappa = 1.0;
    const auto gen = std::get<GkslGenerator>(catalog("l_photon", p));
    const auto expect = annihilation_power(2) - OperatorPolynomial::constant(4.0);
    REQUIRE(gen.jumps.size() == 1);
    CHECK(OperatorPolynomial::distance(gen.jumps[0], expect) == 0.0);
}

TEST_CASE("x_gate_materializes_to_rotating_code")
{
    ModelParams p;
    p.alpha = 1.5;
    p.period = 2.0;
    const auto td = std::get<TimeDependentGenerator>(catalog("x_gate", p));
    const Complex a2 = p.alpha * p.alpha;

    const auto at0 = td.materialize_symbolic(0.0);
    REQUIRE(at0.jumps.size() == 1);
    CHECK(OperatorPolynomial::distance(at0.jumps[0],
                                       annihilation_power(2) - OperatorPolynomial::constant(a2))
          < 1e-14);

    // At s = T/2 the phase is e^{iπ} = -1: jump becomes a² + α².
    const auto half = td.materialize_symbolic(1.0);
    CHECK(OperatorPolynomial::distance(half.jumps[0],
                                       annihilation_power(2) + OperatorPolynomial::constant(a2))
          < 1e-13);
}

TEST_CASE("cnot_materialization")
{
    ModelParams p;
    p.alpha = 1.2;
    p.epsilon = 0.4;
    p.period = 3.0;
    const auto td = std::get<TimeDependentGenerator>(catalog("cnot", p));
    const double se = std::sqrt(p.epsilon);
    const Complex a2 = p.alpha * p.alpha;

    // At s = 0 the coupling term vanishes: second jump is √ε(b² - α²).
    const auto at0 = td.materialize_symbolic(0.0);
    REQUIRE(at0.jumps.size() == 2);
    const auto expect0 =
        (annihilation_power(2, 1, 2) - OperatorPolynomial::constant(a2, 2)) * se;
    CHECK(OperatorPolynomial::distance(at0.jumps[1], expect0) < 1e-14);

    // Generic s: b² - α² - (α/2)(1 - e^{2πis/T})(a - α), scaled by √ε.
    const double s = 0.77;
    const Complex phase = std::exp(Complex(0.0, 2.0 * M_PI * s / p.period));
    const auto A = OperatorPolynomial::annihilation(0, 2);
    const auto expect_s = (annihilation_power(2, 1, 2) - OperatorPolynomial::constant(a2, 2)
                           - (A - OperatorPolynomial::constant(p.alpha, 2))
                                 * (p.alpha * 0.5 * (1.0 - phase)))
                        * se;
    const auto ats = td.materialize_symbolic(s);
    CHECK(OperatorPolynomial::distance(ats.jumps[1], expect_s) < 1e-14);
}

TEST_CASE("catalog_errors")
{
    CHECK_THROWS_AS(catalog("toffoli", ModelParams{}), std::invalid_argument);
    CHECK_THROWS_AS(catalog("unknown_model", ModelParams{}), std::invalid_argument);
    ModelParams bad;
    bad.kappa = -1.0;
    CHECK_THROWS_AS(catalog("pure_loss", bad), std::invalid_argument);
    ModelParams badcnot;
    badcnot.epsilon = -0.5;
    CHECK_THROWS_AS(catalog("cnot", badcnot), std::invalid_argument);
}

TEST_CASE("catalog_listing_matches_scope")
{
    const auto entries = catalog_entries();
    bool has_z = false, has_cnot = false, has_toffoli = false;
    for (const auto& e : entries) {
        if (e.name == "z_theta") has_z = true;
        if (e.name == "cnot") {
            has_cnot = true;
            CHECK(e.modes == 2);
        }
        if (e.name == "toffoli") has_toffoli = true;
    }
    CHECK(has_z);
    CHECK(has_cnot);
    CHECK_FALSE(has_toffoli);
}

TEST_CASE("tabulated_coefficient_interpolates_linearly")
{
    const auto f = CoeffFn::tabulated({0.0, 1.0, 2.0}, {Complex(0.0), Complex(2.0), Complex(2.0)});
    CHECK(std::abs(f(0.5) - Complex(1.0)) < 1e-15);
    CHECK(std::abs(f(1.5) - Complex(2.0)) < 1e-15);
    CHECK(std::abs(f(5.0) - Complex(2.0)) < 1e-15); // clamped
    CHECK_THROWS_AS(CoeffFn::tabulated({1.0, 0.0}, {Complex(0.0), Complex(1.0)}),
                    std::invalid_argument);
}
