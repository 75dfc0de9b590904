#include <catch2/catch_amalgamated.hpp>

#include "focklind/ccr.hpp"
#include "focklind/fock.hpp"
#include "focklind/rng.hpp"

#include <Eigen/Dense>

using namespace focklind;
using Catch::Approx;

namespace {

OperatorPolynomial a() { return OperatorPolynomial::annihilation(); }
OperatorPolynomial ad() { return OperatorPolynomial::creation(); }
OperatorPolynomial n_op() { return OperatorPolynomial::number(); }
OperatorPolynomial one() { return OperatorPolynomial::constant(1.0); }

// Product (N - r0)·(N - r0+1)···, expressed in canonical form.
OperatorPolynomial number_product(const std::vector<int>& shifts)
{
    OperatorPolynomial p = one();
    for (int s : shifts) p = p * (n_op() + OperatorPolynomial::constant(static_cast<double>(s)));
    return p;
}

OperatorPolynomial random_poly(Rng& rng, int max_degree, int modes = 1)
{
    OperatorPolynomial p(modes);
    const int nterms = static_cast<int>(rng.uniform_int(1, 5));
    for (int t = 0; t < nterms; ++t) {
        MonomialKey key(static_cast<std::size_t>(modes));
        int budget = max_degree;
        for (auto& m : key) {
            m.create = static_cast<int>(rng.uniform_int(0, std::min(2, budget)));
            budget -= m.create;
            m.annihilate = static_cast<int>(rng.uniform_int(0, std::min(2, budget)));
            budget -= m.annihilate;
            const int jmax = budget / 2;
            m.number = static_cast<int>(rng.uniform_int(0, std::min(1, jmax)));
            budget -= 2 * m.number;
        }
        p.add_term(key, rng.normal_complex());
    }
    return p;
}

} // namespace

TEST_CASE("ccr_single_commutator")
{
    // a · a† = N + 1
    const auto prod = a() * ad();
    CHECK(OperatorPolynomial::distance(prod, n_op() + one()) == 0.0);
}

TEST_CASE("ccr_l_products_match_closed_form_exactly")
{
    for (int l = 1; l <= 6; ++l) {
        const auto adl_al = creation_power(l) * annihilation_power(l);
        std::vector<int> down;
        for (int r = 0; r < l; ++r) down.push_back(-r);
        CHECK(OperatorPolynomial::distance(adl_al, number_product(down)) == 0.0);

        const auto al_adl = annihilation_power(l) * creation_power(l);
        std::vector<int> up;
        for (int r = 1; r <= l; ++r) up.push_back(r);
        CHECK(OperatorPolynomial::distance(al_adl, number_product(up)) == 0.0);
    }
    // Spot values: (a†)²a² = N² - N, a²(a†)² = N² + 3N + 2.
    const auto lhs1 = creation_power(2) * annihilation_power(2);
    const auto rhs1 = n_op() * n_op() - n_op();
    CHECK(OperatorPolynomial::distance(lhs1, rhs1) == 0.0);
    const auto lhs2 = annihilation_power(2) * creation_power(2);
    const auto rhs2 = n_op() * n_op() + n_op() * Complex(3.0) + OperatorPolynomial::constant(2.0);
    CHECK(OperatorPolynomial::distance(lhs2, rhs2) == 0.0);
}

TEST_CASE("adjoint_examples")
{
    CHECK(OperatorPolynomial::distance(a().adjoint(), ad()) == 0.0);
    CHECK(OperatorPolynomial::distance((n_op() * Complex(0, 1)).adjoint(),
                                       n_op() * Complex(0, -1)) == 0.0);

    // adjoint(z a² + w a†N) = conj(z)(a†)² + conj(w) N a
    const Complex z{0.3, -1.7}, w{-2.0, 0.5};
    auto p = annihilation_power(2) * z + (ad() * n_op()) * w;
    auto expect = creation_power(2) * std::conj(z) + (n_op() * a()) * std::conj(w);
    CHECK(OperatorPolynomial::distance(p.adjoint(), expect) == 0.0);
}

TEST_CASE("adjoint_matches_matrix_conjugate_transpose_oracle")
{
    // <p phi, psi> = <phi, p† psi> on the truncated space, i.e. the matrix of
    // the adjoint equals the conjugate transpose of the matrix.
    Rng rng(71);
    const FockBasisSpec basis({14});
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_poly(rng, 4);
        const auto mp = realize(p, basis).entries;
        const auto mpd = realize(p.adjoint(), basis).entries;
        CHECK((mpd - mp.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("degree_convention")
{
    CHECK(degree(annihilation_power(2) - OperatorPolynomial::constant(4.0)) == 2);
    CHECK(degree(one()) == 0);
    CHECK(degree(ad() * n_op()) == 3); // 1 + 2·1
    CHECK(degree(OperatorPolynomial::zero()) == 0);
}

TEST_CASE("degree_subadditive_under_products")
{
    Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const auto p = random_poly(rng, 4);
        const auto q = random_poly(rng, 4);
        CHECK(degree(p * q) <= degree(p) + degree(q));
    }
}

TEST_CASE("multiplication_matches_truncated_matrix_oracle_on_interior")
{
    Rng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const auto p = random_poly(rng, 4);
        const auto q = random_poly(rng, 4);
        const int dp = degree(p), dq = degree(q);
        const int M = dp + dq + 6;
        const FockBasisSpec basis({M});
        const Eigen::MatrixXcd lhs = realize(p * q, basis).entries;
        const Eigen::MatrixXcd rhs = realize(p, basis).entries * realize(q, basis).entries;
        const int interior = M - dp - dq;
        const double scale = std::max(1.0, lhs.cwiseAbs().maxCoeff());
        CHECK((lhs - rhs).topLeftCorner(interior, interior).cwiseAbs().maxCoeff()
              <= 1e-10 * scale);
    }
}

TEST_CASE("adjoint_is_anti_homomorphism")
{
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = random_poly(rng, 4);
        const auto q = random_poly(rng, 4);
        const auto lhs = (p * q).adjoint();
        const auto rhs = q.adjoint() * p.adjoint();
        const double scale = std::max(1.0, lhs.max_abs_coeff());
        CHECK(OperatorPolynomial::distance(lhs, rhs) <= 1e-13 * scale);
    }
}

TEST_CASE("adjoint_is_involution")
{
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = random_poly(rng, 5, trial % 2 ? 2 : 1);
        CHECK(OperatorPolynomial::distance(p.adjoint().adjoint(), p) == 0.0);
    }
}

TEST_CASE("distinct_modes_commute")
{
    const auto a0 = OperatorPolynomial::annihilation(0, 2);
    const auto c1 = OperatorPolynomial::creation(1, 2);
    CHECK(OperatorPolynomial::distance(a0 * c1, c1 * a0) == 0.0);
    // Same mode does not.
    const auto a1 = OperatorPolynomial::annihilation(1, 2);
    CHECK(OperatorPolynomial::distance(a1 * c1, c1 * a1) != 0.0);
}

TEST_CASE("mode_count_mismatch_rejected")
{
    CHECK_THROWS_AS(OperatorPolynomial::annihilation(0, 1) * OperatorPolynomial::annihilation(0, 2),
                    std::invalid_argument);
}

TEST_CASE("gksl_drift_examples")
{
    // H = 0, jumps = [a]: G = -N/2.
    auto G = gksl_G(OperatorPolynomial::zero(), {a()});
    CHECK(OperatorPolynomial::distance(G, n_op() * Complex(-0.5)) == 0.0);

    // H = N, no jumps: G = -iN.
    G = gksl_G(n_op(), {});
    CHECK(OperatorPolynomial::distance(G, n_op() * Complex(0.0, -1.0)) == 0.0);

    // H = 0, jump a² - α² with α real:
    // G = -(N² - N)/2 + (α²/2)(a² + (a†)²) - α⁴/2.
    const double alpha = 1.5;
    const double a2 = alpha * alpha;
    G = gksl_G(OperatorPolynomial::zero(),
               {annihilation_power(2) - OperatorPolynomial::constant(a2)});
    auto expect = (n_op() * n_op() - n_op()) * Complex(-0.5)
                + (annihilation_power(2) + creation_power(2)) * Complex(0.5 * a2)
                - OperatorPolynomial::constant(0.5 * a2 * a2);
    CHECK(OperatorPolynomial::distance(G, expect) <= 1e-14 * expect.max_abs_coeff());
}

TEST_CASE("gksl_rejects_non_symmetric_hamiltonian")
{
    CHECK_THROWS_AS(gksl_G(a(), {}), std::invalid_argument);
}

TEST_CASE("text_serialization_round_trips_bit_exactly")
{
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_poly(rng, 5, trial % 3 == 0 ? 2 : 1);
        const auto q = OperatorPolynomial::from_text(p.to_text());
        CHECK(p == q);
        CHECK(p.to_text() == q.to_text());
    }
    // Nasty coefficients survive the round trip unchanged.
    OperatorPolynomial p(1);
    p.add_term({ModeMonomial{1, 2, 3}}, Complex(0x1.fffffffffffffp-3, -0x1.23456789abcdep+7));
    CHECK(OperatorPolynomial::from_text(p.to_text()) == p);
}
