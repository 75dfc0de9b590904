#include <catch2/catch_amalgamated.hpp>

#include "focklind/certify.hpp"

using namespace focklind;
using Catch::Approx;

namespace {

RealizedGenerator realized_model(const std::string& name, const ModelParams& p,
                                 const FockBasisSpec& basis)
{
    return realize(std::get<GkslGenerator>(catalog(name, p)), basis);
}

Matrix interior_psd(Rng& rng, const FockBasisSpec& basis, int band)
{
    const long dim = basis.dim();
    Matrix g = Matrix::Zero(dim, dim);
    for (long j = 0; j < dim; ++j) {
        if (!basis.is_interior(j, band)) continue;
        for (long i = 0; i < dim; ++i)
            if (basis.is_interior(i, band)) g(i, j) = rng.normal_complex() * std::exp(-0.2 * static_cast<double>(i));
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

} // namespace

TEST_CASE("paper_constants_arithmetic_spot_checks")
{
    // Two-photon, alpha = 0, k = 2: delta2 = 6, nu = 2, mu = 36/4 = 9, drift c = 1.
    ModelParams p2;
    p2.l = 2;
    p2.alpha = 0.0;
    const auto s = paper_constants("l_photon", p2, 2.0);
    CHECK(s.form == BoundForm::drift);
    CHECK(s.c == Approx(1.0));
    CHECK(s.mu == Approx(9.0));

    // qOU decaying, k = 2: c = (lambda^2 - mu^2)/2.
    ModelParams pq;
    pq.lambda = std::sqrt(2.0);
    pq.mu = 1.0;
    const auto sq = paper_constants("qou", pq, 2.0);
    CHECK(sq.form == BoundForm::drift);
    CHECK(sq.c == Approx(0.5));

    // qOU growing, k = 2, mu = 2: omega = (k/2)(2 mu^2 + k) = 10.
    ModelParams pg;
    pg.lambda = 1.0;
    pg.mu = 2.0;
    const auto sg = paper_constants("qou", pg, 2.0);
    CHECK(sg.form == BoundForm::plain_omega);
    CHECK(sg.omega == Approx(10.0));

    CHECK_THROWS_AS(paper_constants("cnot", ModelParams{}, 2.0), std::invalid_argument);
}

TEST_CASE("scalar_bound_formula_values")
{
    // delta_l at l = 2, k = 2: 6 + 4 sqrt(2) |alpha|^2.
    CHECK(delta_l_photon(2, 2.0, 2.0) == Approx(6.0 + 4.0 * std::sqrt(2.0) * 4.0));
    // sup_{x>=0}(-x^2 + d x) = d^2/4.
    CHECK(power_drift_sup(6.0, 2.0) == Approx(9.0));
    CHECK(power_drift_sup(5.0, 1.0) == Approx(5.0));
    CHECK_THROWS_AS(power_drift_sup(1.0, 0.5), std::invalid_argument);
    // Perturbation constant at l = 2, d_H = 1, Lambda = 1:
    // (pi^2/3)(1 + 3 sqrt(2) |alpha|^2 + |alpha|^4)/2.
    const double a2 = 4.0;
    CHECK(perturbation_c_ldiss(2, 2.0, 1, 1.0)
          == Approx((M_PI * M_PI / 3.0) * (1.0 + 3.0 * std::sqrt(2.0) * a2 + a2 * a2) / 2.0));
}

TEST_CASE("certify_pure_loss_margin_is_number_operator")
{
    const FockBasisSpec basis({40});
    const auto gen = realized_model("pure_loss", ModelParams{}, basis);
    const auto rep = certify_moment_bound(gen, paper_constants("pure_loss", ModelParams{}, 2.0));
    CHECK(rep.verdict == Verdict::certified);
    // A = -N on the interior, so P = N and the margin is the vacuum eigenvalue.
    CHECK(rep.margin == Approx(0.0).margin(1e-12));
}

TEST_CASE("certify_catalog_paper_constants")
{
    const FockBasisSpec basis({60});
    struct Row {
        std::string model;
        ModelParams p;
        double k;
    };
    std::vector<Row> rows;
    {
        ModelParams p;
        p.lambda = std::sqrt(2.0);
        p.mu = 1.0;
        rows.push_back({"qou", p, 1.0});
        rows.push_back({"qou", p, 2.0});
        rows.push_back({"qou", p, 4.0});
    }
    {
        ModelParams p;
        p.lambda = 1.0;
        p.mu = 2.0;
        rows.push_back({"qou", p, 2.0});
    }
    {
        ModelParams p;
        p.l = 2;
        p.alpha = 2.0;
        rows.push_back({"l_photon", p, 2.0});
    }
    {
        ModelParams p;
        p.l = 2;
        p.alpha = 2.0;
        p.h_coeff = 1.0;
        rows.push_back({"l_photon_plus_hamiltonian", p, 2.0});
    }
    {
        ModelParams p;
        p.alpha = 2.0;
        p.epsilon = 0.1;
        rows.push_back({"z_theta", p, 2.0});
    }
    for (const auto& row : rows) {
        const auto gen = realized_model(row.model, row.p, basis);
        const auto rep = certify_moment_bound(gen, paper_constants(row.model, row.p, row.k));
        INFO(row.model << " k=" << row.k);
        CHECK(rep.verdict == Verdict::certified);
        CHECK(rep.margin >= -CertificateReport::margin_tol);
    }
}

TEST_CASE("certify_rejects_small_cutoff")
{
    const FockBasisSpec basis({12});
    ModelParams p;
    p.l = 2;
    p.alpha = 1.0;
    const auto gen = realized_model("l_photon", p, basis);
    CHECK_THROWS_AS(certify_moment_bound(gen, paper_constants("l_photon", p, 2.0)),
                    std::invalid_argument);
}

TEST_CASE("certify_detects_genuine_violation_with_witness")
{
    // Pure loss certifies omega = 0; demanding decay it does not have, in
    // drift form with mu = 0 and c > 0, must be rejected with a vacuum
    // witness (the vacuum is a fixed point).
    const FockBasisSpec basis({40});
    const auto gen = realized_model("pure_loss", ModelParams{}, basis);
    MomentBoundSpec spec;
    spec.k = SobolevOrder(2.0);
    spec.form = BoundForm::drift;
    spec.c = 0.5;
    spec.mu = 0.0;
    spec.source = "deliberately false";
    const auto rep = certify_moment_bound(gen, spec);
    CHECK(rep.verdict == Verdict::violated);
    REQUIRE(rep.witness_abs.size() == 40);
    CHECK(rep.witness_abs[0] == Approx(1.0).margin(1e-8));
}

TEST_CASE("certify_labels_edge_band_violations_inconclusive")
{
    // A hand-corrupted realization: positive garbage on the last diagonal
    // entry of G, the kind of artifact a careless truncation could produce.
    // The narrow-band check sees a violation; the exactness band does not.
    const FockBasisSpec basis({40});
    auto gen = realized_model("pure_loss", ModelParams{}, basis);
    Matrix g = Matrix(gen.G);
    g(39, 39) = 25.0;
    gen.G = TruncatedOperator(basis, g).sparse();
    gen.Gdag = SparseMatrix(gen.G.adjoint());

    MomentBoundSpec spec = paper_constants("pure_loss", ModelParams{}, 2.0);
    const auto narrow = certify_moment_bound(gen, spec, 0);
    CHECK(narrow.verdict == Verdict::inconclusive_edge);
    const auto exact = certify_moment_bound(gen, spec);
    CHECK(exact.verdict == Verdict::certified);
}

TEST_CASE("estimate_tight_constants_dominate_paper_values")
{
    const FockBasisSpec basis({60});
    {
        ModelParams p;
        auto gen = realized_model("pure_loss", p, basis);
        CHECK(std::abs(estimate_tight_omega(gen, SobolevOrder(2.0))) <= 1e-9);
    }
    {
        ModelParams p;
        p.lambda = std::sqrt(2.0);
        p.mu = 1.0;
        auto gen = realized_model("qou", p, basis);
        const auto s = paper_constants("qou", p, 2.0);
        const double cstar = estimate_tight_c(gen, SobolevOrder(2.0), s.mu);
        CHECK(cstar >= s.c - 1e-6);
    }
    {
        ModelParams p;
        p.lambda = 1.0;
        p.mu = 2.0;
        auto gen = realized_model("qou", p, basis);
        const auto s = paper_constants("qou", p, 2.0);
        CHECK(estimate_tight_omega(gen, SobolevOrder(2.0)) <= s.omega + 1e-6);
    }
    {
        ModelParams p;
        p.l = 3;
        p.alpha = 1.0;
        auto gen = realized_model("l_photon", p, basis);
        const auto s = paper_constants("l_photon", p, 2.0);
        const double cstar = estimate_tight_c(gen, SobolevOrder(2.0), s.mu);
        CHECK(cstar >= 0.5 * 3.0 - 1e-6); // >= l/2
    }
}

TEST_CASE("estimated_constants_certify")
{
    const FockBasisSpec basis({60});
    ModelParams p;
    p.l = 2;
    p.alpha = 1.5;
    const auto gen = realized_model("l_photon", p, basis);
    MomentBoundSpec spec;
    spec.k = SobolevOrder(2.0);
    spec.form = BoundForm::plain_omega;
    spec.omega = estimate_tight_omega(gen, SobolevOrder(2.0)) + 1e-10;
    spec.source = "estimated";
    CHECK(certify_moment_bound(gen, spec).verdict == Verdict::certified);
    // Slightly below the estimate the inequality must fail.
    spec.omega -= 1e-6;
    CHECK(certify_moment_bound(gen, spec).verdict == Verdict::violated);
}

TEST_CASE("certificate_duality_soundness_on_interior_states")
{
    // When the operator certificate holds, the trace inequality holds for
    // random interior-supported PSD states (cross-check of the compression
    // argument).
    Rng rng(1234);
    const FockBasisSpec basis({48});
    ModelParams p;
    p.alpha = 1.5;
    p.epsilon = 0.2;
    const auto gen = realized_model("z_theta", p, basis);
    const auto spec = paper_constants("z_theta", p, 2.0);
    REQUIRE(certify_moment_bound(gen, spec).verdict == Verdict::certified);

    const Eigen::VectorXd w2 = weight_diagonal({2.0}, basis, 0.5);
    for (int trial = 0; trial < 25; ++trial) {
        const Matrix x = interior_psd(rng, basis, gen.degree);
        const Matrix lx = gen.apply(x);
        double lhs = 0.0, m = 0.0;
        for (long i = 0; i < x.rows(); ++i) {
            lhs += (w2(i) * lx(i, i)).real();
            m += (w2(i) * x(i, i)).real();
        }
        CHECK(lhs <= -spec.c * m + spec.mu + 1e-9 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("scalar_lemma_suite_clean_run")
{
    const auto rep = scalar_lemma_suite(2000, 7);
    INFO((rep.counterexamples.empty() ? "" : rep.counterexamples.front().lemma + ": "
                                               + rep.counterexamples.front().detail));
    CHECK(rep.passed());
    CHECK(rep.checks > 10000);
}

TEST_CASE("scalar_lemma_suite_rejects_bad_trials")
{
    CHECK_THROWS_AS(scalar_lemma_suite(0, 1), std::invalid_argument);
}

TEST_CASE("perturbation_experiment_ldiss_small_grid")
{
    const FockBasisSpec basis({30});
    const auto H = OperatorPolynomial::annihilation() + OperatorPolynomial::creation();
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-13;
    const auto rho0 = coherent_state(Complex(1.2, 0.0) * std::exp(Complex(0.0, M_PI / 4)), basis);
    const auto rep = perturbation_experiment_ldiss(2, 1.2, H, {0.05}, {0.5, 1.0}, basis, cfg, rho0);
    CHECK(rep.passed);
    CHECK(rep.worst_residual <= 1e-7);
    CHECK(rep.worst_ratio < 1.0);
    CHECK(rep.d_H == 1);
    CHECK(rep.lambda_max == Approx(1.0));
    for (const auto& row : rep.rows) CHECK(row.lhs <= row.rhs + 1e-7);
}

TEST_CASE("perturbation_experiment_ldiss_validates_hamiltonian")
{
    const FockBasisSpec basis({30});
    IntegratorConfig cfg;
    const auto rho0 = coherent_state(1.0, basis);
    // Non-symmetric H rejected.
    CHECK_THROWS_AS(perturbation_experiment_ldiss(2, 1.0, OperatorPolynomial::annihilation(),
                                                  {0.1}, {1.0}, basis, cfg, rho0),
                    std::invalid_argument);
    // deg(H) > 2(l-1) rejected.
    const auto H4 = annihilation_power(4) + creation_power(4);
    CHECK_THROWS_AS(perturbation_experiment_ldiss(2, 1.0, H4, {0.1}, {1.0}, basis, cfg, rho0),
                    std::invalid_argument);
}

TEST_CASE("perturbation_experiment_qou_scaling")
{
    const FockBasisSpec basis({30});
    IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-13;
    const auto rho0 = coherent_state(1.0, basis);
    const auto rep = perturbation_experiment_qou(std::sqrt(2.0), 1.0, 1.0, 0.0, {1e-2, 1e-3},
                                                 {1.0, 3.0}, basis, cfg, rho0);
    CHECK(rep.passed);
    CHECK(rep.max_rel_spread <= 0.05);
    CHECK(rep.empirical_constant > 0.0);

    CHECK_THROWS_AS(perturbation_experiment_qou(1.0, 2.0, 1.0, 0.0, {1e-2, 1e-3}, {1.0}, basis,
                                                cfg, rho0),
                    std::invalid_argument);
}

TEST_CASE("ec_lower_bound_identical_channels_vanish")
{
    ModelParams p;
    p.lambda = std::sqrt(2.0);
    p.mu = 1.0;
    const auto gen = std::get<GkslGenerator>(catalog("qou", p));
    IntegratorConfig cfg;
    cfg.rtol = 1e-9;
    cfg.atol = 1e-12;
    const FockBasisSpec joint({20, 6});
    const auto rep = ec_diamond_lower_bound(gen, gen, 1.0, 2.0, 6, 11, joint, cfg);
    CHECK(rep.lower_bound <= 1e-10);
    CHECK(rep.identity_consistent);
}

TEST_CASE("ec_lower_bound_detects_perturbation")
{
    ModelParams p;
    p.lambda = std::sqrt(2.0);
    p.mu = 1.0;
    const auto genA = std::get<GkslGenerator>(catalog("qou", p));
    const double eps = 0.1;
    const auto genB = GkslGenerator::build(
        OperatorPolynomial::zero(),
        {OperatorPolynomial::annihilation() * p.lambda, OperatorPolynomial::creation() * p.mu,
         OperatorPolynomial::annihilation() * std::sqrt(eps)});
    IntegratorConfig cfg;
    cfg.rtol = 1e-9;
    cfg.atol = 1e-12;
    const FockBasisSpec joint({20, 6});
    const auto rep = ec_diamond_lower_bound(genA, genB, 1.0, 2.0, 10, 13, joint, cfg);
    CHECK(rep.lower_bound > 1e-3);
    CHECK(rep.identity_consistent);
    CHECK(rep.lower_bound <= rep.lemma_identity + 1e-12);

    // E = 0 restricts system probes to the vacuum; the bound is still a
    // valid lower bound and is typically smaller.
    const auto rep0 = ec_diamond_lower_bound(genA, genB, 1.0, 0.0, 6, 13, joint, cfg);
    CHECK(rep0.lower_bound >= 0.0);
    CHECK(rep0.lower_bound <= rep.lemma_identity + 1e-12);
}
