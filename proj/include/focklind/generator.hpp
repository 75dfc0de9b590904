// generator.hpp — GKSL generators, catalog models, superoperator action
//
// A generator is assembled symbolically (Hamiltonian + jump polynomials,
// drift G = -iH - 1/2 Σ L†L derived in canonical form) and realized on a
// truncated basis as sparse matrices. apply/adjoint_apply are the
// Schrödinger and Heisenberg actions; both are pure and reentrant.
//
// Overall rates fold into the jumps as √κ scaling (κ·L[A] = L[√κ·A]); a
// Hamiltonian strength ε folds into the coefficient (ε·H[A] = H[ε·A]).

#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "focklind/ccr.hpp"
#include "focklind/fock.hpp"

namespace focklind {

struct GkslGenerator {
    OperatorPolynomial H;
    std::vector<OperatorPolynomial> jumps;
    OperatorPolynomial G;  // derived
    int degree = 0;        // max over H and jumps

    static GkslGenerator build(const OperatorPolynomial& H,
                               const std::vector<OperatorPolynomial>& jumps)
    {
        GkslGenerator gen{H, jumps, gksl_G(H, jumps), 0};
        gen.degree = focklind::degree(H);
        for (const auto& L : jumps) gen.degree = std::max(gen.degree, focklind::degree(L));
        // Trace annihilation holds iff G + G† + Σ L†L vanishes identically;
        // this is the symbolic probe of the GKSL form.
        OperatorPolynomial probe = gen.G + gen.G.adjoint();
        for (const auto& L : jumps) probe = probe + L.adjoint() * L;
        double scale = std::max(1.0, gen.G.max_abs_coeff());
        if (probe.max_abs_coeff() > 1e-12 * scale)
            throw std::logic_error("GkslGenerator: trace annihilation probe failed");
        return gen;
    }
};

// Time-dependent scalar coefficient drawn from a closed catalog of
// continuous primitives: c0 + c1·e^{iωt}, or a tabulated sample list with
// linear interpolation. Continuity is guaranteed by construction.
class CoeffFn {
public:
    static CoeffFn constant(Complex c) { return CoeffFn(c, 0.0, 0.0); }
    static CoeffFn harmonic(Complex c1, double omega) { return CoeffFn(0.0, c1, omega); }
    static CoeffFn affine_harmonic(Complex c0, Complex c1, double omega)
    {
        return CoeffFn(c0, c1, omega);
    }
    static CoeffFn tabulated(std::vector<double> times, std::vector<Complex> values)
    {
        if (times.size() != values.size() || times.size() < 2)
            throw std::invalid_argument("CoeffFn::tabulated: need matching lists, length >= 2");
        if (!std::is_sorted(times.begin(), times.end()))
            throw std::invalid_argument("CoeffFn::tabulated: times must be sorted");
        CoeffFn f(0.0, 0.0, 0.0);
        f.times_ = std::move(times);
        f.values_ = std::move(values);
        return f;
    }

    Complex operator()(double t) const
    {
        if (!times_.empty()) {
            if (t <= times_.front()) return values_.front();
            if (t >= times_.back()) return values_.back();
            const auto hi = std::upper_bound(times_.begin(), times_.end(), t);
            const auto i = static_cast<std::size_t>(hi - times_.begin());
            const double u = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
            return (1.0 - u) * values_[i - 1] + u * values_[i];
        }
        if (c1_ == 0.0) return c0_;
        return c0_ + c1_ * std::exp(Complex(0.0, omega_ * t));
    }

    bool is_constant() const { return times_.empty() && c1_ == 0.0; }

private:
    CoeffFn(Complex c0, Complex c1, double omega) : c0_(c0), c1_(c1), omega_(omega) {}
    Complex c0_, c1_;
    double omega_;
    std::vector<double> times_;
    std::vector<Complex> values_;
};

// p(t) = Σ_i f_i(t) · p_i with fixed polynomial parts.
struct TimeDependentPolynomial {
    int modes = 1;
    std::vector<std::pair<OperatorPolynomial, CoeffFn>> parts;

    static TimeDependentPolynomial constant(const OperatorPolynomial& p)
    {
        return {p.modes(), {{p, CoeffFn::constant(1.0)}}};
    }

    OperatorPolynomial at(double t) const
    {
        OperatorPolynomial out(modes);
        for (const auto& [p, f] : parts) out = out + p * f(t);
        return out;
    }

    int sup_degree() const
    {
        int d = 0;
        for (const auto& [p, f] : parts) d = std::max(d, p.degree());
        return d;
    }

    bool is_constant() const
    {
        for (const auto& [p, f] : parts)
            if (!f.is_constant()) return false;
        return true;
    }
};

struct TimeDependentGenerator {
    TimeDependentPolynomial H;                  // symmetric at every t
    std::vector<TimeDependentPolynomial> jumps;
    int degree = 0;                             // sup over time

    static TimeDependentGenerator build(TimeDependentPolynomial H,
                                        std::vector<TimeDependentPolynomial> jumps)
    {
        TimeDependentGenerator gen{std::move(H), std::move(jumps), 0};
        gen.degree = gen.H.sup_degree();
        for (const auto& j : gen.jumps) gen.degree = std::max(gen.degree, j.sup_degree());
        // materialization at t = 0 validates symmetry and the GKSL probe
        (void)gen.materialize_symbolic(0.0);
        return gen;
    }

    GkslGenerator materialize_symbolic(double s) const
    {
        if (s < 0.0) throw std::invalid_argument("materialize: time must be >= 0");
        std::vector<OperatorPolynomial> js;
        js.reserve(jumps.size());
        for (const auto& j : jumps) js.push_back(j.at(s));
        return GkslGenerator::build(H.at(s), js);
    }

    bool is_constant() const
    {
        if (!H.is_constant()) return false;
        for (const auto& j : jumps)
            if (!j.is_constant()) return false;
        return true;
    }
};

// Matrices of one generator on a fixed basis. The exactness band equals the
// polynomial degree: entries of apply/adjoint_apply with all mode indices
// below M_i - degree agree with the infinite-dimensional values.
struct RealizedGenerator {
    FockBasisSpec basis;
    SparseMatrix G, Gdag;
    std::vector<SparseMatrix> L, Ldag;
    int degree = 0;

    // Schrödinger action: G ρ + ρ G† + Σ_j L_j ρ L_j†.
    Matrix apply(const Matrix& rho) const
    {
        if (rho.rows() != basis.dim() || rho.cols() != basis.dim())
            throw std::invalid_argument("apply: dimension mismatch");
        Matrix out = G * rho;
        out.noalias() += rho * Gdag;
        for (std::size_t j = 0; j < L.size(); ++j) {
            const Matrix lr = L[j] * rho;
            out.noalias() += lr * Ldag[j];
        }
        return out;
    }

    // Heisenberg action: G† X + X G + Σ_j L_j† X L_j.
    Matrix adjoint_apply(const Matrix& X) const
    {
        if (X.rows() != basis.dim() || X.cols() != basis.dim())
            throw std::invalid_argument("adjoint_apply: dimension mismatch");
        Matrix out = Gdag * X;
        out.noalias() += X * G;
        for (std::size_t j = 0; j < L.size(); ++j) {
            const Matrix lx = Ldag[j] * X;
            out.noalias() += lx * L[j];
        }
        return out;
    }
};

inline RealizedGenerator realize(const GkslGenerator& gen, FockBasisSpec basis)
{
    basis.set_edge_band(std::min(gen.degree, basis.min_cutoff() - 1));
    RealizedGenerator out{basis, {}, {}, {}, {}, gen.degree};
    const auto g = focklind::realize(gen.G, basis);
    out.G = g.sparse();
    out.Gdag = SparseMatrix(out.G.adjoint());
    for (const auto& Lp : gen.jumps) {
        const auto l = focklind::realize(Lp, basis);
        out.L.push_back(l.sparse());
        out.Ldag.emplace_back(out.L.back().adjoint());
    }
    return out;
}

inline RealizedGenerator materialize_at(const TimeDependentGenerator& tdgen, double s,
                                        const FockBasisSpec& basis)
{
    return realize(tdgen.materialize_symbolic(s), basis);
}

// ---------------------------------------------------------------------------
// Model catalog
// ---------------------------------------------------------------------------

struct ModelParams {
    int l = 2;                // photon number of the dissipation
    Complex alpha = 2.0;      // coherent amplitude of the code space
    double kappa = 1.0;       // overall dissipation rate
    double epsilon = 0.0;     // perturbation strength
    double lambda = 1.0;      // qOU loss amplitude
    double mu = 0.0;          // qOU gain amplitude
    double period = 1.0;      // gate period T for time-dependent models
    double h_coeff = 1.0;     // coefficient of the (a + a†) Hamiltonian
};

using CatalogEntry = std::variant<GkslGenerator, TimeDependentGenerator>;

namespace detail {

inline Complex ipow(Complex z, int p)
{
    Complex out = 1.0;
    for (int t = 0; t < p; ++t) out *= z;
    return out;
}

} // namespace detail

inline CatalogEntry catalog(const std::string& name, const ModelParams& p)
{
    const auto a = OperatorPolynomial::annihilation();
    const auto ad = OperatorPolynomial::creation();
    const double sk = std::sqrt(p.kappa);
    if (p.kappa <= 0.0) throw std::invalid_argument("catalog: kappa must be > 0");

    if (name == "pure_loss") {
        return GkslGenerator::build(OperatorPolynomial::zero(), {a * sk});
    }
    if (name == "qou") {
        if (p.lambda < 0.0 || p.mu < 0.0)
            throw std::invalid_argument("catalog: qou requires lambda, mu >= 0");
        std::vector<OperatorPolynomial> jumps;
        if (p.lambda > 0.0) jumps.push_back(a * p.lambda);
        if (p.mu > 0.0) jumps.push_back(ad * p.mu);
        return GkslGenerator::build(OperatorPolynomial::zero(), jumps);
    }
    if (name == "l_photon") {
        if (p.l < 1) throw std::invalid_argument("catalog: l must be >= 1");
        const auto L = annihilation_power(p.l) - OperatorPolynomial::constant(detail::ipow(p.alpha, p.l));
        return GkslGenerator::build(OperatorPolynomial::zero(), {L * sk});
    }
    if (name == "l_photon_plus_hamiltonian") {
        if (p.l < 1) throw std::invalid_argument("catalog: l must be >= 1");
        const auto L = annihilation_power(p.l) - OperatorPolynomial::constant(detail::ipow(p.alpha, p.l));
        const auto H = (a + ad) * p.h_coeff;
        return GkslGenerator::build(H, {L * sk});
    }
    if (name == "z_theta") {
        // κ L[a² - α²] + ε H[a + a†]; the a² - α² sign follows the gate
        // definition and the proof, not the lemma statement's a² + α².
        const auto L = annihilation_power(2) - OperatorPolynomial::constant(p.alpha * p.alpha);
        const auto H = (a + ad) * p.epsilon;
        return GkslGenerator::build(H, {L * sk});
    }
    if (name == "x_gate") {
        if (p.period <= 0.0) throw std::invalid_argument("catalog: x_gate requires period > 0");
        // κ L[a² - e^{2πit/T} α²]
        TimeDependentPolynomial jump;
        jump.modes = 1;
        jump.parts.push_back({annihilation_power(2) * sk, CoeffFn::constant(1.0)});
        jump.parts.push_back({OperatorPolynomial::constant(1.0) * sk,
                              CoeffFn::harmonic(-p.alpha * p.alpha, 2.0 * M_PI / p.period)});
        TimeDependentPolynomial H;
        H.modes = 1;
        return TimeDependentGenerator::build(H, {jump});
    }
    if (name == "cnot") {
        if (p.period <= 0.0) throw std::invalid_argument("catalog: cnot requires period > 0");
        if (p.epsilon < 0.0) throw std::invalid_argument("catalog: cnot requires epsilon >= 0");
        const double se = std::sqrt(p.epsilon);
        const Complex a2 = p.alpha * p.alpha;
        const auto A = OperatorPolynomial::annihilation(0, 2);
        const auto B2 = annihilation_power(2, 1, 2);
        // First jump: √κ (a² - α²), time independent.
        TimeDependentPolynomial j1 = TimeDependentPolynomial::constant(
            (annihilation_power(2, 0, 2) - OperatorPolynomial::constant(a2, 2)) * sk);
        // Second jump: √ε (b² - α² - (α/2)(1 - e^{2πit/T})(a - α))
        //            = √ε [(b² - (α/2)a - α²/2) + e^{2πit/T}((α/2)a - α²/2)].
        TimeDependentPolynomial j2;
        j2.modes = 2;
        const auto const_part = B2 - A * (p.alpha * 0.5) - OperatorPolynomial::constant(a2 * 0.5, 2);
        const auto osc_part = A * (p.alpha * 0.5) - OperatorPolynomial::constant(a2 * 0.5, 2);
        j2.parts.push_back({const_part * se, CoeffFn::constant(1.0)});
        j2.parts.push_back({osc_part * se, CoeffFn::harmonic(1.0, 2.0 * M_PI / p.period)});
        TimeDependentPolynomial H;
        H.modes = 2;
        return TimeDependentGenerator::build(H, {j1, j2});
    }
    throw std::invalid_argument("catalog: unknown model '" + name + "'");
}

struct CatalogDescription {
    std::string name;
    int modes;
    bool time_dependent;
    std::string parameters;
    std::string caveat;
};

inline std::vector<CatalogDescription> catalog_entries()
{
    return {
        {"pure_loss", 1, false, "kappa > 0", "vacuum is the unique fixed point"},
        {"qou", 1, false, "lambda >= 0, mu >= 0",
         "decaying regime (unique geometric steady state) requires lambda > mu"},
        {"l_photon", 1, false, "l >= 1, alpha, kappa > 0",
         "moment-growth constants stated for l >= 2, k >= 1"},
        {"l_photon_plus_hamiltonian", 1, false, "l >= 1, alpha, kappa > 0, h_coeff",
         "Hamiltonian degree must stay <= 2(l-1) for the drift constants"},
        {"z_theta", 1, false, "alpha, kappa > 0, epsilon",
         "implements L[a^2 - alpha^2] + epsilon H[a + adag]"},
        {"x_gate", 1, true, "alpha, kappa > 0, period T > 0",
         "jump a^2 - e^{2 pi i t/T} alpha^2; two-parameter evolution system"},
        {"cnot", 2, true, "alpha, kappa > 0, epsilon >= 0, period T > 0",
         "two-mode model; second jump couples mode 0 into mode 1"},
    };
}

} // namespace focklind
