// dynamics.hpp — Master-equation integration on truncated Fock spaces
//
// Integrates dρ/dt = L(ρ) (and the non-autonomous variant) with an embedded
// Dormand-Prince 5(4) pair, error measured in the Frobenius norm, or a fixed
// RK4 for reproducibility runs. Trace drift is a diagnostic, never silently
// corrected; leakage into the cutoff boundary aborts the run instead of
// producing quietly wrong tails.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "focklind/generator.hpp"
#include "focklind/sobolev.hpp"

namespace focklind {

struct LeakageError : std::runtime_error {
    LeakageError(double t_, double leakage_, double tolerance_)
        : std::runtime_error("leakage " + std::to_string(leakage_) + " exceeded tolerance "
                             + std::to_string(tolerance_) + " at t = " + std::to_string(t_)),
          t(t_), leakage(leakage_), tolerance(tolerance_)
    {
    }
    double t, leakage, tolerance;
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
    enum class Method { rk4_fixed, rk45_adaptive };
    Method method = Method::rk45_adaptive;
    double dt = 1e-3;    // fixed-step size (rk4)
    double rtol = 1e-8;  // adaptive tolerances (rk45)
    double atol = 1e-10;
    double t_final = 1.0;
    std::vector<double> sample_times;   // sorted, within [0, t_final]; filled uniformly if empty
    double leakage_tolerance = 1e-6;
    bool renormalize_trace = false;
    std::vector<double> sobolev_k;      // W^{k,1} diagnostics per sample
    std::vector<std::pair<std::string, Matrix>> observables; // Re tr[ρ X] per sample
    long max_steps = 50'000'000;

    void validate() const
    {
        if (t_final < 0.0) throw std::invalid_argument("IntegratorConfig: t_final must be >= 0");
        if (method == Method::rk4_fixed && dt <= 0.0)
            throw std::invalid_argument("IntegratorConfig: dt must be > 0");
        if (method == Method::rk45_adaptive && (rtol <= 0.0 || atol <= 0.0))
            throw std::invalid_argument("IntegratorConfig: rtol and atol must be > 0");
        double prev = 0.0;
        for (double s : sample_times) {
            if (s < prev || s > t_final + 1e-12)
                throw std::invalid_argument("IntegratorConfig: sample_times must be sorted within [0, t_final]");
            prev = s;
        }
    }

    std::vector<double> effective_samples() const
    {
        if (!sample_times.empty()) return sample_times;
        std::vector<double> out;
        const int n = 50;
        for (int i = 0; i <= n; ++i) out.push_back(t_final * i / n);
        return out;
    }
};

struct SimulationTrace {
    std::vector<double> times;
    std::vector<double> trace;
    std::vector<double> min_eig;
    std::vector<double> leakage;
    std::vector<std::vector<double>> sobolev;      // [sample][k index]
    std::vector<std::vector<double>> observables;  // [sample][observable index]
    std::vector<double> sobolev_k;
    std::vector<std::string> observable_names;
    Matrix final_state;
};

namespace detail {

// Population within `band` of any per-mode cutoff.
inline double boundary_population(const Matrix& rho, const FockBasisSpec& basis, int band)
{
    double out = 0.0;
    for (long i = 0; i < rho.rows(); ++i)
        if (!basis.is_interior(i, band)) out += std::abs(rho(i, i).real());
    return out;
}

using Rhs = std::function<Matrix(double, const Matrix&)>;

struct StepController {
    double dt;
    double rtol, atol;

    // Returns true when the proposed step is accepted; updates dt either way.
    bool assess(double err_norm, double scale)
    {
        const double ratio = err_norm / std::max(scale, 1e-300);
        const double safety = 0.9;
        double factor = (ratio > 0.0) ? safety * std::pow(ratio, -0.2) : 5.0;
        factor = std::clamp(factor, 0.2, 5.0);
        const bool accept = ratio <= 1.0;
        dt *= factor;
        return accept;
    }
};

// Dormand-Prince 5(4). Returns the 5th-order update and the embedded error.
inline void dopri5_step(const Rhs& f, double t, const Matrix& y, double h, Matrix& y_out,
                        Matrix& err_out)
{
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    const Matrix k1 = f(t, y);
    const Matrix k2 = f(t + c2 * h, y + h * (1.0 / 5) * k1);
    const Matrix k3 = f(t + c3 * h, y + h * ((3.0 / 40) * k1 + (9.0 / 40) * k2));
    const Matrix k4 = f(t + c4 * h, y + h * ((44.0 / 45) * k1 + (-56.0 / 15) * k2 + (32.0 / 9) * k3));
    const Matrix k5 = f(t + c5 * h,
                        y + h * ((19372.0 / 6561) * k1 + (-25360.0 / 2187) * k2
                                 + (64448.0 / 6561) * k3 + (-212.0 / 729) * k4));
    const Matrix k6 = f(t + h,
                        y + h * ((9017.0 / 3168) * k1 + (-355.0 / 33) * k2 + (46732.0 / 5247) * k3
                                 + (49.0 / 176) * k4 + (-5103.0 / 18656) * k5));
    y_out = y + h * ((35.0 / 384) * k1 + (500.0 / 1113) * k3 + (125.0 / 192) * k4
                     + (-2187.0 / 6784) * k5 + (11.0 / 84) * k6);
    const Matrix k7 = f(t + h, y_out);
    err_out = h * ((35.0 / 384 - 5179.0 / 57600) * k1 + (500.0 / 1113 - 7571.0 / 16695) * k3
                   + (125.0 / 192 - 393.0 / 640) * k4 + (-2187.0 / 6784 + 92097.0 / 339200) * k5
                   + (11.0 / 84 - 187.0 / 2100) * k6 + (-1.0 / 40) * k7);
}

inline void rk4_step(const Rhs& f, double t, const Matrix& y, double h, Matrix& y_out)
{
    const Matrix k1 = f(t, y);
    const Matrix k2 = f(t + 0.5 * h, y + (0.5 * h) * k1);
    const Matrix k3 = f(t + 0.5 * h, y + (0.5 * h) * k2);
    const Matrix k4 = f(t + h, y + h * k3);
    y_out = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct RawRunOptions {
    bool check_leakage = true;
    int leakage_band = 1;
};

// Core loop shared by all entry points: advances `state` from t0 by `span`,
// invoking `on_sample` at the requested offsets (relative to t0).
inline void integrate_raw(const Rhs& f, Matrix& state, double t0, double span,
                          const std::vector<double>& sample_offsets, const IntegratorConfig& cfg,
                          const FockBasisSpec& basis, const RawRunOptions& opts,
                          const std::function<void(double, const Matrix&)>& on_sample)
{
    std::size_t next_sample = 0;
    auto emit_due_samples = [&](double offset) {
        while (next_sample < sample_offsets.size()
               && sample_offsets[next_sample] <= offset + 1e-12 * std::max(1.0, span)) {
            on_sample(sample_offsets[next_sample], state);
            ++next_sample;
        }
    };

    emit_due_samples(0.0);
    if (span <= 0.0) return;

    double t = 0.0; // offset from t0
    long steps = 0;
    const bool adaptive = cfg.method == IntegratorConfig::Method::rk45_adaptive;
    StepController ctl{adaptive ? std::min(span, 1e-2) : cfg.dt, cfg.rtol, cfg.atol};

    while (t < span - 1e-14 * std::max(1.0, span)) {
        if (++steps > cfg.max_steps) throw IntegrationError("integrate: step budget exhausted");
        double target = span;
        if (next_sample < sample_offsets.size())
            target = std::min(target, sample_offsets[next_sample]);
        double h = std::min(ctl.dt, target - t);
        if (h <= 0.0) { // sample boundary already reached
            emit_due_samples(t);
            continue;
        }

        Matrix y_next, err;
        if (adaptive) {
            dopri5_step(f, t0 + t, state, h, y_next, err);
            if (!y_next.allFinite() || !err.allFinite())
                throw IntegrationError("integrate: non-finite values (NaN) detected");
            const double scale = cfg.atol + cfg.rtol * state.norm();
            const double keep_dt = h;
            ctl.dt = h; // controller scales relative to the step actually taken
            if (!ctl.assess(err.norm(), scale)) {
                if (ctl.dt < 1e-14 * std::max(1.0, span))
                    throw IntegrationError("integrate: step size underflow in adaptive mode");
                (void)keep_dt;
                continue; // reject, retry with smaller dt
            }
        } else {
            rk4_step(f, t0 + t, state, h, y_next);
            if (!y_next.allFinite())
                throw IntegrationError("integrate: non-finite values (NaN) detected");
        }

        state = std::move(y_next);
        t += h;

        if (cfg.renormalize_trace) {
            const double tr = state.trace().real();
            if (std::abs(tr) > 1e-300) state /= tr;
        }
        if (opts.check_leakage) {
            const double lk = boundary_population(state, basis, opts.leakage_band);
            if (lk > cfg.leakage_tolerance) throw LeakageError(t0 + t, lk, cfg.leakage_tolerance);
        }
        emit_due_samples(t);
    }
    emit_due_samples(span + 1.0); // flush anything left by rounding
}

inline SimulationTrace run_trace(const Rhs& f, const Matrix& rho0, const FockBasisSpec& basis,
                                 int band, const IntegratorConfig& cfg, double t0)
{
    cfg.validate();
    SimulationTrace tr;
    tr.sobolev_k = cfg.sobolev_k;
    for (const auto& [name, X] : cfg.observables) tr.observable_names.push_back(name);

    const auto samples = cfg.effective_samples();
    Matrix state = rho0;

    const double init_leak = boundary_population(state, basis, band);
    if (init_leak > cfg.leakage_tolerance)
        throw LeakageError(t0, init_leak, cfg.leakage_tolerance);

    auto record = [&](double offset, const Matrix& y) {
        tr.times.push_back(t0 + offset);
        tr.trace.push_back(y.trace().real());
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (y + y.adjoint()), Eigen::EigenvaluesOnly);
        tr.min_eig.push_back(es.eigenvalues().minCoeff());
        tr.leakage.push_back(boundary_population(y, basis, band));
        std::vector<double> ws;
        for (double k : cfg.sobolev_k) ws.push_back(sobolev_norm(y, SobolevOrder(k, basis.modes()), basis));
        tr.sobolev.push_back(std::move(ws));
        std::vector<double> obs;
        for (const auto& [name, X] : cfg.observables) obs.push_back((y * X).trace().real());
        tr.observables.push_back(std::move(obs));
    };

    RawRunOptions opts;
    opts.leakage_band = band;
    integrate_raw(f, state, t0, cfg.t_final, samples, cfg, basis, opts, record);
    tr.final_state = std::move(state);
    return tr;
}

} // namespace detail

inline SimulationTrace evolve(const RealizedGenerator& gen, const DensityMatrix& rho0,
                              const IntegratorConfig& cfg)
{
    if (!(rho0.basis() == gen.basis)) throw std::invalid_argument("evolve: basis mismatch");
    auto rhs = [&gen](double, const Matrix& y) { return gen.apply(y); };
    return detail::run_trace(rhs, rho0.entries(), gen.basis, std::max(gen.degree, 1), cfg, 0.0);
}

// Non-autonomous master equation: coefficients are evaluated at the RK stage
// times; each materialization produces a fresh immutable generator.
inline SimulationTrace evolve_td(const TimeDependentGenerator& tdgen, const DensityMatrix& rho0,
                                 const IntegratorConfig& cfg, double s0 = 0.0,
                                 const FockBasisSpec* basis_override = nullptr)
{
    const FockBasisSpec basis = basis_override ? *basis_override : rho0.basis();
    if (s0 < 0.0) throw std::invalid_argument("evolve_td: start time must be >= 0");
    auto rhs = [&tdgen, &basis](double t, const Matrix& y) {
        return materialize_at(tdgen, t, basis).apply(y);
    };
    return detail::run_trace(rhs, rho0.entries(), basis, std::max(tdgen.degree, 1), cfg, s0);
}

// Evolves an arbitrary (not necessarily positive or normalized) matrix; used
// by the perturbation machinery where Duhamel integrands are not states.
inline Matrix propagate_matrix(const RealizedGenerator& gen, const Matrix& x0, double t,
                               const IntegratorConfig& cfg)
{
    IntegratorConfig local = cfg;
    local.t_final = t;
    local.sample_times = {t};
    local.sobolev_k.clear();
    local.observables.clear();
    local.renormalize_trace = false;
    local.validate();
    Matrix state = x0;
    detail::RawRunOptions opts;
    opts.check_leakage = false;
    auto rhs = [&gen](double, const Matrix& y) { return gen.apply(y); };
    detail::integrate_raw(rhs, state, 0.0, t, {}, local, gen.basis, opts, {});
    return state;
}

// Gauss-Legendre nodes/weights on [0, 1] by Newton iteration on P_n.
inline void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (x + 1.0);
        weights[static_cast<std::size_t>(n - 1 - i)] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

struct SemigroupDifference {
    Matrix difference;       // e^{tL_A}(ρ0) - e^{tL_B}(ρ0)
    double duhamel_residual; // ‖difference - Duhamel quadrature‖₁
};

// Direct difference of the two evolutions plus the residual of the Duhamel
// identity  e^{tA}ρ - e^{tB}ρ = t ∫₀¹ e^{(1-s)tA} (A - B) e^{stB} ρ ds,
// evaluated with Gauss-Legendre quadrature in s.
inline SemigroupDifference semigroup_difference(const RealizedGenerator& genA,
                                                const RealizedGenerator& genB,
                                                const DensityMatrix& rho0, double t,
                                                const IntegratorConfig& cfg,
                                                int quadrature_order = 32)
{
    if (!(genA.basis == genB.basis))
        throw std::invalid_argument("semigroup_difference: generators on different bases");
    if (!(rho0.basis() == genA.basis))
        throw std::invalid_argument("semigroup_difference: state basis mismatch");

    SemigroupDifference out;
    const Matrix endA = propagate_matrix(genA, rho0.entries(), t, cfg);
    const Matrix endB = propagate_matrix(genB, rho0.entries(), t, cfg);
    out.difference = endA - endB;

    if (t == 0.0) {
        out.duhamel_residual = trace_norm(out.difference);
        return out;
    }

    std::vector<double> nodes, weights;
    gauss_legendre_unit(quadrature_order, nodes, weights);

    Matrix quad = Matrix::Zero(rho0.entries().rows(), rho0.entries().cols());
    Matrix vb = rho0.entries();
    double s_prev = 0.0;
    for (int q = 0; q < quadrature_order; ++q) {
        const double s = nodes[static_cast<std::size_t>(q)];
        vb = propagate_matrix(genB, vb, (s - s_prev) * t, cfg);
        s_prev = s;
        const Matrix kick = genA.apply(vb) - genB.apply(vb);
        const Matrix back = propagate_matrix(genA, kick, (1.0 - s) * t, cfg);
        quad += weights[static_cast<std::size_t>(q)] * back;
    }
    quad *= t;
    out.duhamel_residual = trace_norm(Matrix(out.difference - quad));
    return out;
}

} // namespace focklind
