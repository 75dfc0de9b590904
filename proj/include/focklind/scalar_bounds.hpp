// scalar_bounds.hpp — Closed-form scalar functions behind the moment bounds
//
// Everything here is a plain real-valued formula: the weight difference
// functions g_l, the polynomial-optimization supremum used to trade a
// leading-order drift for a constant, and the model-specific growth
// constants. The certificate machinery consumes these; the scalar lemma
// suite samples them against brute-force evaluation.

#pragma once

#include <cmath>
#include <stdexcept>

namespace focklind {

// f(x) = (x+1)^{k/2} on x >= -1, zero below.
inline double fock_weight_f(double x, double k)
{
    if (x < -1.0) return 0.0;
    return std::pow(x + 1.0, 0.5 * k);
}

// g_l(x) = f(x) - f(x-l) for x >= l-1, f(x) on [0, l-1), 0 below 0.
inline double g_l(double x, int l, double k)
{
    if (x < 0.0) return 0.0;
    if (x < static_cast<double>(l - 1)) return fock_weight_f(x, k);
    return fock_weight_f(x, k) - fock_weight_f(x - l, k);
}

// sup_{x >= 0} (-x^nu + delta x^{nu-1}) = delta^nu (nu-1)^{nu-1} / nu^nu,
// finite for nu >= 1 (0^0 = 1 at nu = 1).
inline double power_drift_sup(double delta, double nu)
{
    if (nu < 1.0) throw std::invalid_argument("power_drift_sup: requires nu >= 1");
    if (delta <= 0.0) return 0.0;
    if (nu == 1.0) return delta;
    return std::pow(delta, nu) * std::pow(nu - 1.0, nu - 1.0) / std::pow(nu, nu);
}

inline double factorial_d(int n)
{
    double out = 1.0;
    for (int t = 2; t <= n; ++t) out *= static_cast<double>(t);
    return out;
}

// Δ_l = (l+1)l + 2|α|^l k l^{k/2-1} √(l!)
inline double delta_l_photon(int l, double k, double abs_alpha)
{
    return static_cast<double>((l + 1) * l)
         + 2.0 * std::pow(abs_alpha, l) * k * std::pow(static_cast<double>(l), 0.5 * k - 1.0)
               * std::sqrt(factorial_d(l));
}

// μ_k^{(l)} with ν = l + k/2 - 1; the l-photon dissipation satisfies the
// drift inequality with pair (c, μ) = (l/2, (l/2) μ_k^{(l)}).
inline double mu_l_photon(int l, double k, double abs_alpha)
{
    if (l < 2) throw std::invalid_argument("mu_l_photon: stated for l >= 2");
    if (k < 1.0) throw std::invalid_argument("mu_l_photon: stated for k >= 1");
    const double nu = l + 0.5 * k - 1.0;
    return power_drift_sup(delta_l_photon(l, k, abs_alpha), nu);
}

// Hamiltonian-regularized variant: Δ_l picks up Λ (2l)^{k/2} √((2l)!) where
// Λ is the largest canonical coefficient of H and deg H <= 2(l-1).
inline double mu_l_photon_hamiltonian(int l, double k, double abs_alpha, double lambda_max)
{
    if (l < 2) throw std::invalid_argument("mu_l_photon_hamiltonian: stated for l >= 2");
    if (k < 1.0) throw std::invalid_argument("mu_l_photon_hamiltonian: stated for k >= 1");
    const double nu = l + 0.5 * k - 1.0;
    const double c = delta_l_photon(l, k, abs_alpha)
                   + lambda_max * std::pow(2.0 * l, 0.5 * k) * std::sqrt(factorial_d(2 * l));
    return power_drift_sup(c, nu);
}

// Displacement-perturbed two-photon dissipation: μ_k = (Δ₂ + 4εk)^ν (...),
// ν = k/2 + 1, drift constant 1.
inline double mu_z_theta(double k, double abs_alpha, double epsilon)
{
    if (k < 1.0) throw std::invalid_argument("mu_z_theta: stated for k >= 1");
    const double nu = 0.5 * k + 1.0;
    return power_drift_sup(delta_l_photon(2, k, abs_alpha) + 4.0 * epsilon * k, nu);
}

// qOU, decaying regime λ > μ: drift pair
//   c_k = (k/4)(λ² - μ²),
//   μ_k = (2(λ²+μ²+k)/(λ²-μ²))^{k/2} ((k/2-1)^{k/2-1}/(k/2)^{k/2})  for k >= 2,
//   μ_1 = (λ²+μ²+1)/2 via (N+1)^{-1/2} <= 1.
inline double qou_drift_c(double lambda, double mu, double k)
{
    return 0.25 * k * (lambda * lambda - mu * mu);
}

inline double qou_drift_mu(double lambda, double mu, double k)
{
    if (lambda <= mu) throw std::invalid_argument("qou_drift_mu: requires lambda > mu");
    if (k < 1.0) throw std::invalid_argument("qou_drift_mu: stated for k >= 1");
    const double l2 = lambda * lambda, m2 = mu * mu;
    if (k < 2.0) return 0.5 * k * (l2 + m2 + k);
    return power_drift_sup(2.0 * (l2 + m2 + k) / (l2 - m2), 0.5 * k);
}

// qOU, growing regime λ <= μ: plain growth exponent ω_k = (k/2)(2μ² + k).
inline double qou_omega(double mu, double k) { return 0.5 * k * (2.0 * mu * mu + k); }

// Explicit constant of the l-photon Hamiltonian-perturbation bound:
//   c = (π²/3) Λ d_H² √(d_H!) (1 + |α|^l (l+1)√(l!) + |α|^{2l}) / l!
inline double perturbation_c_ldiss(int l, double abs_alpha, int d_H, double lambda_max)
{
    const double al = std::pow(abs_alpha, l);
    return (M_PI * M_PI / 3.0) * lambda_max * static_cast<double>(d_H) * static_cast<double>(d_H)
         * std::sqrt(factorial_d(d_H))
         * (1.0 + al * (l + 1) * std::sqrt(factorial_d(l)) + al * al) / factorial_d(l);
}

// γ_ε of the same bound: the Sobolev ceiling of the perturbed semigroup at
// order k* = 2(l + d_H + 2), i.e. μ_{k*} with Hamiltonian coefficient εΛ.
inline double perturbation_gamma_ldiss(int l, double abs_alpha, int d_H, double eps_lambda_max)
{
    const double kstar = 2.0 * (l + d_H + 2);
    return mu_l_photon_hamiltonian(l, kstar, abs_alpha, eps_lambda_max);
}

} // namespace focklind
