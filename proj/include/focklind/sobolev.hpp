// sobolev.hpp — Weighted trace norms, moments and interpolation checks
//
// The norm of order k is ‖(N+1)^{k/4} x (N+1)^{k/4}‖₁ with a per-mode
// exponent vector in the multi-mode case. For positive semi-definite inputs
// the trace norm is a plain trace, which skips the O(n³) decomposition.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "focklind/fock.hpp"

namespace focklind {

struct SobolevOrder {
    std::vector<double> k; // one exponent per mode

    SobolevOrder(double scalar, int modes = 1) : k(static_cast<std::size_t>(modes), scalar)
    {
        validate();
    }
    SobolevOrder(std::initializer_list<double> ks) : k(ks) { validate(); }
    explicit SobolevOrder(std::vector<double> ks) : k(std::move(ks)) { validate(); }

    void validate() const
    {
        if (k.empty()) throw std::invalid_argument("SobolevOrder: empty");
        for (double v : k)
            if (v < 0.0) throw std::invalid_argument("SobolevOrder: components must be >= 0");
    }

    int modes() const { return static_cast<int>(k.size()); }
};

namespace detail {

constexpr double psd_detection_tol = 1e-12;

inline double trace_norm_dense(const Matrix& x)
{
    const double scale = x.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    if ((x - x.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale)) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }
    Eigen::BDCSVD<Matrix> svd(x);
    return svd.singularValues().sum();
}

} // namespace detail

inline double trace_norm(const Matrix& x) { return detail::trace_norm_dense(x); }

inline double trace_norm(const TruncatedOperator& x) { return trace_norm(x.entries); }

// ‖(N+1)^{k/4} x (N+1)^{k/4}‖₁. `psd` short-circuits to the trace.
inline double sobolev_norm(const Matrix& x, const SobolevOrder& k, const FockBasisSpec& basis,
                           bool psd = false)
{
    if (k.modes() != basis.modes())
        throw std::invalid_argument("sobolev_norm: order arity does not match basis");
    const Eigen::VectorXd w = weight_diagonal(k.k, basis);
    if (psd) {
        double tr = 0.0;
        for (long i = 0; i < x.rows(); ++i) tr += (w(i) * w(i) * x(i, i)).real();
        return tr;
    }
    const Matrix weighted = w.cast<Complex>().asDiagonal() * x * w.cast<Complex>().asDiagonal();
    return trace_norm(weighted);
}

inline double sobolev_norm(const TruncatedOperator& x, const SobolevOrder& k, bool psd = false)
{
    return sobolev_norm(x.entries, k, x.basis, psd);
}

inline double sobolev_norm(const DensityMatrix& rho, const SobolevOrder& k)
{
    return sobolev_norm(rho.entries(), k, rho.basis(), true);
}

// tr[ρ (N+1)^{k/2}] (per-mode product weight in multi-mode).
inline double moment(const Matrix& rho, const SobolevOrder& k, const FockBasisSpec& basis)
{
    if (k.modes() != basis.modes())
        throw std::invalid_argument("moment: order arity does not match basis");
    const Eigen::VectorXd w = weight_diagonal(k.k, basis, 0.5);
    double out = 0.0;
    for (long i = 0; i < rho.rows(); ++i) out += (w(i) * rho(i, i)).real();
    return out;
}

inline double moment(const DensityMatrix& rho, const SobolevOrder& k)
{
    return moment(rho.entries(), k, rho.basis());
}

// Affine interpolation of the growth exponent between bracketing grid
// orders: ω_k = (k_{r1}-k)/(k_{r1}-k_{r0}) ω_{r0} + (k-k_{r0})/(k_{r1}-k_{r0}) ω_{r1},
// over the tightest bracket. ω_0 = 0 is prepended when the grid starts
// above zero (the k = 0 semigroup is contractive).
inline double interpolate_omega(double k, std::vector<std::pair<double, double>> grid)
{
    if (grid.empty()) throw std::invalid_argument("interpolate_omega: empty grid");
    if (!std::is_sorted(grid.begin(), grid.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; }))
        throw std::invalid_argument("interpolate_omega: grid must be sorted in k");
    if (grid.front().first > 0.0) grid.insert(grid.begin(), {0.0, 0.0});
    if (k < grid.front().first || k > grid.back().first)
        throw std::invalid_argument("interpolate_omega: k outside the grid hull");
    for (const auto& [kr, w] : grid)
        if (kr == k) return w;
    auto hi = std::upper_bound(grid.begin(), grid.end(), k,
                               [](double v, const auto& g) { return v < g.first; });
    const auto lo = std::prev(hi);
    const double t = (k - lo->first) / (hi->first - lo->first);
    return (1.0 - t) * lo->second + t * hi->second;
}

// Interpolation inequality probe: checks
//   ‖T(x)‖_{kθ} ≤ M0^{1-θ} M1^{θ} ‖x‖_{kθ}
// sample by sample. M0, M1 default to the worst endpoint ratios measured on
// the samples themselves; callers holding analytic endpoint bounds pass them
// explicitly.
struct SteinWeissReport {
    double M0 = 0.0;
    double M1 = 0.0;
    double theta = 0.0;
    std::vector<double> margins; // (rhs - lhs)/max(rhs, eps), per sample
    double worst_margin = 0.0;
    bool passed(double tol = 1e-9) const { return worst_margin >= -tol; }
};

inline SteinWeissReport stein_weiss_check(const std::function<Matrix(const Matrix&)>& T,
                                          const SobolevOrder& k0, const SobolevOrder& k1,
                                          double theta, const std::vector<Matrix>& samples,
                                          const FockBasisSpec& basis, double M0_supplied = -1.0,
                                          double M1_supplied = -1.0)
{
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("stein_weiss_check: theta outside [0,1]");
    SteinWeissReport rep;
    rep.theta = theta;

    std::vector<Matrix> mapped;
    mapped.reserve(samples.size());
    for (const auto& x : samples) mapped.push_back(T(x));

    auto endpoint = [&](const SobolevOrder& k) {
        double worst = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double nx = sobolev_norm(samples[i], k, basis);
            if (nx == 0.0) continue;
            worst = std::max(worst, sobolev_norm(mapped[i], k, basis) / nx);
        }
        return worst;
    };
    rep.M0 = M0_supplied >= 0.0 ? M0_supplied : endpoint(k0);
    rep.M1 = M1_supplied >= 0.0 ? M1_supplied : endpoint(k1);

    std::vector<double> ktheta(k0.k.size());
    for (std::size_t m = 0; m < ktheta.size(); ++m)
        ktheta[m] = (1.0 - theta) * k0.k[m] + theta * k1.k[m];
    const SobolevOrder kt{std::vector<double>(ktheta)};

    const double bound_factor = std::pow(rep.M0, 1.0 - theta) * std::pow(rep.M1, theta);
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double lhs = sobolev_norm(mapped[i], kt, basis);
        const double rhs = bound_factor * sobolev_norm(samples[i], kt, basis);
        const double margin = (rhs - lhs) / std::max(rhs, 1e-300);
        rep.margins.push_back(margin);
        rep.worst_margin = std::min(rep.worst_margin, margin);
    }
    if (rep.margins.empty()) rep.worst_margin = 0.0;
    return rep;
}

} // namespace focklind
