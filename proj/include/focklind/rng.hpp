// rng.hpp — Seeded random streams with platform-independent output
//
// std::mt19937_64 is bit-exact across implementations; the distribution
// classes are not. All transforms live here so that reruns with the same
// seed produce byte-identical artifacts on any platform.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace focklind {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 bits of entropy.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Integer in [lo, hi], inclusive. Modulo bias is irrelevant at our ranges.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    // Box-Muller, standard normal.
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::complex<double> normal_complex()
    {
        return {normal() * M_SQRT1_2, normal() * M_SQRT1_2};
    }

    std::complex<double> unit_phase()
    {
        const double theta = 2.0 * M_PI * uniform();
        return {std::cos(theta), std::sin(theta)};
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace focklind
