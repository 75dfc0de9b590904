// ccr.hpp — Normal-ordered polynomial algebra of bosonic ladder operators
//
// Every operator word in a, a†, N on m modes reduces, via [a, a†] = 1, to a
// unique linear combination of per-mode monomials (a†)^i N^j a^k. Products,
// adjoints and GKSL drift assembly all stay in that canonical form. The
// reordering coefficients are integers, so products of integer-coefficient
// polynomials are exact in double precision up to degree 12 (largest
// intermediate r!·C(n,r)·C(m,r) stays far below 2^53); rounding enters only
// through user-supplied coefficients.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace focklind {

using Complex = std::complex<double>;

// (a†)^i N^j a^k on a single mode.
struct ModeMonomial {
    int create = 0;
    int number = 0;
    int annihilate = 0;

    int degree() const { return create + annihilate + 2 * number; }
    bool is_identity() const { return create == 0 && number == 0 && annihilate == 0; }

    friend bool operator==(const ModeMonomial&, const ModeMonomial&) = default;
    friend auto operator<=>(const ModeMonomial& a, const ModeMonomial& b)
    {
        if (auto c = a.create <=> b.create; c != 0) return c;
        if (auto c = a.number <=> b.number; c != 0) return c;
        return a.annihilate <=> b.annihilate;
    }
};

using MonomialKey = std::vector<ModeMonomial>; // one entry per mode

namespace detail {

inline double binomial(int n, int r)
{
    if (r < 0 || r > n) return 0.0;
    double out = 1.0;
    for (int t = 0; t < r; ++t) out = out * static_cast<double>(n - t) / static_cast<double>(t + 1);
    return std::round(out);
}

inline double factorial(int n)
{
    double out = 1.0;
    for (int t = 2; t <= n; ++t) out *= static_cast<double>(t);
    return out;
}

// Coefficients of (x + shift)^p as a dense power list.
inline std::vector<double> shifted_power(int shift, int p)
{
    std::vector<double> coef(static_cast<std::size_t>(p) + 1, 0.0);
    for (int s = 0; s <= p; ++s)
        coef[static_cast<std::size_t>(s)] = binomial(p, s) * std::pow(static_cast<double>(shift), p - s);
    return coef;
}

inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Unique normal form requires min(i, k) = 0: a monomial carrying both
// ladders reduces through a† N^j a = N (N-1)^j. Returns the canonical
// expansion of (a†)^i N^j a^k.
inline void canonicalize_mode(const ModeMonomial& m, double coeff,
                              std::map<ModeMonomial, double>& out)
{
    if (m.create == 0 || m.annihilate == 0) {
        out[m] += coeff;
        return;
    }
    // (a†)^i N^j a^k = (a†)^{i-1} [N (N-1)^j] a^{k-1}
    std::vector<double> inner = shifted_power(-1, m.number);
    inner.insert(inner.begin(), 0.0); // multiply by N
    for (std::size_t t = 0; t < inner.size(); ++t) {
        if (inner[t] == 0.0) continue;
        canonicalize_mode(ModeMonomial{m.create - 1, static_cast<int>(t), m.annihilate - 1},
                          coeff * inner[t], out);
    }
}

// Canonical expansion of the single-mode product
//   (a†)^{i1} N^{j1} a^{k1} · (a†)^{i2} N^{j2} a^{k2}.
// Derivation: a^{k1}(a†)^{i2} = Σ_r r!·C(k1,r)·C(i2,r)·(a†)^{i2-r} a^{k1-r},
// then N-powers commute through ladders as N^j (a†)^m = (a†)^m (N+m)^j and
// a^m N^j = (N+m)^j a^m.
inline std::map<ModeMonomial, double> mode_product(const ModeMonomial& x, const ModeMonomial& y)
{
    std::map<ModeMonomial, double> out;
    const int rmax = std::min(x.annihilate, y.create);
    for (int r = 0; r <= rmax; ++r) {
        const double swap_coeff =
            factorial(r) * binomial(x.annihilate, r) * binomial(y.create, r);
        const int creates = x.create + y.create - r;
        const int annihilates = x.annihilate + y.annihilate - r;
        // N-polynomial sitting between the ladders: (N + (y.create - r))^{j1} (N + (x.annihilate - r))^{j2}
        std::vector<double> npoly{1.0};
        if (x.number > 0) npoly = poly_mul(npoly, shifted_power(y.create - r, x.number));
        if (y.number > 0) npoly = poly_mul(npoly, shifted_power(x.annihilate - r, y.number));
        for (std::size_t s = 0; s < npoly.size(); ++s) {
            if (npoly[s] == 0.0) continue;
            ModeMonomial m{creates, static_cast<int>(s), annihilates};
            out[m] += swap_coeff * npoly[s];
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = (it->second == 0.0) ? out.erase(it) : std::next(it);
    return out;
}

} // namespace detail

// Exact multi-mode polynomial in a_i, a_i†, N_i, kept in canonical normal
// form: map from per-mode (a†)^i N^j a^k keys to complex coefficients,
// ordered lexicographically in (mode, i, j, k). Immutable by convention:
// all operations return fresh values.
class OperatorPolynomial {
public:
    explicit OperatorPolynomial(int modes = 1) : modes_(modes)
    {
        if (modes < 1) throw std::invalid_argument("OperatorPolynomial: modes must be >= 1");
    }

    int modes() const { return modes_; }
    const std::map<MonomialKey, Complex>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const
    {
        int d = 0;
        for (const auto& [key, c] : terms_) {
            int td = 0;
            for (const auto& m : key) td += m.degree();
            d = std::max(d, td);
        }
        return d;
    }

    void add_term(const MonomialKey& key, Complex coeff)
    {
        if (static_cast<int>(key.size()) != modes_)
            throw std::invalid_argument("OperatorPolynomial: key arity does not match mode count");
        if (coeff == 0.0) return;
        std::vector<std::map<ModeMonomial, double>> factors(static_cast<std::size_t>(modes_));
        for (int m = 0; m < modes_; ++m)
            detail::canonicalize_mode(key[static_cast<std::size_t>(m)], 1.0,
                                      factors[static_cast<std::size_t>(m)]);
        MonomialKey scratch(static_cast<std::size_t>(modes_));
        accumulate_canonical(factors, scratch, 0, coeff);
    }

    // Elementary builders
    static OperatorPolynomial zero(int modes = 1) { return OperatorPolynomial(modes); }

    static OperatorPolynomial constant(Complex c, int modes = 1)
    {
        OperatorPolynomial p(modes);
        if (c != 0.0) p.add_term(MonomialKey(static_cast<std::size_t>(modes)), c);
        return p;
    }

    static OperatorPolynomial annihilation(int mode = 0, int modes = 1)
    {
        return ladder(mode, modes, ModeMonomial{0, 0, 1});
    }

    static OperatorPolynomial creation(int mode = 0, int modes = 1)
    {
        return ladder(mode, modes, ModeMonomial{1, 0, 0});
    }

    static OperatorPolynomial number(int mode = 0, int modes = 1)
    {
        return ladder(mode, modes, ModeMonomial{0, 1, 0});
    }

    OperatorPolynomial operator+(const OperatorPolynomial& rhs) const
    {
        check_modes(rhs);
        OperatorPolynomial out = *this;
        for (const auto& [key, c] : rhs.terms_) out.add_term(key, c);
        return out;
    }

    OperatorPolynomial operator-(const OperatorPolynomial& rhs) const
    {
        check_modes(rhs);
        OperatorPolynomial out = *this;
        for (const auto& [key, c] : rhs.terms_) out.add_term(key, -c);
        return out;
    }

    OperatorPolynomial operator-() const { return *this * Complex(-1.0); }

    OperatorPolynomial operator*(Complex scalar) const
    {
        OperatorPolynomial out(modes_);
        if (scalar == 0.0) return out;
        for (const auto& [key, c] : terms_) out.terms_[key] = scalar * c;
        return out;
    }

    friend OperatorPolynomial operator*(Complex scalar, const OperatorPolynomial& p)
    {
        return p * scalar;
    }

    // Canonical normal form of the operator product; modes act independently.
    OperatorPolynomial operator*(const OperatorPolynomial& rhs) const
    {
        check_modes(rhs);
        OperatorPolynomial out(modes_);
        for (const auto& [ka, ca] : terms_) {
            for (const auto& [kb, cb] : rhs.terms_) {
                // Per-mode expansions, combined as a cartesian product.
                std::vector<std::map<ModeMonomial, double>> factors;
                factors.reserve(static_cast<std::size_t>(modes_));
                for (int m = 0; m < modes_; ++m)
                    factors.push_back(detail::mode_product(ka[static_cast<std::size_t>(m)],
                                                           kb[static_cast<std::size_t>(m)]));
                MonomialKey key(static_cast<std::size_t>(modes_));
                accumulate_product(out, factors, key, 0, ca * cb);
            }
        }
        return out;
    }

    // Maps (a†)^i N^j a^k to (a†)^k N^j a^i with conjugated coefficient;
    // closed on the canonical form, no re-ordering needed.
    OperatorPolynomial adjoint() const
    {
        OperatorPolynomial out(modes_);
        for (const auto& [key, c] : terms_) {
            MonomialKey k2 = key;
            for (auto& m : k2) std::swap(m.create, m.annihilate);
            out.add_term(k2, std::conj(c));
        }
        return out;
    }

    bool is_symmetric(double tol = 1e-12) const
    {
        const OperatorPolynomial d = *this - adjoint();
        double scale = 0.0;
        for (const auto& [key, c] : terms_) scale = std::max(scale, std::abs(c));
        double worst = 0.0;
        for (const auto& [key, c] : d.terms_) worst = std::max(worst, std::abs(c));
        return worst <= tol * std::max(1.0, scale);
    }

    double max_abs_coeff() const
    {
        double out = 0.0;
        for (const auto& [key, c] : terms_) out = std::max(out, std::abs(c));
        return out;
    }

    // One term per line, `coeff_re coeff_im : (i,j,k) ...`, sorted by the
    // canonical monomial order; 17 significant digits round-trip doubles
    // bit-exactly.
    std::string to_text() const
    {
        std::ostringstream os;
        os << "modes " << modes_ << "\n";
        char buf[64];
        for (const auto& [key, c] : terms_) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g :", c.real(), c.imag());
            os << buf;
            for (const auto& m : key) os << " (" << m.create << "," << m.number << "," << m.annihilate << ")";
            os << "\n";
        }
        return os.str();
    }

    static OperatorPolynomial from_text(const std::string& text)
    {
        std::istringstream is(text);
        std::string tag;
        int modes = 0;
        if (!(is >> tag >> modes) || tag != "modes" || modes < 1)
            throw std::invalid_argument("OperatorPolynomial::from_text: bad header");
        OperatorPolynomial out(modes);
        std::string line;
        std::getline(is, line); // rest of header line
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            double re = 0.0, im = 0.0;
            char colon = 0;
            if (!(ls >> re >> im >> colon) || colon != ':')
                throw std::invalid_argument("OperatorPolynomial::from_text: bad term line");
            MonomialKey key;
            key.reserve(static_cast<std::size_t>(modes));
            char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
            ModeMonomial m;
            while (ls >> c1 >> m.create >> c2 >> m.number >> c3 >> m.annihilate >> c4) {
                if (c1 != '(' || c2 != ',' || c3 != ',' || c4 != ')')
                    throw std::invalid_argument("OperatorPolynomial::from_text: bad monomial");
                key.push_back(m);
            }
            if (static_cast<int>(key.size()) != modes)
                throw std::invalid_argument("OperatorPolynomial::from_text: arity mismatch");
            out.add_term(key, Complex(re, im));
        }
        return out;
    }

    friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b)
    {
        return a.modes_ == b.modes_ && a.terms_ == b.terms_;
    }

    // Largest coefficient magnitude of the difference, for tolerance checks.
    static double distance(const OperatorPolynomial& a, const OperatorPolynomial& b)
    {
        const OperatorPolynomial d = a - b;
        double out = 0.0;
        for (const auto& [key, c] : d.terms_) out = std::max(out, std::abs(c));
        return out;
    }

private:
    static OperatorPolynomial ladder(int mode, int modes, ModeMonomial m)
    {
        OperatorPolynomial p(modes);
        if (mode < 0 || mode >= modes) throw std::invalid_argument("mode index out of range");
        MonomialKey key(static_cast<std::size_t>(modes));
        key[static_cast<std::size_t>(mode)] = m;
        p.add_term(key, 1.0);
        return p;
    }

    void check_modes(const OperatorPolynomial& rhs) const
    {
        if (modes_ != rhs.modes_)
            throw std::invalid_argument("OperatorPolynomial: mode count mismatch");
    }

    static void accumulate_product(OperatorPolynomial& out,
                                   const std::vector<std::map<ModeMonomial, double>>& factors,
                                   MonomialKey& key, int mode, Complex coeff)
    {
        if (mode == static_cast<int>(factors.size())) {
            out.add_term(key, coeff);
            return;
        }
        for (const auto& [m, c] : factors[static_cast<std::size_t>(mode)]) {
            key[static_cast<std::size_t>(mode)] = m;
            accumulate_product(out, factors, key, mode + 1, coeff * c);
        }
    }

    // Insert a cartesian product of already-canonical per-mode expansions.
    void accumulate_canonical(const std::vector<std::map<ModeMonomial, double>>& factors,
                              MonomialKey& key, int mode, Complex coeff)
    {
        if (mode == modes_) {
            auto& c = terms_[key];
            c += coeff;
            if (c == 0.0) terms_.erase(key);
            return;
        }
        for (const auto& [m, c] : factors[static_cast<std::size_t>(mode)]) {
            key[static_cast<std::size_t>(mode)] = m;
            accumulate_canonical(factors, key, mode + 1, coeff * c);
        }
    }

    int modes_;
    std::map<MonomialKey, Complex> terms_;
};

inline OperatorPolynomial multiply(const OperatorPolynomial& p, const OperatorPolynomial& q)
{
    return p * q;
}

inline OperatorPolynomial adjoint(const OperatorPolynomial& p) { return p.adjoint(); }

inline int degree(const OperatorPolynomial& p) { return p.degree(); }

// Convenience powers of a single ladder on one mode.
inline OperatorPolynomial annihilation_power(int k, int mode = 0, int modes = 1)
{
    OperatorPolynomial p(modes);
    MonomialKey key(static_cast<std::size_t>(modes));
    key[static_cast<std::size_t>(mode)] = ModeMonomial{0, 0, k};
    p.add_term(key, 1.0);
    return p;
}

inline OperatorPolynomial creation_power(int k, int mode = 0, int modes = 1)
{
    OperatorPolynomial p(modes);
    MonomialKey key(static_cast<std::size_t>(modes));
    key[static_cast<std::size_t>(mode)] = ModeMonomial{k, 0, 0};
    p.add_term(key, 1.0);
    return p;
}

// G = -iH - 1/2 Σ_j L_j† L_j, in canonical form. H must be symmetric.
inline OperatorPolynomial gksl_G(const OperatorPolynomial& H,
                                 const std::vector<OperatorPolynomial>& jumps)
{
    if (!H.is_symmetric())
        throw std::invalid_argument("gksl_G: Hamiltonian polynomial is not symmetric");
    OperatorPolynomial G = H * Complex(0.0, -1.0);
    for (const auto& L : jumps) G = G - (L.adjoint() * L) * Complex(0.5);
    return G;
}

} // namespace focklind
