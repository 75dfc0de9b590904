// fock.hpp — Truncated Fock-space realization of operators and states
//
// A polynomial in canonical form has closed-form matrix elements, so the
// realized matrix is the exact compression P_M p P_M of the infinite
// operator: every stored entry equals its infinite-dimensional value.
// Truncation artifacts enter only through *products* of realized matrices,
// which agree with compressions on the interior block away from the cutoff;
// the edge_band annotation records the width of the untrusted boundary.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseCore>

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "focklind/ccr.hpp"

namespace focklind {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

struct ConditioningError : std::runtime_error {
    ConditioningError(const std::string& what, std::vector<double> gram_spectrum_)
        : std::runtime_error(what), gram_spectrum(std::move(gram_spectrum_)) {}
    std::vector<double> gram_spectrum;
};

class FockBasisSpec {
public:
    explicit FockBasisSpec(std::vector<int> cutoffs, int edge_band = 0)
        : cutoffs_(std::move(cutoffs)), edge_band_(edge_band)
    {
        if (cutoffs_.empty()) throw std::invalid_argument("FockBasisSpec: no modes");
        for (int m : cutoffs_)
            if (m < 1) throw std::invalid_argument("FockBasisSpec: cutoffs must be >= 1");
        if (edge_band_ < 0 || edge_band_ >= min_cutoff())
            throw std::invalid_argument("FockBasisSpec: edge_band must satisfy 0 <= band < min cutoff");
    }

    int modes() const { return static_cast<int>(cutoffs_.size()); }
    const std::vector<int>& cutoffs() const { return cutoffs_; }
    int cutoff(int mode) const { return cutoffs_[static_cast<std::size_t>(mode)]; }
    int edge_band() const { return edge_band_; }
    void set_edge_band(int band)
    {
        if (band < 0 || band >= min_cutoff()) throw std::invalid_argument("bad edge band");
        edge_band_ = band;
    }

    int min_cutoff() const { return *std::min_element(cutoffs_.begin(), cutoffs_.end()); }

    long dim() const
    {
        long d = 1;
        for (int m : cutoffs_) d *= m;
        return d;
    }

    // Mode 0 is the slowest index (Kronecker order A_1 ⊗ A_2 ⊗ ...).
    long flat_index(const std::vector<int>& n) const
    {
        long idx = 0;
        for (int m = 0; m < modes(); ++m) idx = idx * cutoffs_[static_cast<std::size_t>(m)] + n[static_cast<std::size_t>(m)];
        return idx;
    }

    std::vector<int> unflatten(long idx) const
    {
        std::vector<int> n(static_cast<std::size_t>(modes()));
        for (int m = modes() - 1; m >= 0; --m) {
            n[static_cast<std::size_t>(m)] = static_cast<int>(idx % cutoffs_[static_cast<std::size_t>(m)]);
            idx /= cutoffs_[static_cast<std::size_t>(m)];
        }
        return n;
    }

    // True if every mode index stays below M_i - band.
    bool is_interior(long idx, int band) const
    {
        const auto n = unflatten(idx);
        for (int m = 0; m < modes(); ++m)
            if (n[static_cast<std::size_t>(m)] >= cutoffs_[static_cast<std::size_t>(m)] - band) return false;
        return true;
    }

    friend bool operator==(const FockBasisSpec& a, const FockBasisSpec& b)
    {
        return a.cutoffs_ == b.cutoffs_;
    }

private:
    std::vector<int> cutoffs_;
    int edge_band_;
};

struct TruncatedOperator {
    FockBasisSpec basis;
    Matrix entries;
    bool hermitian_hint = false;

    TruncatedOperator(FockBasisSpec basis_, Matrix entries_, bool hermitian = false)
        : basis(std::move(basis_)), entries(std::move(entries_)), hermitian_hint(hermitian)
    {
        if (entries.rows() != basis.dim() || entries.cols() != basis.dim())
            throw std::invalid_argument("TruncatedOperator: dimension does not match basis");
    }

    double population() const
    {
        long nnz = 0;
        for (long j = 0; j < entries.cols(); ++j)
            for (long i = 0; i < entries.rows(); ++i)
                if (entries(i, j) != 0.0) ++nnz;
        return static_cast<double>(nnz) / static_cast<double>(entries.size());
    }

    SparseMatrix sparse() const
    {
        SparseMatrix s(entries.rows(), entries.cols());
        std::vector<Eigen::Triplet<Complex>> trip;
        for (long j = 0; j < entries.cols(); ++j)
            for (long i = 0; i < entries.rows(); ++i)
                if (entries(i, j) != 0.0) trip.emplace_back(i, j, entries(i, j));
        s.setFromTriplets(trip.begin(), trip.end());
        return s;
    }
};

namespace detail {

// sqrt(n (n-1) ... (n-k+1)); zero when n < k.
inline double lowering_amplitude(int n, int k)
{
    if (n < k) return 0.0;
    double prod = 1.0;
    for (int t = 0; t < k; ++t) prod *= static_cast<double>(n - t);
    return std::sqrt(prod);
}

// sqrt((m+1)(m+2)...(m+i)) for (a†)^i acting on |m>.
inline double raising_amplitude(int m, int i)
{
    double prod = 1.0;
    for (int t = 1; t <= i; ++t) prod *= static_cast<double>(m + t);
    return std::sqrt(prod);
}

} // namespace detail

// Exact compression of p onto the truncated product basis.
inline TruncatedOperator realize(const OperatorPolynomial& p, const FockBasisSpec& basis)
{
    if (p.modes() != basis.modes())
        throw std::invalid_argument("realize: polynomial and basis mode counts differ");
    if (p.degree() >= basis.min_cutoff())
        throw std::invalid_argument("realize: polynomial degree must be below the smallest cutoff");

    const long dim = basis.dim();
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& [key, coeff] : p.terms()) {
        for (long col = 0; col < dim; ++col) {
            const auto n = basis.unflatten(col);
            double amp = 1.0;
            long row = 0;
            bool alive = true;
            for (int m = 0; m < basis.modes() && alive; ++m) {
                const auto& mono = key[static_cast<std::size_t>(m)];
                const int nm = n[static_cast<std::size_t>(m)];
                if (nm < mono.annihilate) { alive = false; break; }
                const int mid = nm - mono.annihilate;
                const int target = mid + mono.create;
                if (target >= basis.cutoff(m)) { alive = false; break; }
                amp *= detail::lowering_amplitude(nm, mono.annihilate)
                     * std::pow(static_cast<double>(mid), mono.number)
                     * detail::raising_amplitude(mid, mono.create);
                row = row * basis.cutoff(m) + target;
            }
            if (alive && amp != 0.0) out(row, col) += coeff * amp;
        }
    }
    return TruncatedOperator(basis, std::move(out));
}

// Diagonal weight Π_i (N_i + 1)^{k_i/4} (per-mode exponents; a scalar k is
// broadcast to every mode).
inline Eigen::VectorXd weight_diagonal(const std::vector<double>& k, const FockBasisSpec& basis,
                                       double power_scale = 0.25)
{
    if (static_cast<int>(k.size()) != basis.modes())
        throw std::invalid_argument("weight_diagonal: one exponent per mode required");
    for (double ki : k)
        if (ki < 0.0) throw std::invalid_argument("weight_diagonal: exponents must be >= 0");
    const long dim = basis.dim();
    Eigen::VectorXd w(dim);
    for (long idx = 0; idx < dim; ++idx) {
        const auto n = basis.unflatten(idx);
        double v = 1.0;
        for (int m = 0; m < basis.modes(); ++m)
            v *= std::pow(static_cast<double>(n[static_cast<std::size_t>(m)] + 1),
                          k[static_cast<std::size_t>(m)] * power_scale);
        w(idx) = v;
    }
    return w;
}

inline TruncatedOperator weight_matrix(double k, const FockBasisSpec& basis)
{
    const std::vector<double> kv(static_cast<std::size_t>(basis.modes()), k);
    Matrix out = weight_diagonal(kv, basis).cast<Complex>().asDiagonal();
    return TruncatedOperator(basis, std::move(out), true);
}

inline TruncatedOperator weight_matrix(const std::vector<double>& k, const FockBasisSpec& basis)
{
    Matrix out = weight_diagonal(k, basis).cast<Complex>().asDiagonal();
    return TruncatedOperator(basis, std::move(out), true);
}

class DensityMatrix {
public:
    static constexpr double hermitian_tol = 1e-12;
    static constexpr double trace_tol = 1e-10;

    DensityMatrix(TruncatedOperator op, double psd_tolerance = 1e-10)
        : op_(std::move(op)), psd_tolerance_(psd_tolerance)
    {
        const Matrix& r = op_.entries;
        const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
        if ((r - r.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol * scale)
            throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
        if (std::abs(r.trace().real() - 1.0) > trace_tol || std::abs(r.trace().imag()) > trace_tol)
            throw std::invalid_argument("DensityMatrix: trace departs from 1 beyond 1e-10");
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r + r.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -psd_tolerance_)
            throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond psd tolerance");
        op_.hermitian_hint = true;
    }

    static DensityMatrix from_pure(const Vector& psi, const FockBasisSpec& basis,
                                   double psd_tolerance = 1e-10)
    {
        Vector v = psi / psi.norm();
        return DensityMatrix(TruncatedOperator(basis, v * v.adjoint(), true), psd_tolerance);
    }

    const TruncatedOperator& op() const { return op_; }
    const Matrix& entries() const { return op_.entries; }
    const FockBasisSpec& basis() const { return op_.basis; }
    double psd_tolerance() const { return psd_tolerance_; }

private:
    TruncatedOperator op_;
    double psd_tolerance_;
};

// Coherent amplitudes on one mode, with the truncation diagnostics the
// caller needs to decide whether the cutoff was high enough.
struct CoherentVector {
    Vector psi;            // renormalized on the truncated space
    double leakage = 0.0;  // weight of the discarded tail Σ_{n >= M} |<n|α>|²
    double renorm = 1.0;   // 1/sqrt(1 - leakage)
};

inline CoherentVector coherent_vector(Complex alpha, int cutoff)
{
    CoherentVector out;
    out.psi = Vector::Zero(cutoff);
    // log-scaled recursion keeps large |α| stable
    Complex amp = std::exp(-0.5 * std::norm(alpha));
    double kept = 0.0;
    for (int n = 0; n < cutoff; ++n) {
        out.psi(n) = amp;
        kept += std::norm(amp);
        amp *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    out.leakage = std::max(0.0, 1.0 - kept);
    out.renorm = 1.0 / std::sqrt(kept);
    out.psi *= out.renorm;
    return out;
}

inline DensityMatrix coherent_state(Complex alpha, const FockBasisSpec& basis,
                                    double leakage_tolerance = 1e-10)
{
    if (basis.modes() != 1)
        throw std::invalid_argument("coherent_state: single-mode basis expected");
    const auto cv = coherent_vector(alpha, basis.cutoff(0));
    if (cv.leakage > leakage_tolerance) {
        std::ostringstream os;
        os << "coherent_state: truncation leakage " << cv.leakage << " exceeds tolerance "
           << leakage_tolerance << " at cutoff " << basis.cutoff(0);
        throw TruncationError(os.str());
    }
    return DensityMatrix::from_pure(cv.psi, basis);
}

// Orthonormalized spanning set of the code space
//   C_l = span{ |α_i><α_j| : α_i = α e^{2πij/l} },
// returned as the l² Hilbert-Schmidt-orthonormal matrices u_i u_j† where the
// u_i are the Gram-Schmidt orthonormalization of the l coherent vectors.
inline std::vector<TruncatedOperator> cat_code_basis(Complex alpha, int l,
                                                     const FockBasisSpec& basis,
                                                     double leakage_tolerance = 1e-10,
                                                     double conditioning_tol = 1e-6)
{
    if (basis.modes() != 1) throw std::invalid_argument("cat_code_basis: single-mode basis expected");
    if (l < 1) throw std::invalid_argument("cat_code_basis: l must be >= 1");

    const int M = basis.cutoff(0);
    std::vector<Vector> coh;
    for (int j = 0; j < l; ++j) {
        const double theta = 2.0 * M_PI * j / l;
        const Complex root = alpha * Complex(std::cos(theta), std::sin(theta));
        const auto cv = coherent_vector(root, M);
        if (cv.leakage > leakage_tolerance)
            throw TruncationError("cat_code_basis: coherent leakage exceeds tolerance");
        coh.push_back(cv.psi);
    }

    // Gram spectrum first: a nearly dependent family must be rejected with
    // the evidence attached.
    Matrix gram(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) gram(i, j) = coh[static_cast<std::size_t>(i)].dot(coh[static_cast<std::size_t>(j)]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    std::vector<double> spectrum(es.eigenvalues().data(), es.eigenvalues().data() + l);
    if (es.eigenvalues().minCoeff() < conditioning_tol) {
        std::ostringstream os;
        os << "cat_code_basis: Gram matrix nearly singular (min eigenvalue "
           << es.eigenvalues().minCoeff() << "); |alpha| too small for l = " << l;
        throw ConditioningError(os.str(), spectrum);
    }

    std::vector<Vector> u;
    for (int i = 0; i < l; ++i) {
        Vector v = coh[static_cast<std::size_t>(i)];
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& prev : u) v -= prev.dot(v) * prev;
        u.push_back(v / v.norm());
    }

    std::vector<TruncatedOperator> out;
    out.reserve(static_cast<std::size_t>(l) * static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            out.emplace_back(basis, Matrix(u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)].adjoint()), i == j);
    return out;
}

// Coordinate-list text export: header with the cutoffs, then one
// `row col re im` line per nonzero entry.
inline std::string export_coordinate_text(const TruncatedOperator& op)
{
    std::ostringstream os;
    os << "fock-matrix cutoffs";
    for (int m : op.basis.cutoffs()) os << " " << m;
    os << "\n";
    char buf[96];
    for (long col = 0; col < op.entries.cols(); ++col)
        for (long row = 0; row < op.entries.rows(); ++row) {
            const Complex v = op.entries(row, col);
            if (v == 0.0) continue;
            std::snprintf(buf, sizeof(buf), "%ld %ld %.17g %.17g\n", row, col, v.real(), v.imag());
            os << buf;
        }
    return os.str();
}

inline TruncatedOperator import_coordinate_text(const std::string& text)
{
    std::istringstream is(text);
    std::string tag1, tag2;
    if (!(is >> tag1 >> tag2) || tag1 != "fock-matrix" || tag2 != "cutoffs")
        throw std::invalid_argument("import_coordinate_text: bad header");
    std::string line;
    std::getline(is, line);
    std::istringstream hs(line);
    std::vector<int> cutoffs;
    int m = 0;
    while (hs >> m) cutoffs.push_back(m);
    FockBasisSpec basis(cutoffs);
    Matrix entries = Matrix::Zero(basis.dim(), basis.dim());
    long row = 0, col = 0;
    double re = 0.0, im = 0.0;
    while (is >> row >> col >> re >> im) entries(row, col) = Complex(re, im);
    return TruncatedOperator(basis, std::move(entries));
}

} // namespace focklind
