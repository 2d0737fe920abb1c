#pragma once

// Complex vectors and Hermitian operators in dimension 3 and 4: the
// arithmetic every other module is built on.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pentaks/errors.hpp"

namespace pentaks {

using Complex = std::complex<double>;

inline constexpr int max_dim = 4;

namespace tol {
inline constexpr double unit_norm = 1e-12;
inline constexpr double hermitian = 1e-12;
inline constexpr double phase_pivot = 1e-8;
inline constexpr double gram_determinant = 1e-10;
inline constexpr double cubic_discriminant = 1e-12;
} // namespace tol

inline void require_dim(int dim) {
    if (dim != 3 && dim != 4) {
        throw ValidationError("dimension must be 3 or 4, got " + std::to_string(dim));
    }
}

/// Multiplies the amplitudes by a global phase so that the first component
/// with modulus above 1e-8 is real and positive.
inline void apply_phase_convention(std::span<Complex> amps) {
    for (Complex& c : amps) {
        const double r = std::abs(c);
        if (r > tol::phase_pivot) {
            const Complex phase = std::conj(c) / r;
            for (Complex& x : amps) x *= phase;
            c = r;
            return;
        }
    }
}

/// Unit vector of complex amplitudes, dimension 3 or 4.
class StateVector {
public:
    /// Scales `amps` to unit norm. Throws ValidationError on a zero vector.
    static StateVector normalized(std::span<const Complex> amps) {
        require_dim(static_cast<int>(amps.size()));
        double n2 = 0.0;
        for (const Complex& c : amps) n2 += std::norm(c);
        if (!(n2 > 0.0) || !std::isfinite(n2)) throw ValidationError("cannot normalize a zero or non-finite vector");
        const double inv = std::abs(n2 - 1.0) <= 8 * std::numeric_limits<double>::epsilon() ? 1.0 : 1.0 / std::sqrt(n2);
        StateVector v;
        v.dim_ = static_cast<int>(amps.size());
        for (int i = 0; i < v.dim_; ++i) v.amp_[i] = amps[i] * inv;
        return v;
    }
    static StateVector normalized(std::initializer_list<Complex> amps) {
        return normalized(std::span<const Complex>(amps.begin(), amps.size()));
    }

    /// Takes `amps` as given; throws ValidationError unless the norm is 1 within `tolerance`.
    static StateVector from_unit(std::span<const Complex> amps, double tolerance = tol::unit_norm) {
        require_dim(static_cast<int>(amps.size()));
        double n2 = 0.0;
        for (const Complex& c : amps) n2 += std::norm(c);
        if (!(std::abs(std::sqrt(n2) - 1.0) <= tolerance)) {
            throw ValidationError("state vector is not unit norm (norm = " + std::to_string(std::sqrt(n2)) + ")");
        }
        StateVector v;
        v.dim_ = static_cast<int>(amps.size());
        std::copy(amps.begin(), amps.end(), v.amp_.begin());
        return v;
    }

    /// Standard basis vector |index> of the given dimension.
    static StateVector basis(int dim, int index) {
        require_dim(dim);
        StateVector v;
        v.dim_ = dim;
        v.amp_[static_cast<std::size_t>(index)] = 1.0;
        return v;
    }

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] Complex operator[](int i) const noexcept { return amp_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return {amp_.data(), static_cast<std::size_t>(dim_)};
    }

    [[nodiscard]] StateVector with_phase_convention() const {
        StateVector v = *this;
        apply_phase_convention({v.amp_.data(), static_cast<std::size_t>(dim_)});
        return v;
    }

    [[nodiscard]] StateVector conjugate() const {
        StateVector v = *this;
        for (int i = 0; i < dim_; ++i) v.amp_[i] = std::conj(v.amp_[i]);
        return v;
    }

    [[nodiscard]] double norm() const noexcept {
        double n2 = 0.0;
        for (int i = 0; i < dim_; ++i) n2 += std::norm(amp_[i]);
        return std::sqrt(n2);
    }

private:
    StateVector() = default;

    std::array<Complex, max_dim> amp_{};
    int dim_ = 0;
};

/// <u|v>, antilinear in the first argument.
inline Complex inner(const StateVector& u, const StateVector& v) {
    if (u.dim() != v.dim()) throw ValidationError("inner product of vectors with different dimensions");
    Complex s = 0.0;
    for (int i = 0; i < u.dim(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

/// |<u|v>|^2.
inline double transition_probability(const StateVector& u, const StateVector& v) {
    return std::norm(inner(u, v));
}

/// Row-major dense complex matrix of dimension at most 4.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int dim) : dim_(dim) {}

    static Matrix identity(int dim) {
        Matrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    [[nodiscard]] int dim() const noexcept { return dim_; }
    Complex& operator()(int r, int c) noexcept { return a_[static_cast<std::size_t>(r * max_dim + c)]; }
    [[nodiscard]] Complex operator()(int r, int c) const noexcept {
        return a_[static_cast<std::size_t>(r * max_dim + c)];
    }

    [[nodiscard]] Matrix adjoint() const {
        Matrix m(dim_);
        for (int r = 0; r < dim_; ++r)
            for (int c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(c, r));
        return m;
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        Matrix m(x.dim_);
        for (int r = 0; r < x.dim_; ++r)
            for (int c = 0; c < x.dim_; ++c) {
                Complex s = 0.0;
                for (int k = 0; k < x.dim_; ++k) s += x(r, k) * y(k, c);
                m(r, c) = s;
            }
        return m;
    }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        Matrix m(x.dim_);
        for (int r = 0; r < x.dim_; ++r)
            for (int c = 0; c < x.dim_; ++c) m(r, c) = x(r, c) + y(r, c);
        return m;
    }

    /// Applies the matrix to `v` without renormalizing.
    [[nodiscard]] std::array<Complex, max_dim> apply(std::span<const Complex> v) const {
        std::array<Complex, max_dim> out{};
        for (int r = 0; r < dim_; ++r) {
            Complex s = 0.0;
            for (int k = 0; k < dim_; ++k) s += (*this)(r, k) * v[static_cast<std::size_t>(k)];
            out[static_cast<std::size_t>(r)] = s;
        }
        return out;
    }

    [[nodiscard]] double max_abs_difference(const Matrix& other) const {
        double d = 0.0;
        for (int r = 0; r < dim_; ++r)
            for (int c = 0; c < dim_; ++c) d = std::max(d, std::abs((*this)(r, c) - other(r, c)));
        return d;
    }

private:
    std::array<Complex, max_dim * max_dim> a_{};
    int dim_ = 0;
};

/// Returns `m` applied to `v`, renormalized.
inline StateVector transform(const Matrix& m, const StateVector& v) {
    const auto out = m.apply(v.amplitudes());
    return StateVector::normalized(std::span<const Complex>(out.data(), static_cast<std::size_t>(v.dim())));
}

/// Self-adjoint operator of dimension 3 or 4.
class HermitianOperator {
public:
    /// Validates that `m` equals its adjoint within 1e-12 entrywise.
    static HermitianOperator from_matrix(const Matrix& m, double tolerance = tol::hermitian) {
        require_dim(m.dim());
        for (int r = 0; r < m.dim(); ++r)
            for (int c = r; c < m.dim(); ++c) {
                if (std::abs(m(r, c) - std::conj(m(c, r))) > tolerance) {
                    throw ValidationError("operator is not Hermitian at entry (" + std::to_string(r) + "," +
                                          std::to_string(c) + ")");
                }
            }
        HermitianOperator op;
        op.m_ = m;
        return op;
    }

    static HermitianOperator zero(int dim) {
        require_dim(dim);
        HermitianOperator op;
        op.m_ = Matrix(dim);
        return op;
    }

    /// |v><v|.
    static HermitianOperator projector(const StateVector& v) {
        HermitianOperator op = zero(v.dim());
        op.add_projector(v);
        return op;
    }

    /// Sum of the rank-one projectors onto `vs`.
    static HermitianOperator projector_sum(std::span<const StateVector> vs) {
        if (vs.empty()) throw ValidationError("projector sum over an empty set");
        HermitianOperator op = zero(vs.front().dim());
        for (const StateVector& v : vs) op.add_projector(v);
        return op;
    }

    [[nodiscard]] int dim() const noexcept { return m_.dim(); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
    [[nodiscard]] Complex operator()(int r, int c) const noexcept { return m_(r, c); }

    [[nodiscard]] double trace() const {
        double t = 0.0;
        for (int i = 0; i < dim(); ++i) t += m_(i, i).real();
        return t;
    }

    /// Tr(op^k) for small k.
    [[nodiscard]] double trace_power(int k) const {
        Matrix p = Matrix::identity(dim());
        for (int i = 0; i < k; ++i) p = p * m_;
        double t = 0.0;
        for (int i = 0; i < dim(); ++i) t += p(i, i).real();
        return t;
    }

    /// <v|op|v>.
    [[nodiscard]] double expectation(const StateVector& v) const {
        if (v.dim() != dim()) throw ValidationError("expectation with mismatched dimension");
        const auto w = m_.apply(v.amplitudes());
        Complex s = 0.0;
        for (int i = 0; i < dim(); ++i) s += std::conj(v[i]) * w[static_cast<std::size_t>(i)];
        return s.real();
    }

private:
    void add_projector(const StateVector& v) {
        if (v.dim() != dim()) throw ValidationError("projector dimension mismatch");
        for (int r = 0; r < dim(); ++r) {
            m_(r, r) += std::norm(v[r]);
            for (int c = r + 1; c < dim(); ++c) {
                const Complex e = v[r] * std::conj(v[c]);
                m_(r, c) += e;
                m_(c, r) += std::conj(e);
            }
        }
    }

    Matrix m_;
};

/// Real eigenvalues of a Hermitian operator in descending order.
struct Spectrum {
    std::vector<double> values;

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(values.size()); }
    [[nodiscard]] double max() const { return values.front(); }
    [[nodiscard]] double min() const { return values.back(); }
    [[nodiscard]] double sum() const {
        double s = 0.0;
        for (double x : values) s += x;
        return s;
    }
    [[nodiscard]] double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

struct Eigensystem {
    Spectrum spectrum;
    /// Orthonormal eigenvectors, `vectors[i]` belongs to `spectrum[i]`.
    std::vector<StateVector> vectors;
};

/// Diagonalizes `op` by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot entry with a diagonal
/// unitary, then applies the classical real Jacobi rotation. The iteration
/// stops once the off-diagonal mass is below 1e-30 of the Frobenius norm
/// squared. Eigenvectors follow the library phase convention; inside a
/// degenerate block any orthonormal basis may be returned.
inline Eigensystem eigensystem(const HermitianOperator& op) {
    const int n = op.dim();
    Matrix a = op.matrix();
    Matrix v = Matrix::identity(n);

    double frob = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) frob += std::norm(a(r, c));

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off <= 1e-30 * frob || off == 0.0) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double g = std::abs(apq);
                if (g == 0.0) continue;
                const Complex phase = std::conj(apq / g);
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                Matrix u = Matrix::identity(n);
                u(p, p) = c;
                u(p, q) = s;
                u(q, p) = -s * phase;
                u(q, q) = c * phase;

                a = u.adjoint() * a * u;
                // Remove rounding residue so the matrix stays exactly Hermitian.
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) a(i, i) = a(i, i).real();
                v = v * u;
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x).real() > a(y, y).real(); });

    Eigensystem es;
    es.spectrum.values.reserve(static_cast<std::size_t>(n));
    es.vectors.reserve(static_cast<std::size_t>(n));
    for (int idx : order) {
        es.spectrum.values.push_back(a(idx, idx).real());
        std::array<Complex, max_dim> col{};
        for (int r = 0; r < n; ++r) col[static_cast<std::size_t>(r)] = v(r, idx);
        apply_phase_convention({col.data(), static_cast<std::size_t>(n)});
        es.vectors.push_back(StateVector::normalized(std::span<const Complex>(col.data(), static_cast<std::size_t>(n))));
    }
    return es;
}

inline Spectrum spectrum(const HermitianOperator& op) { return eigensystem(op).spectrum; }

/// Coefficients of the monic cubic x^3 + c2 x^2 + c1 x + c0.
struct MonicCubic {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;

    [[nodiscard]] double operator()(double x) const { return ((x + c2) * x + c1) * x + c0; }
    [[nodiscard]] double derivative(double x) const { return (3.0 * x + 2.0 * c2) * x + c1; }
    [[nodiscard]] double scale() const { return std::max({1.0, std::abs(c2), std::abs(c1), std::abs(c0)}); }
};

/// Three real roots of a monic cubic, descending, by the trigonometric
/// method followed by guarded Newton polishing.
///
/// The discriminant of the depressed cubic may be negative by at most 1e-12
/// (rounding at a double root); anything further below signals complex
/// roots and raises DomainError.
inline std::array<double, 3> cubic_roots(const MonicCubic& poly) {
    const double shift = -poly.c2 / 3.0;
    const double p = poly.c1 - poly.c2 * poly.c2 / 3.0;
    const double q = 2.0 * poly.c2 * poly.c2 * poly.c2 / 27.0 - poly.c2 * poly.c1 / 3.0 + poly.c0;
    const double discriminant = -(4.0 * p * p * p + 27.0 * q * q);
    if (discriminant < -tol::cubic_discriminant) {
        throw DomainError("cubic has complex roots (discriminant " + std::to_string(discriminant) + ")");
    }

    std::array<double, 3> roots{};
    if (p >= 0.0) {
        // Only reachable at a (near) triple root.
        roots.fill(shift);
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) roots[static_cast<std::size_t>(k)] = shift + m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
    }

    for (double& r : roots) {
        for (int it = 0; it < 3; ++it) {
            const double f = poly(r);
            const double df = poly.derivative(r);
            if (df == 0.0) break;
            const double next = r - f / df;
            if (std::abs(poly(next)) < std::abs(f)) r = next;
            else break;
        }
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

namespace detail {

/// Gram determinant of `vs` via Gram-Schmidt; also returns the orthonormalized set.
inline double gram_schmidt(std::span<const StateVector> vs, std::vector<std::array<Complex, max_dim>>& basis) {
    const std::size_t n = static_cast<std::size_t>(vs.front().dim());
    double gram = 1.0;
    for (const StateVector& v : vs) {
        std::array<Complex, max_dim> w{};
        for (std::size_t i = 0; i < n; ++i) w[i] = v[static_cast<int>(i)];
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                Complex d = 0.0;
                for (std::size_t i = 0; i < n; ++i) d += std::conj(b[i]) * w[i];
                for (std::size_t i = 0; i < n; ++i) w[i] -= d * b[i];
            }
        }
        double r2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) r2 += std::norm(w[i]);
        gram *= r2;
        if (r2 == 0.0) return 0.0;
        const double inv = 1.0 / std::sqrt(r2);
        for (std::size_t i = 0; i < n; ++i) w[i] *= inv;
        basis.push_back(w);
    }
    return gram;
}

} // namespace detail

/// Gram determinant det(<v_i|v_j>) of a set of unit vectors.
inline double gram_determinant(std::span<const StateVector> vs) {
    std::vector<std::array<Complex, max_dim>> basis;
    return detail::gram_schmidt(vs, basis);
}

/// The ray orthogonal to two independent rays in dimension 3, as the
/// complex conjugate of their cross product. Phase convention applied.
inline StateVector orthogonal_complement_3d(const StateVector& v1, const StateVector& v2) {
    if (v1.dim() != 3 || v2.dim() != 3) throw ValidationError("orthogonal_complement_3d needs dimension-3 vectors");
    const double gram = 1.0 - transition_probability(v1, v2);
    if (!(gram > tol::gram_determinant)) {
        throw DegeneracyError("rays are too close to parallel to determine a complement");
    }
    std::array<Complex, 3> w{
        std::conj(v1[1] * v2[2] - v1[2] * v2[1]),
        std::conj(v1[2] * v2[0] - v1[0] * v2[2]),
        std::conj(v1[0] * v2[1] - v1[1] * v2[0]),
    };
    apply_phase_convention(w);
    return StateVector::normalized(std::span<const Complex>(w));
}

/// The ray orthogonal to dim-1 independent rays, for dim 3 or 4.
inline StateVector orthogonal_complement(std::span<const StateVector> vs) {
    if (vs.empty()) throw ValidationError("orthogonal_complement of an empty set");
    const int n = vs.front().dim();
    if (static_cast<int>(vs.size()) != n - 1) throw ValidationError("orthogonal_complement needs dim-1 vectors");
    for (const StateVector& v : vs)
        if (v.dim() != n) throw ValidationError("orthogonal_complement with mixed dimensions");
    if (n == 3) return orthogonal_complement_3d(vs[0], vs[1]);

    std::vector<std::array<Complex, max_dim>> basis;
    if (!(detail::gram_schmidt(vs, basis) > tol::gram_determinant)) {
        throw DegeneracyError("rays are linearly dependent; complement is not unique");
    }
    std::array<Complex, max_dim> best{};
    double best_norm = -1.0;
    for (int e = 0; e < n; ++e) {
        std::array<Complex, max_dim> w{};
        w[static_cast<std::size_t>(e)] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                Complex d = 0.0;
                for (int i = 0; i < n; ++i) d += std::conj(b[static_cast<std::size_t>(i)]) * w[static_cast<std::size_t>(i)];
                for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= d * b[static_cast<std::size_t>(i)];
            }
        }
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) r2 += std::norm(w[static_cast<std::size_t>(i)]);
        if (r2 > best_norm) {
            best_norm = r2;
            best = w;
        }
    }
    apply_phase_convention({best.data(), static_cast<std::size_t>(n)});
    return StateVector::normalized(std::span<const Complex>(best.data(), static_cast<std::size_t>(n)));
}

} // namespace pentaks
