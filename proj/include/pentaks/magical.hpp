#pragma once

// Real/imaginary splitting of states written in a magical basis, the
// concurrence, and the pentagram tailored to a given spin-1 state.
//
// Two-qubit magical basis used throughout (product basis order |00>, |01>, |10>, |11>):
//   m1 = (|00> + |11>) / sqrt 2
//   m2 = i (|00> - |11>) / sqrt 2
//   m3 = i (|01> + |10>) / sqrt 2
//   m4 = (|01> - |10>) / sqrt 2
// In these coordinates SU(2) x SU(2) acts by real SO(4) matrices and
// sum_k psi_k^2 = 2 (ad - bc) for psi = a|00> + b|01> + c|10> + d|11>.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "pentaks/constants.hpp"
#include "pentaks/pentagram.hpp"
#include "pentaks/pentagram3.hpp"
#include "pentaks/spectral.hpp"

namespace pentaks {

/// psi ~ cos(sigma) x + i sin(sigma) y with x, y real orthonormal and
/// 0 <= sigma <= pi/4.
struct CanonicalDecomposition {
    std::vector<double> x;
    std::vector<double> y;
    double sigma = 0.0;

    [[nodiscard]] StateVector reassemble() const {
        std::array<Complex, max_dim> a{};
        for (std::size_t i = 0; i < x.size(); ++i) a[i] = Complex(std::cos(sigma) * x[i], std::sin(sigma) * y[i]);
        return StateVector::normalized(std::span<const Complex>(a.data(), x.size()));
    }
};

/// Bilinear square sum_k psi_k^2 = <psi*|psi>.
inline Complex bilinear_square(const StateVector& psi) {
    Complex z = 0.0;
    for (int i = 0; i < psi.dim(); ++i) z += psi[i] * psi[i];
    return z;
}

/// C = |<psi*|psi>|, for coordinates in a magical basis.
inline double concurrence(const StateVector& psi) { return std::min(1.0, std::abs(bilinear_square(psi))); }

namespace detail {

inline std::vector<double> unit_real_orthogonal_to(const std::vector<double>& x) {
    // Gram-Schmidt of the standard basis vector least aligned with x.
    std::size_t pick = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i]) < std::abs(x[pick])) pick = i;
    std::vector<double> y(x.size(), 0.0);
    y[pick] = 1.0;
    const double d = x[pick];
    double n2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] -= d * x[i];
        n2 += y[i] * y[i];
    }
    for (double& v : y) v /= std::sqrt(n2);
    return y;
}

} // namespace detail

/// Splits psi into its canonical real and imaginary parts.
///
/// The global phase is chosen to make <psi*|psi> real and non-negative,
/// which forces x . y = 0 and |Re psi| >= |Im psi|. The remaining sign
/// freedom is fixed by making the first component of x with modulus
/// above 1e-8 positive. When sigma = 0 the direction y is arbitrary and a
/// deterministic orthogonal choice is returned.
inline CanonicalDecomposition canonical_decompose(const StateVector& psi) {
    const Complex z = bilinear_square(psi);
    const Complex phase = std::abs(z) > 0.0 ? std::polar(1.0, -0.5 * std::arg(z)) : Complex(1.0);
    const std::size_t n = static_cast<std::size_t>(psi.dim());
    std::vector<double> re(n), im(n);
    double nr = 0.0, ni = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex c = phase * psi[static_cast<int>(i)];
        re[i] = c.real();
        im[i] = c.imag();
        nr += re[i] * re[i];
        ni += im[i] * im[i];
    }
    nr = std::sqrt(nr);
    ni = std::sqrt(ni);

    CanonicalDecomposition d;
    d.sigma = std::min(std::atan2(ni, nr), std::numbers::pi / 4);
    d.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) d.x[i] = re[i] / nr;
    if (ni > 1e-14) {
        d.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) d.y[i] = im[i] / ni;
        // Rounding leaves x . y ~ 1e-16; remove it.
        double dot = 0.0, n2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += d.x[i] * d.y[i];
        for (std::size_t i = 0; i < n; ++i) {
            d.y[i] -= dot * d.x[i];
            n2 += d.y[i] * d.y[i];
        }
        for (double& v : d.y) v /= std::sqrt(n2);
    } else {
        d.sigma = 0.0;
        d.y = detail::unit_real_orthogonal_to(d.x);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(d.x[i]) > tol::phase_pivot) {
            if (d.x[i] < 0.0) {
                for (double& v : d.x) v = -v;
                for (double& v : d.y) v = -v;
            }
            break;
        }
    }
    return d;
}

/// Unitary taking two-qubit product-basis coordinates to magical-basis coordinates.
inline Matrix magical_basis_matrix() {
    const double h = 1.0 / std::numbers::sqrt2;
    const Complex i{0.0, 1.0};
    Matrix m(4);
    // Rows are <m_k|.
    m(0, 0) = h;
    m(0, 3) = h;
    m(1, 0) = -i * h;
    m(1, 3) = i * h;
    m(2, 1) = -i * h;
    m(2, 2) = -i * h;
    m(3, 1) = h;
    m(3, 2) = -h;
    return m;
}

/// Product-basis coordinates to magical-basis coordinates.
inline StateVector magical_basis_map_4d(const StateVector& product_state) {
    if (product_state.dim() != 4) throw ValidationError("magical basis map needs a dimension-4 state");
    return transform(magical_basis_matrix(), product_state);
}

/// Magical-basis coordinates back to product-basis coordinates.
inline StateVector product_basis_map_4d(const StateVector& magical_state) {
    if (magical_state.dim() != 4) throw ValidationError("magical basis map needs a dimension-4 state");
    return transform(magical_basis_matrix().adjoint(), magical_state);
}

/// 2 |ad - bc| in product-basis coordinates.
inline double two_qubit_concurrence(const StateVector& product_state) {
    if (product_state.dim() != 4) throw ValidationError("two-qubit concurrence needs a dimension-4 state");
    return 2.0 * std::abs(product_state[0] * product_state[3] - product_state[1] * product_state[2]);
}

/// Default family angle of the tailored pentagram.
inline constexpr double default_tailor_epsilon = 0.05;

struct TailoredPentagram {
    Pentagram pentagram;
    CanonicalDecomposition decomposition;
    double concurrence;
    /// Family angle a = b actually used.
    double family_angle;
    /// Top two eigenvalues of the pentagram operator.
    double lambda1;
    double lambda2;
    double expectation;
    bool violates;
};

namespace detail {

inline std::array<double, 3> cross(const std::array<double, 3>& u, const std::array<double, 3>& v) {
    return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

/// Rotates the real pentagram `base` so that its top two eigenvectors land on x and y.
inline TailoredPentagram rotate_onto(const Pentagram& base, const StateVector& psi, double family_angle) {
    const CanonicalDecomposition dec = canonical_decompose(psi);
    const Eigensystem es = eigensystem(base.op());
    std::array<std::array<double, 3>, 3> u{};
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 3; ++i) u[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = es.vectors[static_cast<std::size_t>(k)][i].real();
    u[2] = cross(u[0], u[1]);
    std::array<std::array<double, 3>, 3> t{};
    for (int i = 0; i < 3; ++i) {
        t[0][static_cast<std::size_t>(i)] = dec.x[static_cast<std::size_t>(i)];
        t[1][static_cast<std::size_t>(i)] = dec.y[static_cast<std::size_t>(i)];
    }
    t[2] = cross(t[0], t[1]);

    // R = sum_k |t_k><u_k| is real orthogonal with det +1.
    Matrix r(3);
    for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 3; ++col) {
            double s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += t[k][static_cast<std::size_t>(row)] * u[k][static_cast<std::size_t>(col)];
            r(row, col) = s;
        }
    Pentagram p = base.transformed(r);
    const double e = p.expectation(psi);
    const double c = concurrence(psi);
    return {std::move(p), dec, c, family_angle, es.spectrum[0], es.spectrum[1], e, e > classical_bound + 1e-12};
}

} // namespace detail

/// Real pentagram whose top eigenvector is x and second eigenvector is y
/// for psi = cos(sigma) x + i sin(sigma) y, so that
/// <psi|Sigma|psi> = lambda1 cos^2 sigma + lambda2 sin^2 sigma.
///
/// The base is the real symmetric family member with a = b = a_eff, where
/// sin^2 a_eff = min(sin^2 epsilon, C / 4). The cap keeps the expectation
/// strictly above 2 for every C > 0 (including C << epsilon^2) and collapses
/// to the degenerate pentagram, expectation exactly 2, when C = 0.
inline TailoredPentagram tailor_pentagram(const StateVector& psi, double epsilon = default_tailor_epsilon) {
    if (psi.dim() != 3) throw ValidationError("tailor_pentagram needs a dimension-3 state");
    if (!(epsilon > 0.0 && epsilon <= 0.2)) throw ValidationError("tailor epsilon must lie in (0, 0.2]");
    const double c = concurrence(psi);
    const double s2 = std::min(std::pow(std::sin(epsilon), 2), c / 4.0);
    const double a = std::asin(std::sqrt(s2));
    return detail::rotate_onto(build_family({a, a, 0.0, 0.0}), psi, a);
}

/// As tailor_pentagram, but rotating the regular pentagram.
inline TailoredPentagram tailor_regular_pentagram(const StateVector& psi) {
    if (psi.dim() != 3) throw ValidationError("tailor_regular_pentagram needs a dimension-3 state");
    const PentagramParams reg = regular_params();
    return detail::rotate_onto(build_family(reg), psi, reg.a);
}

} // namespace pentaks
