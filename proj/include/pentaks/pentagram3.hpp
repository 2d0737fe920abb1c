#pragma once

// The four-angle family of all three-dimensional pentagrams, its overlap
// sum A, the one-parameter curve of spectra, and the extremal searches.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "pentaks/constants.hpp"
#include "pentaks/optimize.hpp"
#include "pentaks/parallel.hpp"
#include "pentaks/pentagram.hpp"
#include "pentaks/spectral.hpp"

namespace pentaks {

/// Angles (a, b) in [0, pi/2] and phases (mu, nu) in [0, 2 pi).
struct PentagramParams {
    double a = 0.0;
    double b = 0.0;
    double mu = 0.0;
    double nu = 0.0;

    void validate() const {
        constexpr double slack = 1e-12;
        const auto in = [](double x, double lo, double hi) { return x >= lo - slack && x <= hi + slack; };
        if (!in(a, 0.0, std::numbers::pi / 2) || !in(b, 0.0, std::numbers::pi / 2)) {
            throw ValidationError("family angles a, b must lie in [0, pi/2]");
        }
        if (!in(mu, 0.0, 2 * std::numbers::pi) || !in(nu, 0.0, 2 * std::numbers::pi) || mu >= 2 * std::numbers::pi ||
            nu >= 2 * std::numbers::pi) {
            throw ValidationError("family phases mu, nu must lie in [0, 2 pi)");
        }
    }

    friend bool operator<(const PentagramParams& x, const PentagramParams& y) {
        return std::tie(x.a, x.b, x.mu, x.nu) < std::tie(y.a, y.b, y.mu, y.nu);
    }
};

/// Parameters of the regular pentagram, sin^2 a = sin^2 b = Phi - 1.
inline PentagramParams regular_params() {
    const double a = std::asin(std::sqrt(golden_ratio - 1.0));
    return {a, a, 0.0, 0.0};
}

/// Maps arbitrary real angles to the canonical ranges without changing
/// sin^2 a, sin^2 b (and hence A and the spectrum).
inline PentagramParams canonical_params(double a, double b, double mu, double nu) {
    const auto fold_angle = [](double x) { return std::acos(std::min(1.0, std::abs(std::cos(x)))); };
    const auto wrap_phase = [](double x) {
        double w = std::fmod(x, 2 * std::numbers::pi);
        if (w < 0) w += 2 * std::numbers::pi;
        return w >= 2 * std::numbers::pi ? 0.0 : w;
    };
    return {fold_angle(a), fold_angle(b), wrap_phase(mu), wrap_phase(nu)};
}

namespace detail {

inline std::array<StateVector, 5> family_vectors(double a, double b, double mu, double nu) {
    const double sa = std::sin(a), ca = std::cos(a), sb = std::sin(b), cb = std::cos(b);
    const double denom = 1.0 - sa * sa * sb * sb;
    if (!(denom > 1e-12)) throw SingularFamilyError("sin^2(a) sin^2(b) = 1: family is singular");
    const double inv = 1.0 / std::sqrt(denom);
    const Complex emu = std::polar(1.0, mu), enu = std::polar(1.0, nu);
    const std::array<Complex, 3> v4{std::conj(emu) * (sa * cb * inv), std::conj(enu) * (ca * sb * inv),
                                    Complex(-ca * cb * inv)};
    return {
        StateVector::basis(3, 0),
        StateVector::normalized({ca, 0.0, emu * sa}),
        StateVector::normalized({0.0, cb, enu * sb}),
        StateVector::basis(3, 1),
        StateVector::normalized(std::span<const Complex>(v4)),
    };
}

} // namespace detail

/// Builds the pentagram with vectors |0> = (1,0,0), |1> = (cos a, 0, e^{i mu} sin a),
/// |2> = (0, cos b, e^{i nu} sin b), |3> = (0,1,0) and |4> fixed by |1>, |2>.
inline Pentagram build_family(const PentagramParams& params) {
    params.validate();
    return Pentagram::from_vectors(detail::family_vectors(params.a, params.b, params.mu, params.nu));
}

/// A = sum_k |<k|k+1>|^2 computed from the vectors.
inline double overlap_sum_A(const Pentagram& p) { return p.overlap_sum(); }

/// A = 2 - sin^2 a sin^2 b cos^2 a cos^2 b / (1 - sin^2 a sin^2 b).
inline double closed_form_A(const PentagramParams& params) {
    const double sa2 = std::pow(std::sin(params.a), 2), sb2 = std::pow(std::sin(params.b), 2);
    const double denom = 1.0 - sa2 * sb2;
    if (!(denom > 1e-12)) throw SingularFamilyError("sin^2(a) sin^2(b) = 1: family is singular");
    return 2.0 - sa2 * sb2 * (1.0 - sa2) * (1.0 - sb2) / denom;
}

/// Lower end of the attainable range of A, 2 - Phi^-5.
inline constexpr double min_overlap_sum = 2.0 - golden_inverse_fifth;

/// Spectrum of any dimension-3 pentagram with overlap sum A, via the characteristic cubic.
inline Spectrum spectrum_from_A(double overlap_sum) {
    const auto r = cubic_roots(characteristic_cubic(overlap_sum));
    return Spectrum{{r[0], r[1], r[2]}};
}

struct SpectrumCurvePoint {
    double lambda0;
    double lambda_plus;
    double lambda_minus;
};

/// Closed-form eigenvalues of the real symmetric pentagram with sin a = sin b = s.
inline SpectrumCurvePoint spectrum_curve(double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("spectrum_curve needs 0 <= s <= 1");
    const double s2 = s * s;
    const double radicand = std::max(0.0, (1.0 + 3.0 * s2 - 5.0 * s2 * s2 + s2 * s2 * s2) / (1.0 + s2));
    const double half_root = 0.5 * std::sqrt(radicand);
    return {2.0 - s2, 0.5 * (3.0 + s2) + half_root, 0.5 * (3.0 + s2) - half_root};
}

struct FamilyExtremum {
    PentagramParams params;
    double value = 0.0;
};

struct FamilyScanOptions {
    /// Grid points per angle.
    int grid = 64;
    /// Restrict to a = b, mu = nu = 0.
    bool real_symmetric = false;
    optimize::NelderMeadOptions refine{0.02, 1e-10, 1e-16, 20000};
};

namespace detail {

/// Overlap sum of the family member at the given trigonometric values,
/// straight from the five vectors' pairwise overlaps. Used on the dense grid
/// where building validated StateVectors for every point would dominate.
inline double family_overlap_sum_fast(double sa, double ca, double sb, double cb, Complex emu, Complex enu) {
    const double denom = 1.0 - sa * sa * sb * sb;
    const double inv = 1.0 / std::sqrt(denom);
    const std::array<Complex, 3> v0{1.0, 0.0, 0.0};
    const std::array<Complex, 3> v1{ca, 0.0, emu * sa};
    const std::array<Complex, 3> v2{0.0, cb, enu * sb};
    const std::array<Complex, 3> v3{0.0, 1.0, 0.0};
    const std::array<Complex, 3> v4{std::conj(emu) * (sa * cb * inv), std::conj(enu) * (ca * sb * inv), -ca * cb * inv};
    const auto ov = [](const std::array<Complex, 3>& x, const std::array<Complex, 3>& y) {
        return std::norm(std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1] + std::conj(x[2]) * y[2]);
    };
    return ov(v0, v1) + ov(v1, v2) + ov(v2, v3) + ov(v3, v4) + ov(v4, v0);
}

inline double grid_angle(int i, int grid) { return grid <= 1 ? 0.0 : (std::numbers::pi / 2) * i / (grid - 1); }
inline double grid_phase(int i, int grid) { return 2 * std::numbers::pi * i / grid; }

/// Largest eigenvalue of the family member, by full diagonalization.
inline double family_max_eigenvalue(double a, double b, double mu, double nu) {
    const Pentagram p = Pentagram::from_vectors(family_vectors(a, b, mu, nu), 1e-9);
    return eigensystem(p.op()).spectrum.max();
}

struct GridBest {
    double value = -1.0;
    PentagramParams params;
};

/// Better = larger value; exact ties go to the lexicographically smaller parameters.
inline bool better(const GridBest& x, const GridBest& y) {
    if (x.value != y.value) return x.value > y.value;
    return x.params < y.params;
}

} // namespace detail

/// Global maximum of the largest eigenvalue over the whole family.
///
/// Coarse grid over (a, b, mu, nu), then Nelder-Mead on the full
/// eigen-decomposition from the best grid point. On the grid the top
/// eigenvalue is taken as the largest root of the characteristic cubic at
/// the directly computed overlap sum; the refinement and the returned value
/// use the eigensolver.
inline FamilyExtremum max_eigenvalue_over_family(const FamilyScanOptions& opt = {}) {
    const int n = std::max(2, opt.grid);
    std::vector<double> sines(static_cast<std::size_t>(n)), cosines(static_cast<std::size_t>(n));
    std::vector<Complex> phases(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        sines[static_cast<std::size_t>(i)] = std::sin(detail::grid_angle(i, n));
        cosines[static_cast<std::size_t>(i)] = std::cos(detail::grid_angle(i, n));
        phases[static_cast<std::size_t>(i)] = std::polar(1.0, detail::grid_phase(i, n));
    }
    const int phase_points = opt.real_symmetric ? 1 : n;

    const auto slices = parallel_map<detail::GridBest>(static_cast<std::size_t>(n), [&](std::size_t ia) {
        detail::GridBest best;
        const int b_lo = opt.real_symmetric ? static_cast<int>(ia) : 0;
        const int b_hi = opt.real_symmetric ? static_cast<int>(ia) + 1 : n;
        for (int ib = b_lo; ib < b_hi; ++ib) {
            const double sa = sines[ia], ca = cosines[ia];
            const double sb = sines[static_cast<std::size_t>(ib)], cb = cosines[static_cast<std::size_t>(ib)];
            if (!(1.0 - sa * sa * sb * sb > 1e-12)) continue;
            for (int im = 0; im < phase_points; ++im)
                for (int in = 0; in < phase_points; ++in) {
                    const double A = detail::family_overlap_sum_fast(sa, ca, sb, cb, phases[static_cast<std::size_t>(im)],
                                                                     phases[static_cast<std::size_t>(in)]);
                    detail::GridBest cand{cubic_roots(characteristic_cubic(std::clamp(A, min_overlap_sum, 2.0)))[0],
                                          {detail::grid_angle(static_cast<int>(ia), n), detail::grid_angle(ib, n),
                                           detail::grid_phase(im, n), detail::grid_phase(in, n)}};
                    if (detail::better(cand, best)) best = cand;
                }
        }
        return best;
    });
    detail::GridBest best;
    for (const auto& s : slices)
        if (detail::better(s, best)) best = s;

    optimize::Result r;
    if (opt.real_symmetric) {
        r = optimize::nelder_mead(
            [](const optimize::Vector& x) {
                try {
                    return -detail::family_max_eigenvalue(x[0], x[0], 0.0, 0.0);
                } catch (const Error&) {
                    return std::numeric_limits<double>::infinity();
                }
            },
            {best.params.a}, opt.refine);
        r.x = {r.x[0], r.x[0], 0.0, 0.0};
    } else {
        r = optimize::nelder_mead(
            [](const optimize::Vector& x) {
                try {
                    return -detail::family_max_eigenvalue(x[0], x[1], x[2], x[3]);
                } catch (const Error&) {
                    return std::numeric_limits<double>::infinity();
                }
            },
            {best.params.a, best.params.b, best.params.mu, best.params.nu}, opt.refine);
    }
    FamilyExtremum out;
    out.params = canonical_params(r.x[0], r.x[1], r.x[2], r.x[3]);
    out.value = eigensystem(build_family(out.params).op()).spectrum.max();
    return out;
}

/// Global minimum of A over real pentagrams (mu = nu = 0): grid x grid
/// over (a, b) followed by Nelder-Mead.
inline FamilyExtremum min_overlap_sum_over_family(int grid = 256) {
    const int n = std::max(2, grid);
    const auto slices = parallel_map<detail::GridBest>(static_cast<std::size_t>(n), [&](std::size_t ia) {
        detail::GridBest best;
        for (int ib = 0; ib < n; ++ib) {
            const PentagramParams p{detail::grid_angle(static_cast<int>(ia), n), detail::grid_angle(ib, n), 0.0, 0.0};
            try {
                // `better` maximizes, so track -A.
                detail::GridBest cand{-overlap_sum_A(build_family(p)), p};
                if (detail::better(cand, best)) best = cand;
            } catch (const SingularFamilyError&) {
            }
        }
        return best;
    });
    detail::GridBest best{-std::numeric_limits<double>::infinity(), {}};
    for (const auto& s : slices)
        if (detail::better(s, best)) best = s;

    const auto r = optimize::nelder_mead(
        [](const optimize::Vector& x) {
            try {
                return Pentagram::from_vectors(detail::family_vectors(x[0], x[1], 0.0, 0.0), 1e-9).overlap_sum();
            } catch (const Error&) {
                return std::numeric_limits<double>::infinity();
            }
        },
        {best.params.a, best.params.b}, {0.01, 1e-10, 1e-17, 20000});
    FamilyExtremum out;
    out.params = canonical_params(r.x[0], r.x[1], 0.0, 0.0);
    out.value = overlap_sum_A(build_family(out.params));
    return out;
}

struct FamilyScanRow {
    PentagramParams params;
    double A;
    Spectrum spectrum;
};

/// Grid over real pentagrams (a, b) with mu = nu = 0, or over all four
/// parameters when `full` is set. Singular points are skipped.
inline std::vector<FamilyScanRow> scan_family(int grid, bool full = false) {
    if (grid < 2) throw ValidationError("scan grid needs at least 2 points per angle");
    const std::size_t n = static_cast<std::size_t>(grid);
    const std::size_t phase_points = full ? n : 1;
    const auto blocks = parallel_map<std::vector<FamilyScanRow>>(n, [&](std::size_t ia) {
        std::vector<FamilyScanRow> rows;
        for (std::size_t ib = 0; ib < n; ++ib)
            for (std::size_t im = 0; im < phase_points; ++im)
                for (std::size_t in = 0; in < phase_points; ++in) {
                    const PentagramParams p{detail::grid_angle(static_cast<int>(ia), grid),
                                            detail::grid_angle(static_cast<int>(ib), grid),
                                            full ? detail::grid_phase(static_cast<int>(im), grid) : 0.0,
                                            full ? detail::grid_phase(static_cast<int>(in), grid) : 0.0};
                    try {
                        const Pentagram pg = build_family(p);
                        rows.push_back({p, pg.overlap_sum(), eigensystem(pg.op()).spectrum});
                    } catch (const SingularFamilyError&) {
                    }
                }
        return rows;
    });
    std::vector<FamilyScanRow> out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
}

/// Half-angle (degrees) of the cone of real vectors around the top
/// eigenvector on which <Sigma> stays above the classical bound.
///
/// The boundary is where lambda_max cos^2 t + lambda_min sin^2 t = 2, the
/// least favourable orthogonal direction being the bottom eigenvector.
inline double violation_cone_angle(const Pentagram& p) {
    const Spectrum s = eigensystem(p.op()).spectrum;
    if (!(s.max() > classical_bound + 1e-9)) {
        throw NoViolationError("largest eigenvalue does not exceed the classical bound");
    }
    if (s.min() >= classical_bound) return 90.0;
    const double cos2 = (classical_bound - s.min()) / (s.max() - s.min());
    return std::acos(std::sqrt(cos2)) * 180.0 / std::numbers::pi;
}

} // namespace pentaks
