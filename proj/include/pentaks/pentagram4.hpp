#pragma once

// Pentagrams in dimension 4: the separable and the maximally entangled
// regular pentagrams, pentagon spectra of the 18-vector set, and a Haar
// scan of the "every state violates some pentagram" question.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pentaks/magical.hpp"
#include "pentaks/optimize.hpp"
#include "pentaks/orthograph.hpp"
#include "pentaks/parallel.hpp"
#include "pentaks/random.hpp"

namespace pentaks {

enum class Pentagram4Kind { separable, maximally_entangled };

inline const char* to_string(Pentagram4Kind k) {
    return k == Pentagram4Kind::separable ? "separable" : "maximally-entangled";
}

/// A regular dimension-4 pentagram. Vectors are in magical-basis
/// coordinates for both kinds, so concurrence() applies directly.
struct Pentagram4Class {
    Pentagram4Kind kind;
    Pentagram pentagram;
    Spectrum spectrum;
    /// Seed and restart index of the search that produced it.
    std::uint64_t seed = 0;
    int restart = 0;
};

struct RegularSearchOptions {
    int restarts = 100;
    std::uint64_t seed = 4;
};

namespace tol {
inline constexpr double regular_solution = 1e-6;
inline constexpr double distinct_spectrum = 1e-3;
} // namespace tol

namespace detail {

inline std::array<StateVector, 5> separable_vectors(const optimize::Vector& x) {
    std::array<StateVector, 5> out{StateVector::basis(4, 0), StateVector::basis(4, 0), StateVector::basis(4, 0),
                                   StateVector::basis(4, 0), StateVector::basis(4, 0)};
    for (std::size_t k = 0; k < 5; ++k) {
        const double* p = &x[4 * k];
        const Complex u0 = std::cos(p[0]), u1 = std::polar(std::sin(p[0]), p[1]);
        const Complex v0 = std::cos(p[2]), v1 = std::polar(std::sin(p[2]), p[3]);
        out[k] = StateVector::normalized({u0 * v0, u0 * v1, u1 * v0, u1 * v1});
    }
    return out;
}

inline std::array<StateVector, 5> real_vectors(const optimize::Vector& x) {
    std::array<StateVector, 5> out{StateVector::basis(4, 0), StateVector::basis(4, 0), StateVector::basis(4, 0),
                                   StateVector::basis(4, 0), StateVector::basis(4, 0)};
    for (std::size_t k = 0; k < 5; ++k) {
        double n2 = 0.0;
        for (std::size_t i = 0; i < 4; ++i) n2 += x[4 * k + i] * x[4 * k + i];
        if (n2 < 1e-24) continue;
        out[k] = StateVector::normalized({x[4 * k], x[4 * k + 1], x[4 * k + 2], x[4 * k + 3]});
    }
    return out;
}

/// Re/Im of <k|k+2> and differences of consecutive |<k|k+1>|^2.
inline optimize::Vector regular_residuals(const std::array<StateVector, 5>& v) {
    optimize::Vector r;
    r.reserve(14);
    for (std::size_t k = 0; k < 5; ++k) {
        const Complex z = inner(v[k], v[(k + 2) % 5]);
        r.push_back(z.real());
        r.push_back(z.imag());
    }
    for (std::size_t k = 0; k < 4; ++k) {
        r.push_back(transition_probability(v[k], v[k + 1]) - transition_probability(v[k + 1], v[(k + 2) % 5]));
    }
    return r;
}

template <typename Build>
std::optional<Pentagram> regular_search_run(Build&& build, std::uint64_t seed, std::uint64_t index, bool angles) {
    SplitMix64 rng = substream(seed, index);
    optimize::Vector x0(20);
    for (double& v : x0) v = angles ? rng.uniform() * 2 * std::numbers::pi : rng.normal();
    const auto res = optimize::levenberg_marquardt([&](const optimize::Vector& x) { return regular_residuals(build(x)); }, x0,
                                                   {2000, 1e-28, 1e-16, 1e-7});
    if (res.value > 1e-20) return std::nullopt;
    try {
        Pentagram p = Pentagram::from_vectors(build(res.x), 1e-9);
        if (!p.is_regular(tol::regular_solution) || p.is_degenerate(1e-6)) return std::nullopt;
        return p;
    } catch (const Error&) {
        return std::nullopt;
    }
}

inline Pentagram to_magical(const Pentagram& p) { return p.transformed(magical_basis_matrix()); }

inline bool same_spectrum(const Spectrum& a, const Spectrum& b) {
    for (int i = 0; i < a.dim(); ++i)
        if (std::abs(a[i] - b[i]) > tol::distinct_spectrum) return false;
    return true;
}

} // namespace detail

/// Regular pentagram made of product states, found by a multi-start
/// Levenberg-Marquardt search on the orthogonality and regularity
/// residuals. Each vector is (cos t, e^{ip} sin t) x (cos s, e^{iq} sin s).
/// Throws NotFoundError when the restart budget is exhausted.
inline Pentagram4Class separable_regular(const RegularSearchOptions& opt = {}) {
    const auto runs = parallel_map<std::optional<Pentagram>>(static_cast<std::size_t>(std::max(opt.restarts, 0)), [&](std::size_t i) {
        return detail::regular_search_run(detail::separable_vectors, opt.seed, i, true);
    });
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!runs[i]) continue;
        Pentagram p = detail::to_magical(*runs[i]);
        Spectrum s = spectrum(p.op());
        return {Pentagram4Kind::separable, std::move(p), std::move(s), opt.seed, static_cast<int>(i)};
    }
    throw NotFoundError("no separable regular pentagram found in " + std::to_string(opt.restarts) + " restarts");
}

/// The two regular pentagrams with real magical-basis vectors, ordered by
/// decreasing largest eigenvalue. Throws NotFoundError unless two
/// spectrally distinct solutions turn up within the restart budget.
inline std::vector<Pentagram4Class> entangled_regular(const RegularSearchOptions& opt = {}) {
    const auto runs = parallel_map<std::optional<Pentagram>>(static_cast<std::size_t>(std::max(opt.restarts, 0)), [&](std::size_t i) {
        return detail::regular_search_run(detail::real_vectors, opt.seed, i, false);
    });
    std::vector<Pentagram4Class> found;
    for (std::size_t i = 0; i < runs.size() && found.size() < 2; ++i) {
        if (!runs[i]) continue;
        Spectrum s = spectrum(runs[i]->op());
        const bool known = std::any_of(found.begin(), found.end(),
                                       [&](const Pentagram4Class& c) { return detail::same_spectrum(c.spectrum, s); });
        if (!known) found.push_back({Pentagram4Kind::maximally_entangled, *runs[i], std::move(s), opt.seed, static_cast<int>(i)});
    }
    if (found.size() < 2) {
        throw NotFoundError("found " + std::to_string(found.size()) + " of 2 real regular pentagrams in " +
                            std::to_string(opt.restarts) + " restarts");
    }
    std::sort(found.begin(), found.end(),
              [](const Pentagram4Class& a, const Pentagram4Class& b) { return a.spectrum.max() > b.spectrum.max(); });
    return found;
}

struct PentagonSpectrum {
    InducedPentagon pentagon;
    Spectrum spectrum;
};

/// Spectra of all induced pentagons of a realized graph.
inline std::vector<PentagonSpectrum> pentagon_spectra(const OrthogonalityGraph& g) {
    std::vector<PentagonSpectrum> out;
    for (const InducedPentagon& p : induced_pentagons(g)) out.push_back({p, spectrum(pentagram_from_cycle(g, p).op())});
    return out;
}

inline std::vector<PentagonSpectrum> cabello_pentagon_spectra() { return pentagon_spectra(cabello18()); }

/// One row per pentagon: the five cycle labels, then the eigenvalues.
inline std::string pentagon_spectra_csv(const OrthogonalityGraph& g, const std::vector<PentagonSpectrum>& rows) {
    std::ostringstream os;
    os.precision(17);
    os << "c0,c1,c2,c3,c4";
    const int dim = rows.empty() ? 0 : rows.front().spectrum.dim();
    for (int i = 0; i < dim; ++i) os << ",lambda" << i;
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < 5; ++k) os << (k ? "," : "") << '"' << g.labels()[static_cast<std::size_t>(r.pentagon.cycle[k])] << '"';
        for (double v : r.spectrum.values) os << ',' << v;
        os << '\n';
    }
    return os.str();
}

struct ConjectureReport {
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    int pentagon_count = 0;
    /// Fraction of samples whose best pentagon expectation exceeds 2.
    double violating_fraction = 0.0;
    /// Minimum over samples of the maximum over pentagons.
    double min_max_expectation = 0.0;
    std::uint64_t argmin_sample = 0;
    StateVector argmin_state = StateVector::basis(3, 0);
    /// The same quantity after local minimization from the worst sample.
    double refined_min = 0.0;
    StateVector refined_state = StateVector::basis(3, 0);
};

namespace detail {

inline double max_pentagon_expectation(const std::vector<Pentagram>& ps, const StateVector& psi) {
    double best = -1.0;
    for (const Pentagram& p : ps) best = std::max(best, p.expectation(psi));
    return best;
}

inline StateVector state_from_reals(const optimize::Vector& x, int dim) {
    std::array<Complex, max_dim> a{};
    for (int i = 0; i < dim; ++i) a[static_cast<std::size_t>(i)] = {x[2 * static_cast<std::size_t>(i)], x[2 * static_cast<std::size_t>(i) + 1]};
    return StateVector::normalized(std::span<const Complex>(a.data(), static_cast<std::size_t>(dim)));
}

} // namespace detail

/// Samples Haar-random states and records, for each, the largest
/// expectation over all induced pentagons. Sample i draws from substream
/// (seed, i). Throws NotApplicableError without pentagons.
inline ConjectureReport conjecture_scan(const OrthogonalityGraph& g, std::uint64_t samples, std::uint64_t seed) {
    if (!g.realized()) throw ValidationError("conjecture scan needs a realized graph");
    if (g.dim() != 3 && g.dim() != 4) throw ValidationError("conjecture scan needs dimension 3 or 4");
    if (samples == 0) throw ValidationError("conjecture scan needs at least one sample");
    const auto pentagons = induced_pentagons(g);
    if (pentagons.empty()) throw NotApplicableError("graph has no induced pentagon");
    std::vector<Pentagram> ps;
    for (const auto& p : pentagons) ps.push_back(pentagram_from_cycle(g, p));
    const int dim = g.dim();

    const auto values = parallel_map<double>(static_cast<std::size_t>(samples), [&](std::size_t i) {
        SplitMix64 rng = substream(seed, i);
        return detail::max_pentagon_expectation(ps, haar_state(dim, rng));
    });

    ConjectureReport r;
    r.samples = samples;
    r.seed = seed;
    r.pentagon_count = static_cast<int>(ps.size());
    std::uint64_t violating = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > classical_bound) ++violating;
        if (values[i] < values[r.argmin_sample]) r.argmin_sample = i;
    }
    r.violating_fraction = static_cast<double>(violating) / static_cast<double>(samples);
    r.min_max_expectation = values[r.argmin_sample];
    SplitMix64 rng = substream(seed, r.argmin_sample);
    r.argmin_state = haar_state(dim, rng);

    optimize::Vector x0;
    for (int i = 0; i < dim; ++i) {
        x0.push_back(r.argmin_state[i].real());
        x0.push_back(r.argmin_state[i].imag());
    }
    const auto local = optimize::nelder_mead(
        [&](const optimize::Vector& x) { return detail::max_pentagon_expectation(ps, detail::state_from_reals(x, dim)); }, x0,
        {0.05, 1e-10, 1e-14, 20000});
    if (local.value < r.min_max_expectation) {
        r.refined_state = detail::state_from_reals(local.x, dim).with_phase_convention();
        r.refined_min = local.value;
    } else {
        r.refined_state = r.argmin_state;
        r.refined_min = r.min_max_expectation;
    }
    return r;
}

} // namespace pentaks
