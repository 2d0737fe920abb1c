#pragma once

// Paradoxes built on the Kochen-Specker subgraph: the 1/9 probability and
// its pentagram form, the Aharon-Vaidman box game, and Hardy's paradox as
// a separability-constrained optimization.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pentaks/constants.hpp"
#include "pentaks/magical.hpp"
#include "pentaks/optimize.hpp"
#include "pentaks/orthograph.hpp"
#include "pentaks/parallel.hpp"
#include "pentaks/pentagram3.hpp"
#include "pentaks/random.hpp"

namespace pentaks {

// ---------------------------------------------------------------------------
// Kochen-Specker subgraph

/// p = |<psi_u|psi_d>|^2.
inline double ks_probability(const KsSubgraph& g) {
    return transition_probability(g.vec(KsSubgraph::psi_u), g.vec(KsSubgraph::psi_d));
}

/// <psi_d|Sigma_u|psi_d> for the upper pentagram.
inline double ks_upper_expectation(const KsSubgraph& g) { return g.upper().expectation(g.vec(KsSubgraph::psi_d)); }

/// |<psi_d|Sigma_u|psi_d> - (p + 2)|.
inline double verify_p_plus_2(const KsSubgraph& g) { return std::abs(ks_upper_expectation(g) - (ks_probability(g) + 2.0)); }

/// Residuals of the two resolutions of the identity behind the p + 2
/// identity: sum_i |<psi_d|e_i>|^2 - 1 and the same for f.
inline std::array<double, 2> ks_triad_residuals(const KsSubgraph& g) {
    using K = KsSubgraph;
    const StateVector& d = g.vec(K::psi_d);
    const double e = transition_probability(d, g.vec(K::e1)) + transition_probability(d, g.vec(K::e2)) +
                     transition_probability(d, g.vec(K::e3));
    const double f = transition_probability(d, g.vec(K::f1)) + transition_probability(d, g.vec(K::f2)) +
                     transition_probability(d, g.vec(K::f3));
    return {e - 1.0, f - 1.0};
}

/// Upper pentagon of the explicit realization with psi_u = (1,1,1)/sqrt 3,
/// e1 = (1,0,0), f1 = (0,1,0).
inline Pentagram box_game_upper_pentagon() {
    return Pentagram::from_vectors({
        StateVector::normalized({1.0, 1.0, 1.0}),
        StateVector::basis(3, 1),
        StateVector::normalized({0.0, 1.0, -1.0}),
        StateVector::normalized({1.0, 0.0, -1.0}),
        StateVector::basis(3, 0),
    });
}

struct KsMaximum {
    PentagramParams params;
    double p = 0.0;
    double expectation = 0.0;
    /// Argmax of <psi_d|Sigma_u|psi_d> found by an independent run, and p there.
    PentagramParams expectation_argmax;
    double p_at_expectation_argmax = 0.0;
};

struct KsMaximizeOptions {
    /// Grid points per angle for the start search (a, b); phases use half as many.
    int grid = 12;
    bool real_only = false;
};

namespace detail {

inline double ks_objective(const optimize::Vector& x, bool use_expectation) {
    try {
        const double mu = x.size() > 2 ? x[2] : 0.0, nu = x.size() > 2 ? x[3] : 0.0;
        const Pentagram upper = Pentagram::from_vectors(family_vectors(x[0], x[1], mu, nu), 1e-9);
        const KsSubgraph g = realize_ks_subgraph(upper);
        return use_expectation ? ks_upper_expectation(g) : ks_probability(g);
    } catch (const Error&) {
        return -std::numeric_limits<double>::infinity();
    }
}

inline optimize::Vector ks_maximize_run(bool use_expectation, const KsMaximizeOptions& opt) {
    const int n = std::max(3, opt.grid);
    const int m = opt.real_only ? 1 : std::max(2, n / 2);
    optimize::Vector best_x;
    double best = -std::numeric_limits<double>::infinity();
    for (int ia = 1; ia < n - 1; ++ia)
        for (int ib = 1; ib < n - 1; ++ib)
            for (int im = 0; im < m; ++im)
                for (int in = 0; in < m; ++in) {
                    optimize::Vector x{grid_angle(ia, n), grid_angle(ib, n)};
                    if (!opt.real_only) {
                        x.push_back(grid_phase(im, m));
                        x.push_back(grid_phase(in, m));
                    }
                    const double v = ks_objective(x, use_expectation);
                    if (v > best) {
                        best = v;
                        best_x = x;
                    }
                }
    auto r = optimize::nelder_mead([&](const optimize::Vector& x) { return -ks_objective(x, use_expectation); }, best_x,
                                   {0.05, 1e-11, 1e-17, 20000});
    if (opt.real_only) {
        r.x.push_back(0.0);
        r.x.push_back(0.0);
    }
    return r.x;
}

} // namespace detail

/// Maximizes p over all upper pentagons (the four-angle family), then runs
/// an independent maximization of <psi_d|Sigma_u|psi_d> and reports p at its
/// argmax, which the p + 2 identity says must coincide.
inline KsMaximum maximize_ks_probability(const KsMaximizeOptions& opt = {}) {
    const auto xp = detail::ks_maximize_run(false, opt);
    const auto xe = detail::ks_maximize_run(true, opt);
    KsMaximum out;
    out.params = canonical_params(xp[0], xp[1], xp[2], xp[3]);
    const KsSubgraph g = realize_ks_subgraph(Pentagram::from_vectors(detail::family_vectors(xp[0], xp[1], xp[2], xp[3]), 1e-9));
    out.p = ks_probability(g);
    out.expectation = ks_upper_expectation(g);
    out.expectation_argmax = canonical_params(xe[0], xe[1], xe[2], xe[3]);
    out.p_at_expectation_argmax = detail::ks_objective(xe, false);
    return out;
}

// ---------------------------------------------------------------------------
// Aharon-Vaidman game

struct GameStats {
    std::uint64_t runs = 0;
    std::uint64_t selected = 0;
    std::uint64_t wins_among_selected = 0;
    std::uint64_t rng_seed = 0;

    friend bool operator==(const GameStats&, const GameStats&) = default;
};

/// Simulates the box game.
///
/// Alice prepares psi_u = (|box1> + |box2> + |no box>)/sqrt 3. Bob opens box
/// 1 or 2 with equal probability; finding the particle leaves it in that
/// box, not finding it leaves the normalized projection onto the other two
/// states. Alice then measures |psi_d><psi_d| and counts the run iff the
/// answer is yes. Run i draws from substream (seed, i).
inline GameStats av_game(std::uint64_t runs, std::uint64_t seed) {
    if (runs == 0) throw ValidationError("av_game needs at least one run");
    const KsSubgraph g = realize_ks_subgraph(box_game_upper_pentagon());
    const StateVector& psi_u = g.vec(KsSubgraph::psi_u);
    const StateVector& psi_d = g.vec(KsSubgraph::psi_d);

    struct Branch {
        double p_found;
        double p_yes_found;
        double p_yes_missed;
    };
    std::array<Branch, 2> branch{};
    for (int box = 0; box < 2; ++box) {
        const StateVector opened = StateVector::basis(3, box);
        const Complex amp = inner(opened, psi_u);
        std::array<Complex, 3> rest{};
        for (int i = 0; i < 3; ++i) rest[static_cast<std::size_t>(i)] = psi_u[i] - amp * opened[i];
        const StateVector missed = StateVector::normalized(std::span<const Complex>(rest));
        branch[static_cast<std::size_t>(box)] = {std::norm(amp), transition_probability(psi_d, opened),
                                                 transition_probability(psi_d, missed)};
    }

    constexpr std::uint64_t block = 1 << 16;
    const std::uint64_t blocks = (runs + block - 1) / block;
    const auto partial = parallel_map<std::array<std::uint64_t, 2>>(static_cast<std::size_t>(blocks), [&](std::size_t b) {
        std::array<std::uint64_t, 2> c{};
        const std::uint64_t end = std::min<std::uint64_t>(runs, (b + 1) * block);
        for (std::uint64_t i = b * block; i < end; ++i) {
            SplitMix64 rng = substream(seed, i);
            const Branch& br = branch[rng.next() >> 63];
            const bool found = rng.uniform() < br.p_found;
            const bool yes = rng.uniform() < (found ? br.p_yes_found : br.p_yes_missed);
            if (yes) {
                ++c[0];
                if (found) ++c[1];
            }
        }
        return c;
    });
    GameStats s{runs, 0, 0, seed};
    for (const auto& c : partial) {
        s.selected += c[0];
        s.wins_among_selected += c[1];
    }
    return s;
}

// ---------------------------------------------------------------------------
// Hardy's paradox

/// Local measurement bases in gauge-fixed form: the A2 = 1 and B2 = 1
/// states are |0>; the A1 = 1 state is cos(theta_a)|0> + e^{i phi_a} sin(theta_a)|1>,
/// and likewise B1 = 1 on Bob's side.
struct HardyParams {
    double theta_a = 0.0;
    double phi_a = 0.0;
    double theta_b = 0.0;
    double phi_b = 0.0;
};

/// Nine-node Hardy graph in dimension 4, product-basis coordinates.
/// Label "~a1~b2" is the state with A1 = 0 and B2 = 0, and so on.
struct HardyGraph {
    OrthogonalityGraph graph;
    HardyParams params;

    // Upper pentagon in cycle order, then lower completions, outlier and Psi.
    static constexpr int a1b1 = 0, na1nb2 = 1, na2b2 = 2, a2nb2 = 3, na2nb1 = 4, a1nb2 = 5, na2b1 = 6, a2b2 = 7, psi = 8;

    [[nodiscard]] const StateVector& vec(int node) const { return graph.vector(node); }

    /// Upper pentagram, pentagram order from cycle a1b1 - ~a1~b2 - ~a2b2 - a2~b2 - ~a2~b1.
    [[nodiscard]] Pentagram upper() const {
        return Pentagram::from_vectors({vec(a1b1), vec(a2nb2), vec(na1nb2), vec(na2nb1), vec(na2b2)}, tol::graph_orthogonality);
    }
};

struct HardyProbabilities {
    double b2_zero_given_a1 = 0.0;
    double a2_zero_given_b1 = 0.0;
    double a2_and_b2 = 0.0;
    /// P(A1 = 1, B1 = 1) = |<a1b1|Psi>|^2.
    double a1_and_b1 = 0.0;
};

namespace detail {

inline std::array<Complex, 2> qubit(double theta, double phi) { return {std::cos(theta), std::polar(std::sin(theta), phi)}; }
inline std::array<Complex, 2> qubit_perp(double theta, double phi) {
    return {-std::polar(std::sin(theta), -phi), std::cos(theta)};
}
inline StateVector product(const std::array<Complex, 2>& u, const std::array<Complex, 2>& v) {
    return StateVector::normalized({u[0] * v[0], u[0] * v[1], u[1] * v[0], u[1] * v[1]});
}

} // namespace detail

/// Builds the Hardy graph from the local bases.
///
/// All nodes but Psi are product states. Psi is the ray orthogonal to
/// a1~b2, ~a2b1 and a2b2, which enforces the three zero-probability
/// conditions. Throws CollapseError when <a1b1|a2b2> = 0 and
/// DegeneracyError when Psi is not determined.
inline HardyGraph hardy_construct(const HardyParams& hp) {
    using H = HardyGraph;
    const auto a1 = detail::qubit(hp.theta_a, hp.phi_a), na1 = detail::qubit_perp(hp.theta_a, hp.phi_a);
    const auto b1 = detail::qubit(hp.theta_b, hp.phi_b), nb1 = detail::qubit_perp(hp.theta_b, hp.phi_b);
    const std::array<Complex, 2> a2{1.0, 0.0}, na2{0.0, 1.0}, b2{1.0, 0.0}, nb2{0.0, 1.0};

    std::vector<StateVector> v{
        detail::product(a1, b1),  detail::product(na1, nb2), detail::product(na2, b2), detail::product(a2, nb2),
        detail::product(na2, nb1), detail::product(a1, nb2), detail::product(na2, b1), detail::product(a2, b2),
    };
    if (std::abs(inner(v[H::a1b1], v[H::a2b2])) < 1e-12) {
        throw CollapseError("<a1b1|a2b2> = 0: the upper vector lies in the outlier's complement");
    }
    const std::array<StateVector, 3> constraints{v[H::a1nb2], v[H::na2b1], v[H::a2b2]};
    v.push_back(orthogonal_complement(constraints));

    std::vector<Edge> edges{
        {H::a1b1, H::na1nb2}, {H::na1nb2, H::na2b2}, {H::na2b2, H::a2nb2}, {H::a2nb2, H::na2nb1}, {H::na2nb1, H::a1b1},
        {H::na2b2, H::a1nb2}, {H::na1nb2, H::a1nb2}, {H::a2nb2, H::na2b1}, {H::na2nb1, H::na2b1}, {H::psi, H::a1nb2},
        {H::psi, H::na2b1},
    };
    for (int k = 1; k < H::psi + 1; ++k)
        if (k != H::a2b2) edges.emplace_back(H::a2b2, k);
    return {OrthogonalityGraph({"a1b1", "~a1~b2", "~a2b2", "a2~b2", "~a2~b1", "a1~b2", "~a2b1", "a2b2", "Psi"},
                               std::move(edges),
                               {{H::na2b2, H::na1nb2, H::a1nb2, H::a2b2}, {H::a2nb2, H::na2nb1, H::na2b1, H::a2b2}},
                               std::move(v)),
            hp};
}

/// The four probabilities of Hardy's argument in the state Psi. A
/// conditional probability with a vanishing condition is reported as 0.
inline HardyProbabilities hardy_probabilities(const HardyGraph& h) {
    const HardyParams& hp = h.params;
    const auto a1 = detail::qubit(hp.theta_a, hp.phi_a);
    const auto b1 = detail::qubit(hp.theta_b, hp.phi_b);
    const std::array<Complex, 2> a2{1.0, 0.0}, na2{0.0, 1.0}, b2{1.0, 0.0}, nb2{0.0, 1.0};
    const StateVector& psi = h.vec(HardyGraph::psi);
    const auto prob = [&](const std::array<Complex, 2>& u, const std::array<Complex, 2>& v) {
        return transition_probability(detail::product(u, v), psi);
    };
    const auto cond = [](double joint, double marginal) { return marginal > 0.0 ? joint / marginal : 0.0; };
    HardyProbabilities out;
    out.b2_zero_given_a1 = cond(prob(a1, nb2), prob(a1, b2) + prob(a1, nb2));
    out.a2_zero_given_b1 = cond(prob(na2, b1), prob(a2, b1) + prob(na2, b1));
    out.a2_and_b2 = prob(a2, b2);
    out.a1_and_b1 = prob(a1, b1);
    return out;
}

/// <Psi|Sigma_u|Psi> for the upper pentagon.
inline double hardy_upper_expectation(const HardyGraph& h) { return h.upper().expectation(h.vec(HardyGraph::psi)); }

struct HardyMaximum {
    HardyParams params;
    double p = 0.0;
    double expectation = 0.0;
    /// Best p of every restart, in restart order.
    std::vector<double> restart_values;
    /// Argmax of <Psi|Sigma_u|Psi> from an independent run, and p there.
    HardyParams expectation_argmax;
    double p_at_expectation_argmax = 0.0;
};

struct HardyMaximizeOptions {
    int restarts = 10;
    std::uint64_t seed = 20091;
};

namespace detail {

inline double hardy_objective(const optimize::Vector& x, bool use_expectation) {
    try {
        const HardyGraph h = hardy_construct({x[0], x[1], x[2], x[3]});
        return use_expectation ? hardy_upper_expectation(h) : hardy_probabilities(h).a1_and_b1;
    } catch (const Error&) {
        return -std::numeric_limits<double>::infinity();
    }
}

inline optimize::Result hardy_restart(std::uint64_t seed, std::uint64_t index, bool use_expectation) {
    SplitMix64 rng = substream(seed, index);
    optimize::Vector x0{rng.uniform() * std::numbers::pi / 2, rng.uniform() * 2 * std::numbers::pi,
                        rng.uniform() * std::numbers::pi / 2, rng.uniform() * 2 * std::numbers::pi};
    return optimize::nelder_mead([&](const optimize::Vector& x) { return -hardy_objective(x, use_expectation); }, x0,
                                 {0.2, 1e-11, 1e-17, 40000});
}

} // namespace detail

/// Maximizes p = |<a1b1|Psi>|^2 over the local bases by Nelder-Mead from
/// seeded random starts; separability of every node but Psi holds by
/// construction. A second, independent maximization of <Psi|Sigma_u|Psi>
/// is reported for comparison.
inline HardyMaximum hardy_maximize(const HardyMaximizeOptions& opt = {}) {
    if (opt.restarts < 1) throw ValidationError("hardy_maximize needs at least one restart");
    const auto runs = parallel_map<optimize::Result>(static_cast<std::size_t>(opt.restarts),
                                                     [&](std::size_t i) { return detail::hardy_restart(opt.seed, i, false); });
    HardyMaximum out;
    std::size_t best = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        out.restart_values.push_back(-runs[i].value);
        if (runs[i].value < runs[best].value) best = i;
    }
    const auto& x = runs[best].x;
    out.params = {x[0], x[1], x[2], x[3]};
    const HardyGraph h = hardy_construct(out.params);
    out.p = hardy_probabilities(h).a1_and_b1;
    out.expectation = hardy_upper_expectation(h);

    const auto e = detail::hardy_restart(opt.seed, 0, true);
    out.expectation_argmax = {e.x[0], e.x[1], e.x[2], e.x[3]};
    out.p_at_expectation_argmax = detail::hardy_objective(e.x, false);
    return out;
}

} // namespace pentaks
