#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace pentaks;
using Catch::Matchers::WithinAbs;

namespace {

HardyParams random_hardy(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.01, std::numbers::pi / 2 - 0.01), phase(0, 2 * std::numbers::pi);
    return {angle(rng), phase(rng), angle(rng), phase(rng)};
}

std::array<Complex, 2> qubit(double t, double p) { return {std::cos(t), std::polar(std::sin(t), p)}; }

} // namespace

TEST_CASE("box-game realization gives one ninth") {
    const KsSubgraph g = realize_ks_subgraph(box_game_upper_pentagon());
    CHECK_THAT(ks_probability(g), WithinAbs(1.0 / 9, 1e-15));
    CHECK_THAT(ks_upper_expectation(g), WithinAbs(19.0 / 9, 1e-14));
    CHECK(verify_p_plus_2(g) < 1e-14);
}

TEST_CASE("p + 2 identity on random realizations") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 1000; ++trial) {
        const KsSubgraph g = realize_ks_subgraph(Pentagram::from_vectors(oracle::random_pentagram3(rng), 1e-12));
        REQUIRE(verify_p_plus_2(g) < 1e-10);
        const auto res = ks_triad_residuals(g);
        REQUIRE(std::abs(res[0]) < 1e-10);
        REQUIRE(std::abs(res[1]) < 1e-10);
        REQUIRE(ks_probability(g) <= 1.0 / 9 + 1e-9);
    }
}

TEST_CASE("maximum over all upper pentagons") {
    const KsMaximum m = maximize_ks_probability();
    CHECK_THAT(m.p, WithinAbs(1.0 / 9, 1e-6));
    CHECK_THAT(m.expectation, WithinAbs(19.0 / 9, 1e-6));
    CHECK_THAT(m.p_at_expectation_argmax, WithinAbs(1.0 / 9, 1e-6));
    KsMaximizeOptions real;
    real.real_only = true;
    const KsMaximum r = maximize_ks_probability(real);
    CHECK_THAT(r.p, WithinAbs(1.0 / 9, 1e-6));
    CHECK(r.params.mu == 0.0);
    CHECK(r.params.nu == 0.0);
}

TEST_CASE("box game statistics") {
    const GameStats s = av_game(200000, 7);
    CHECK(s.runs == 200000);
    CHECK(s.rng_seed == 7);
    CHECK(s.wins_among_selected == s.selected);
    CHECK(s.selected <= s.runs);
    const double n = 200000, p = 1.0 / 9, sd = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(static_cast<double>(s.selected) - n * p) < 4 * sd);
    CHECK(av_game(200000, 7) == s);
    CHECK_FALSE(av_game(200000, 8) == s);
    CHECK_THROWS_AS(av_game(0, 1), ValidationError);
}

TEST_CASE("box game wins are structural for every seed and length") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const GameStats s = av_game(1 + seed * 997, seed);
        REQUIRE(s.wins_among_selected == s.selected);
    }
}

TEST_CASE("Hardy graph invariants hold across the feasible family") {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 1000; ++trial) {
        const HardyParams hp = random_hardy(rng);
        const HardyGraph h = hardy_construct(hp);
        REQUIRE(validate(h.graph).ok());
        for (int n = 0; n < HardyGraph::psi; ++n) REQUIRE(two_qubit_concurrence(h.vec(n)) < 1e-8);
        REQUIRE(two_qubit_concurrence(h.vec(HardyGraph::psi)) > 0);
        for (int n = 0; n < 9; ++n)
            if (n != HardyGraph::a1b1 && n != HardyGraph::a2b2) REQUIRE(std::abs(inner(h.vec(n), h.vec(HardyGraph::a2b2))) < 1e-12);

        // Probabilities recomputed from the local bases directly.
        const auto a1 = qubit(hp.theta_a, hp.phi_a), b1 = qubit(hp.theta_b, hp.phi_b);
        const std::array<Complex, 2> zero{1, 0}, one{0, 1};
        const StateVector& psi = h.vec(HardyGraph::psi);
        auto amp = [&](const std::array<Complex, 2>& u, const std::array<Complex, 2>& v) {
            Complex s = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) s += std::conj(u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)]) * psi[2 * i + j];
            return std::norm(s);
        };
        REQUIRE(amp(a1, one) < 1e-20);
        REQUIRE(amp(one, b1) < 1e-20);
        REQUIRE(amp(zero, zero) < 1e-20);
        const HardyProbabilities pr = hardy_probabilities(h);
        REQUIRE(pr.b2_zero_given_a1 < 1e-10);
        REQUIRE(pr.a2_zero_given_b1 < 1e-10);
        REQUIRE(pr.a2_and_b2 < 1e-10);
        REQUIRE_THAT(pr.a1_and_b1, WithinAbs(amp(a1, b1), 1e-14));
        REQUIRE(pr.a1_and_b1 <= oracle::inv_phi5() + 1e-9);
        REQUIRE_THAT(hardy_upper_expectation(h), WithinAbs(2 + pr.a1_and_b1, 1e-10));
    }
}

TEST_CASE("Hardy construction collapses when the upper vector is orthogonal to the outlier") {
    CHECK_THROWS_AS(hardy_construct({std::numbers::pi / 2, 0, 0.4, 0}), CollapseError);
    CHECK_THROWS_AS(hardy_construct({0.4, 0, std::numbers::pi / 2, 0}), CollapseError);
}

TEST_CASE("Hardy maximum and restart stability") {
    const HardyMaximum m = hardy_maximize();
    CHECK_THAT(m.p, WithinAbs(oracle::inv_phi5(), 1e-5));
    CHECK_THAT(m.expectation, WithinAbs(2 + oracle::inv_phi5(), 1e-5));
    CHECK_THAT(m.p_at_expectation_argmax, WithinAbs(oracle::inv_phi5(), 1e-5));
    REQUIRE(m.restart_values.size() == 10);
    const auto [lo, hi] = std::minmax_element(m.restart_values.begin(), m.restart_values.end());
    CHECK(*hi - *lo < 1e-5);
    const HardyGraph h = hardy_construct(m.params);
    for (int n = 0; n < HardyGraph::psi; ++n) CHECK(two_qubit_concurrence(h.vec(n)) < 1e-8);
}
