#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace pentaks;
using Catch::Matchers::WithinAbs;

namespace {

void check_spectrum(const Spectrum& s, std::array<double, 4> expect, double tol) {
    REQUIRE(s.dim() == 4);
    for (int i = 0; i < 4; ++i) CHECK_THAT(s[i], WithinAbs(expect[static_cast<std::size_t>(i)], tol));
    CHECK_THAT(s.sum(), WithinAbs(5, 1e-9));
}

void check_class(const Pentagram4Class& c) {
    for (int k = 0; k < 5; ++k) CHECK(std::abs(inner(c.pentagram[k], c.pentagram[k + 2])) < 1e-10);
    CHECK(c.pentagram.is_regular(1e-6));
    const auto ref = oracle::eigenvalues(c.pentagram.op());
    for (int i = 0; i < 4; ++i) CHECK_THAT(c.spectrum[i], WithinAbs(ref[static_cast<std::size_t>(i)], 1e-9));
    for (const StateVector& v : c.pentagram.vectors()) {
        if (c.kind == Pentagram4Kind::separable) {
            CHECK(concurrence(v) < 1e-8);
        } else {
            CHECK(concurrence(v) > 1 - 1e-8);
        }
    }
}

} // namespace

TEST_CASE("trace identities hold in four dimensions") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 1000; ++trial) {
        const Pentagram p = Pentagram::from_vectors(oracle::random_pentagram4(rng), 1e-12);
        REQUIRE_THAT(p.op().trace(), WithinAbs(5, 1e-8));
        REQUIRE_THAT(p.op().trace_power(2), WithinAbs(5 + 2 * p.overlap_sum(), 1e-8));
    }
}

TEST_CASE("separable regular pentagram") {
    const Pentagram4Class c = separable_regular();
    check_class(c);
    check_spectrum(c.spectrum, {2.148, 1.470, 1.240, 0.142}, 1e-3);
    CHECK(c.spectrum.max() < std::sqrt(5.0));
}

TEST_CASE("the two real regular pentagrams") {
    const auto cs = entangled_regular();
    REQUIRE(cs.size() == 2);
    for (const auto& c : cs) check_class(c);
    const double r = (5 - std::sqrt(5.0)) / 2;
    check_spectrum(cs[0].spectrum, {std::sqrt(5.0), r, r, 0}, 1e-3);
    check_spectrum(cs[1].spectrum, {1.809, 1.809, 0.691, 0.691}, 1e-3);
    CHECK(cs[1].spectrum.max() <= 2);
    // Closed forms of the second spectrum: (5 + sqrt 5)/4 and (5 - sqrt 5)/4, each twice.
    CHECK_THAT(cs[1].spectrum[0], WithinAbs((5 + std::sqrt(5.0)) / 4, 1e-6));
    CHECK_THAT(cs[1].spectrum[3], WithinAbs((5 - std::sqrt(5.0)) / 4, 1e-6));
}

TEST_CASE("regular searches are reproducible and report failure") {
    CHECK(separable_regular().restart == separable_regular().restart);
    RegularSearchOptions none;
    none.restarts = 0;
    CHECK_THROWS_AS(separable_regular(none), NotFoundError);
    CHECK_THROWS_AS(entangled_regular(none), NotFoundError);
}

TEST_CASE("pentagon spectra of the 18-vector set") {
    const auto rows = cabello_pentagon_spectra();
    REQUIRE_FALSE(rows.empty());
    bool matched = false;
    for (const auto& r : rows) {
        REQUIRE_THAT(r.spectrum.sum(), WithinAbs(5, 1e-9));
        bool m = true;
        const std::array<double, 4> target{2.171, 1.5, 1.235, 0.093};
        for (int i = 0; i < 4; ++i) m = m && std::abs(r.spectrum[i] - target[static_cast<std::size_t>(i)]) < 1e-3;
        matched = matched || m;
    }
    CHECK(matched);
    const std::string csv = pentagon_spectra_csv(cabello18(), rows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size() + 1));
    CHECK(csv.rfind("c0,c1,c2,c3,c4,lambda0,lambda1,lambda2,lambda3\n", 0) == 0);
}

TEST_CASE("Haar sampling moments") {
    const StateVector fixed = StateVector::basis(3, 1);
    const int n = 100000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        SplitMix64 rng = substream(99, static_cast<std::uint64_t>(i));
        const double t = transition_probability(fixed, haar_state(3, rng));
        sum += t;
        sum2 += t * t;
    }
    const double mean = sum / n, var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - 1.0 / 3) < 4 * std::sqrt(var / n));
}

TEST_CASE("conjecture scan") {
    const OrthogonalityGraph single = pentagram_graph(build_family(regular_params()));
    const ConjectureReport r = conjecture_scan(single, 2000, 5);
    CHECK(r.pentagon_count == 1);
    CHECK(r.min_max_expectation < 2);
    CHECK(r.refined_min <= r.min_max_expectation);
    // A single pentagram's minimum over states is its smallest eigenvalue.
    CHECK_THAT(r.refined_min, WithinAbs((5 - std::sqrt(5.0)) / 2, 1e-6));
    CHECK(r.violating_fraction > 0);
    CHECK(r.violating_fraction < 1);

    const ConjectureReport again = conjecture_scan(single, 2000, 5);
    CHECK(again.min_max_expectation == r.min_max_expectation);
    CHECK(again.argmin_sample == r.argmin_sample);
    CHECK(again.violating_fraction == r.violating_fraction);

    CHECK_THROWS_AS(conjecture_scan(cabello18(), 0, 1), ValidationError);
    const OrthogonalityGraph no_pentagon({"a", "b", "c"}, {{0, 1}, {1, 2}, {0, 2}}, {},
                                         {StateVector::basis(3, 0), StateVector::basis(3, 1), StateVector::basis(3, 2)});
    CHECK_THROWS_AS(conjecture_scan(no_pentagon, 10, 1), NotApplicableError);
}
