#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"

using namespace pentaks;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<int> all_nodes(const OrthogonalityGraph& g) {
    std::vector<int> v(static_cast<std::size_t>(g.node_count()));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

/// Random graph with some bases planted as cliques.
OrthogonalityGraph random_graph(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> size(4, 14);
    const int n = size(rng);
    std::bernoulli_distribution coin(0.3);
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) edges.emplace_back(i, j);
    std::vector<std::vector<int>> bases;
    std::uniform_int_distribution<int> nb(0, 4), pick(0, n - 1);
    const int count = nb(rng);
    for (int b = 0; b < count; ++b) {
        std::set<int> s;
        while (s.size() < 3) s.insert(pick(rng));
        std::vector<int> basis(s.begin(), s.end());
        for (std::size_t x = 0; x < basis.size(); ++x)
            for (std::size_t y = x + 1; y < basis.size(); ++y) edges.emplace_back(basis[x], basis[y]);
        bases.push_back(basis);
    }
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return OrthogonalityGraph(labels, edges, bases);
}

int library_max(const OrthogonalityGraph& g, const std::vector<int>& w) {
    const ClassicalMaxResult r = classical_max(g, w);
    if (r.colorable) REQUIRE(is_valid_assignment(g, r.assignment));
    return r.colorable ? r.max_weight : -1;
}

} // namespace

TEST_CASE("graph construction checks") {
    CHECK_THROWS_AS(OrthogonalityGraph({"a", "b"}, {{0, 0}}, {}), ValidationError);
    CHECK_THROWS_AS(OrthogonalityGraph({"a", "b"}, {{0, 2}}, {}), ValidationError);
    CHECK_THROWS_AS(OrthogonalityGraph({"a", "b", "c"}, {{0, 1}}, {{0, 1, 2}}), ValidationError);
    const OrthogonalityGraph g({"a", "b", "c"}, {{1, 0}, {0, 1}, {2, 1}}, {});
    CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
}

TEST_CASE("classical maxima of small graphs") {
    CHECK(classical_max(pentagon_graph()).max_weight == 2);
    const OrthogonalityGraph triad({"0", "1", "2"}, {{0, 1}, {1, 2}, {0, 2}}, {{0, 1, 2}});
    CHECK(classical_max(triad).max_weight == 1);
}

TEST_CASE("backtracking agrees with exhaustive enumeration") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const OrthogonalityGraph g = random_graph(rng);
        const auto all = all_nodes(g);
        REQUIRE(library_max(g, all) == oracle::brute_force_max(g, all));
        std::vector<int> some;
        for (int v : all)
            if (v % 2 == 0) some.push_back(v);
        REQUIRE(library_max(g, some) == oracle::brute_force_max(g, some));
    }
    const KsSubgraph ks = realize_ks_subgraph(build_family(regular_params()));
    const std::vector<OrthogonalityGraph> named{pentagon_graph(), ks.graph, hardy_construct({0.7, 0.3, 0.9, 1.1}).graph, cabello18()};
    for (const auto& g : named) REQUIRE(library_max(g, all_nodes(g)) == oracle::brute_force_max(g, all_nodes(g)));
}

TEST_CASE("the eight-ray subgraph forbids psi_u and psi_d both true") {
    const KsSubgraph ks = realize_ks_subgraph(build_family(regular_params()));
    CHECK(classical_max(ks.graph, {KsSubgraph::psi_u, KsSubgraph::psi_d}).max_weight == 1);
}

TEST_CASE("18-vector set") {
    const OrthogonalityGraph g = cabello18();
    CHECK(g.node_count() == 18);
    CHECK(g.dim() == 4);
    CHECK(g.bases().size() == 9);
    std::vector<int> membership(18, 0);
    for (const auto& b : g.bases()) {
        CHECK(b.size() == 4);
        for (int v : b) ++membership[static_cast<std::size_t>(v)];
        for (int x : b)
            for (int y : b)
                if (x != y) CHECK(std::abs(inner(g.vector(x), g.vector(y))) < 1e-12);
    }
    for (int m : membership) CHECK(m == 2);
    CHECK(validate(g).ok());
    const auto r = classical_max(g);
    CHECK_FALSE(r.colorable);
    CHECK(oracle::brute_force_max(g, all_nodes(g)) == -1);
}

TEST_CASE("induced pentagons") {
    CHECK(induced_pentagons(pentagon_graph()).size() == 1);
    std::vector<Edge> k5;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) k5.emplace_back(i, j);
    CHECK(induced_pentagons(OrthogonalityGraph({"0", "1", "2", "3", "4"}, k5, {})).empty());

    // Exhaustive check over all 5-subsets of the 18-vector graph.
    const OrthogonalityGraph g = cabello18();
    std::size_t expected = 0;
    std::vector<int> idx(5);
    for (idx[0] = 0; idx[0] < 18; ++idx[0])
        for (idx[1] = idx[0] + 1; idx[1] < 18; ++idx[1])
            for (idx[2] = idx[1] + 1; idx[2] < 18; ++idx[2])
                for (idx[3] = idx[2] + 1; idx[3] < 18; ++idx[3])
                    for (idx[4] = idx[3] + 1; idx[4] < 18; ++idx[4]) {
                        int edges = 0;
                        bool two_regular = true;
                        for (int a : idx) {
                            int d = 0;
                            for (int b : idx) d += (a != b && g.adjacent(a, b)) ? 1 : 0;
                            two_regular = two_regular && d == 2;
                            edges += d;
                        }
                        // A 2-regular graph on 5 vertices is a 5-cycle.
                        if (two_regular && edges == 10) ++expected;
                    }
    const auto found = induced_pentagons(g);
    CHECK(found.size() == expected);
    CHECK(std::is_sorted(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.nodes < b.nodes; }));
    for (const auto& p : found) {
        const Pentagram pg = pentagram_from_cycle(g, p);
        for (int k = 0; k < 5; ++k) REQUIRE(std::abs(inner(pg[k], pg[k + 2])) < 1e-12);
    }
}

TEST_CASE("completion of the eight-ray subgraph") {
    const Pentagram upper = Pentagram::from_vectors({StateVector::normalized({1.0, 1.0, 1.0}), StateVector::basis(3, 1),
                                                     StateVector::normalized({0.0, 1.0, -1.0}),
                                                     StateVector::normalized({1.0, 0.0, -1.0}), StateVector::basis(3, 0)});
    const KsSubgraph ks = realize_ks_subgraph(upper);
    const StateVector expect = StateVector::normalized({1.0, 1.0, -1.0});
    CHECK_THAT(transition_probability(ks.vec(KsSubgraph::psi_d), expect), WithinAbs(1, 1e-12));
    CHECK(validate(ks.graph).ok());
    CHECK_THROWS_AS(realize_ks_subgraph(build_family({0, 0.4, 0, 0})), DegeneracyError);

    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        const Pentagram p = Pentagram::from_vectors(oracle::random_pentagram3(rng), 1e-12);
        const KsSubgraph g = realize_ks_subgraph(p);
        REQUIRE(validate(g.graph).ok());
        double e = 0, f = 0;
        for (int n : {KsSubgraph::e1, KsSubgraph::e2, KsSubgraph::e3}) e += transition_probability(g.vec(KsSubgraph::psi_d), g.vec(n));
        for (int n : {KsSubgraph::f1, KsSubgraph::f2, KsSubgraph::f3}) f += transition_probability(g.vec(KsSubgraph::psi_d), g.vec(n));
        REQUIRE_THAT(e, WithinAbs(1, 1e-10));
        REQUIRE_THAT(f, WithinAbs(1, 1e-10));
    }
}

TEST_CASE("validation reports non-orthogonal edges") {
    const OrthogonalityGraph bad({"x", "y"}, {{0, 1}}, {}, {StateVector::basis(3, 0), StateVector::normalized({1.0, 1.0, 0.0})});
    const ValidationReport r = validate(bad);
    CHECK_FALSE(r.ok());
    CHECK(r.problems.size() == 1);
}
