#pragma once

// Orthogonality graphs: Kochen-Specker value assignments and their exact
// classical bounds, induced pentagon enumeration, the 3D completion of the
// Kochen-Specker subgraph, and the 18-ray set in dimension 4.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pentaks/cabello18_data.hpp"
#include "pentaks/pentagram.hpp"
#include "pentaks/spectral.hpp"

namespace pentaks {

namespace tol {
inline constexpr double graph_orthogonality = 1e-9;
} // namespace tol

using Edge = std::pair<int, int>;

/// Nodes, orthogonality edges and declared complete bases, optionally
/// realized by vectors. Immutable after construction.
class OrthogonalityGraph {
public:
    OrthogonalityGraph() = default;

    /// Checks index ranges and that every basis is a clique; normalizes edges to (i < j), sorted, unique.
    OrthogonalityGraph(std::vector<std::string> labels, std::vector<Edge> edges, std::vector<std::vector<int>> bases,
                       std::vector<StateVector> realization = {})
        : labels_(std::move(labels)), bases_(std::move(bases)), realization_(std::move(realization)) {
        const int n = node_count();
        adjacency_.assign(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
        for (auto [i, j] : edges) {
            if (i < 0 || j < 0 || i >= n || j >= n) throw ValidationError("edge references a node out of range");
            if (i == j) throw ValidationError("self-loop on node " + labels_[static_cast<std::size_t>(i)]);
            if (i > j) std::swap(i, j);
            if (!adjacency_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) edges_.emplace_back(i, j);
            adjacency_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
            adjacency_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 1;
        }
        std::sort(edges_.begin(), edges_.end());
        for (const auto& basis : bases_) {
            for (int v : basis)
                if (v < 0 || v >= n) throw ValidationError("basis references a node out of range");
            for (std::size_t x = 0; x < basis.size(); ++x)
                for (std::size_t y = x + 1; y < basis.size(); ++y)
                    if (!adjacent(basis[x], basis[y])) {
                        throw ValidationError("basis is not a clique: nodes " + labels_[static_cast<std::size_t>(basis[x])] +
                                              " and " + labels_[static_cast<std::size_t>(basis[y])] + " are not joined");
                    }
        }
        if (!realization_.empty()) {
            if (static_cast<int>(realization_.size()) != n) throw ValidationError("realization must cover every node");
            for (const StateVector& v : realization_)
                if (v.dim() != realization_.front().dim()) throw ValidationError("realization mixes dimensions");
        }
    }

    [[nodiscard]] int node_count() const noexcept { return static_cast<int>(labels_.size()); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<std::vector<int>>& bases() const noexcept { return bases_; }
    [[nodiscard]] bool adjacent(int i, int j) const {
        return adjacency_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0;
    }
    [[nodiscard]] int degree(int i) const {
        int d = 0;
        for (char c : adjacency_[static_cast<std::size_t>(i)]) d += c;
        return d;
    }

    [[nodiscard]] bool realized() const noexcept { return !realization_.empty(); }
    [[nodiscard]] int dim() const { return realized() ? realization_.front().dim() : 0; }
    [[nodiscard]] const StateVector& vector(int i) const { return realization_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] const std::vector<StateVector>& realization() const noexcept { return realization_; }

    [[nodiscard]] int index_of(const std::string& label) const {
        const auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw ValidationError("unknown node label '" + label + "'");
        return static_cast<int>(it - labels_.begin());
    }

private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> bases_;
    std::vector<StateVector> realization_;
    std::vector<std::vector<char>> adjacency_;
};

/// Problems found by validate(); empty when the graph is consistent.
struct ValidationReport {
    std::vector<std::string> problems;
    [[nodiscard]] bool ok() const noexcept { return problems.empty(); }
};

/// Checks the realization: every edge orthogonal within 1e-9 and every
/// basis of size equal to the dimension.
inline ValidationReport validate(const OrthogonalityGraph& g) {
    ValidationReport r;
    if (!g.realized()) return r;
    for (const auto& basis : g.bases())
        if (static_cast<int>(basis.size()) != g.dim()) {
            r.problems.push_back("basis of size " + std::to_string(basis.size()) + " in dimension " + std::to_string(g.dim()));
        }
    for (const auto& [i, j] : g.edges()) {
        const double o = std::abs(inner(g.vector(i), g.vector(j)));
        if (!(o < tol::graph_orthogonality)) {
            r.problems.push_back("edge " + g.labels()[static_cast<std::size_t>(i)] + "-" + g.labels()[static_cast<std::size_t>(j)] +
                                 " is not orthogonal (|overlap| = " + std::to_string(o) + ")");
        }
    }
    return r;
}

/// 0/1 value per node. Valid when no edge has both ends at 1 and every
/// declared basis sums to exactly 1.
using KsAssignment = std::vector<int>;

inline bool is_valid_assignment(const OrthogonalityGraph& g, const KsAssignment& values) {
    if (static_cast<int>(values.size()) != g.node_count()) return false;
    for (int v : values)
        if (v != 0 && v != 1) return false;
    for (const auto& [i, j] : g.edges())
        if (values[static_cast<std::size_t>(i)] == 1 && values[static_cast<std::size_t>(j)] == 1) return false;
    for (const auto& basis : g.bases()) {
        int s = 0;
        for (int v : basis) s += values[static_cast<std::size_t>(v)];
        if (s != 1) return false;
    }
    return true;
}

struct ClassicalMaxResult {
    bool colorable = false;
    /// Maximum number of 1-valued nodes in the weight set; 0 when not colorable.
    int max_weight = 0;
    KsAssignment assignment;
    std::uint64_t search_nodes = 0;
};

namespace detail {

class KsSearch {
public:
    KsSearch(const OrthogonalityGraph& g, const std::vector<int>& weight_set)
        : g_(g), n_(g.node_count()), value_(static_cast<std::size_t>(n_), -1), weight_(static_cast<std::size_t>(n_), 0),
          member_of_(static_cast<std::size_t>(n_)) {
        for (int v : weight_set) {
            if (v < 0 || v >= n_) throw ValidationError("weight set references a node out of range");
            weight_[static_cast<std::size_t>(v)] = 1;
        }
        for (std::size_t b = 0; b < g.bases().size(); ++b)
            for (int v : g.bases()[b]) member_of_[static_cast<std::size_t>(v)].push_back(static_cast<int>(b));
        for (int v = 0; v < n_; ++v) weighted_total_ += weight_[static_cast<std::size_t>(v)];
    }

    ClassicalMaxResult run() {
        result_ = {};
        if (propagate_all()) search();
        return result_;
    }

private:
    bool assign(int v, int val) {
        auto& cur = value_[static_cast<std::size_t>(v)];
        if (cur != -1) return cur == val;
        cur = val;
        trail_.push_back(v);
        if (val == 1) {
            for (int u = 0; u < n_; ++u)
                if (g_.adjacent(v, u) && !assign(u, 0)) return false;
        }
        for (int b : member_of_[static_cast<std::size_t>(v)])
            if (!check_basis(b)) return false;
        return true;
    }

    /// Forces the last free member of a basis whose other members are all 0.
    bool check_basis(int b) {
        int ones = 0, free_node = -1, free_count = 0;
        for (int u : g_.bases()[static_cast<std::size_t>(b)]) {
            const int val = value_[static_cast<std::size_t>(u)];
            if (val == 1) ++ones;
            else if (val == -1) {
                ++free_count;
                free_node = u;
            }
        }
        if (ones > 1) return false;
        if (ones == 1) {
            for (int u : g_.bases()[static_cast<std::size_t>(b)])
                if (value_[static_cast<std::size_t>(u)] == -1 && !assign(u, 0)) return false;
            return true;
        }
        if (free_count == 0) return false;
        if (free_count == 1) return assign(free_node, 1);
        return true;
    }

    bool propagate_all() {
        for (std::size_t b = 0; b < g_.bases().size(); ++b)
            if (!check_basis(static_cast<int>(b))) return false;
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            value_[static_cast<std::size_t>(trail_.back())] = -1;
            trail_.pop_back();
        }
    }

    /// Most constrained free node: member of the basis with fewest free
    /// slots, ties broken by degree, then by index.
    int pick() const {
        int best = -1, best_slack = 1 << 30, best_degree = -1;
        for (int v = 0; v < n_; ++v) {
            if (value_[static_cast<std::size_t>(v)] != -1) continue;
            int slack = 1 << 29;
            for (int b : member_of_[static_cast<std::size_t>(v)]) {
                int free_count = 0;
                for (int u : g_.bases()[static_cast<std::size_t>(b)]) free_count += value_[static_cast<std::size_t>(u)] == -1;
                slack = std::min(slack, free_count);
            }
            const int d = g_.degree(v);
            if (slack < best_slack || (slack == best_slack && d > best_degree)) {
                best = v;
                best_slack = slack;
                best_degree = d;
            }
        }
        return best;
    }

    void search() {
        ++result_.search_nodes;
        int ones = 0, open = 0;
        for (int v = 0; v < n_; ++v) {
            if (!weight_[static_cast<std::size_t>(v)]) continue;
            ones += value_[static_cast<std::size_t>(v)] == 1;
            open += value_[static_cast<std::size_t>(v)] == -1;
        }
        if (result_.colorable && (ones + open <= result_.max_weight || result_.max_weight == weighted_total_)) return;

        const int v = pick();
        if (v < 0) {
            result_.colorable = true;
            result_.max_weight = ones;
            result_.assignment = value_;
            return;
        }
        for (int val : {1, 0}) {
            const std::size_t mark = trail_.size();
            if (assign(v, val)) search();
            undo(mark);
        }
    }

    const OrthogonalityGraph& g_;
    int n_;
    std::vector<int> value_;
    std::vector<int> weight_;
    std::vector<std::vector<int>> member_of_;
    std::vector<int> trail_;
    int weighted_total_ = 0;
    ClassicalMaxResult result_;
};

} // namespace detail

/// Exact maximum, over all valid KS assignments, of the number of 1-valued
/// nodes in `weight_set`. Reports colorable = false when no valid
/// assignment exists at all.
inline ClassicalMaxResult classical_max(const OrthogonalityGraph& g, const std::vector<int>& weight_set) {
    return detail::KsSearch(g, weight_set).run();
}

/// classical_max with every node weighted.
inline ClassicalMaxResult classical_max(const OrthogonalityGraph& g) {
    std::vector<int> all(static_cast<std::size_t>(g.node_count()));
    for (int i = 0; i < g.node_count(); ++i) all[static_cast<std::size_t>(i)] = i;
    return classical_max(g, all);
}

/// A chordless 5-cycle of the graph.
struct InducedPentagon {
    /// Node indices, ascending.
    std::array<int, 5> nodes;
    /// Same nodes in cycle order, starting from the smallest index and
    /// continuing to its smaller neighbour.
    std::array<int, 5> cycle;
};

/// Every 5-node subset whose induced edge set is exactly a 5-cycle,
/// ordered lexicographically by `nodes`.
inline std::vector<InducedPentagon> induced_pentagons(const OrthogonalityGraph& g) {
    const int n = g.node_count();
    std::vector<InducedPentagon> out;
    // Cycles s-a-b-c-d-s with s the smallest node and a < d to fix orientation.
    for (int s = 0; s < n; ++s)
        for (int a = s + 1; a < n; ++a) {
            if (!g.adjacent(s, a)) continue;
            for (int b = s + 1; b < n; ++b) {
                if (b == a || !g.adjacent(a, b) || g.adjacent(s, b)) continue;
                for (int c = s + 1; c < n; ++c) {
                    if (c == a || c == b || !g.adjacent(b, c) || g.adjacent(s, c) || g.adjacent(a, c)) continue;
                    for (int d = a + 1; d < n; ++d) {
                        if (d == b || d == c || !g.adjacent(c, d) || !g.adjacent(d, s) || g.adjacent(a, d) ||
                            g.adjacent(b, d))
                            continue;
                        InducedPentagon p{{s, a, b, c, d}, {s, a, b, c, d}};
                        std::sort(p.nodes.begin(), p.nodes.end());
                        out.push_back(p);
                    }
                }
            }
        }
    std::sort(out.begin(), out.end(), [](const InducedPentagon& x, const InducedPentagon& y) { return x.nodes < y.nodes; });
    return out;
}

/// Pentagram realized by an induced pentagon of a realized graph. Cycle
/// order c0..c4 (consecutive nodes orthogonal) becomes pentagram order
/// |0>=c0, |2>=c1, |4>=c2, |1>=c3, |3>=c4.
inline Pentagram pentagram_from_cycle(const OrthogonalityGraph& g, const InducedPentagon& p) {
    if (!g.realized()) throw NotApplicableError("graph has no realization");
    const auto& c = p.cycle;
    return Pentagram::from_vectors({g.vector(c[0]), g.vector(c[3]), g.vector(c[1]), g.vector(c[4]), g.vector(c[2])},
                                   tol::graph_orthogonality);
}

/// The eight-ray Kochen-Specker subgraph in dimension 3.
///
/// Upper pentagon (cycle order) psi_u - e2 - e1 - f1 - f2, lower pentagon
/// psi_d - e3 - e1 - f1 - f3, sharing the edge e1 - f1. Triads (e1, e2, e3)
/// and (f1, f2, f3) are declared bases.
struct KsSubgraph {
    OrthogonalityGraph graph;

    static constexpr int psi_u = 0, f1 = 1, e2 = 2, f2 = 3, e1 = 4, e3 = 5, f3 = 6, psi_d = 7;

    [[nodiscard]] const StateVector& vec(int node) const { return graph.vector(node); }
    /// Upper pentagram, in the order it was supplied.
    [[nodiscard]] Pentagram upper() const {
        return Pentagram::from_vectors({vec(psi_u), vec(f1), vec(e2), vec(f2), vec(e1)}, tol::graph_orthogonality);
    }
};

/// Completes the Kochen-Specker subgraph from its upper pentagon.
///
/// The upper pentagram's vectors are read as psi_u = |0>, f1 = |1>,
/// e2 = |2>, f2 = |3>, e1 = |4>; then e3 = e1 x e2, f3 = f1 x f2 and
/// psi_d = e3 x f3 (orthogonal completions).
inline KsSubgraph realize_ks_subgraph(const Pentagram& upper) {
    if (upper.dim() != 3) throw ValidationError("the Kochen-Specker subgraph is realized in dimension 3");
    if (upper.is_degenerate()) throw DegeneracyError("upper pentagon is degenerate; the completion is undefined");
    const StateVector& psi_u = upper[0];
    const StateVector& f1 = upper[1];
    const StateVector& e2 = upper[2];
    const StateVector& f2 = upper[3];
    const StateVector& e1 = upper[4];
    const StateVector e3 = orthogonal_complement_3d(e1, e2);
    const StateVector f3 = orthogonal_complement_3d(f1, f2);
    const StateVector psi_d = orthogonal_complement_3d(e3, f3);

    using K = KsSubgraph;
    std::vector<Edge> edges{{K::psi_u, K::e2}, {K::e2, K::e1}, {K::e1, K::f1}, {K::f1, K::f2}, {K::f2, K::psi_u},
                            {K::e1, K::e3},    {K::e2, K::e3}, {K::f1, K::f3}, {K::f2, K::f3}, {K::psi_d, K::e3},
                            {K::psi_d, K::f3}};
    return {OrthogonalityGraph({"psi_u", "f1", "e2", "f2", "e1", "e3", "f3", "psi_d"}, std::move(edges),
                               {{K::e1, K::e2, K::e3}, {K::f1, K::f2, K::f3}}, {psi_u, f1, e2, f2, e1, e3, f3, psi_d})};
}

/// The 18 real rays in dimension 4 with their nine tetrads, loaded from the
/// embedded data file. Edges are all orthogonal pairs.
inline OrthogonalityGraph cabello18() {
    const auto doc = nlohmann::json::parse(data::cabello18_json);
    std::vector<std::vector<int>> raw;
    std::vector<std::vector<int>> bases;
    for (const auto& basis : doc.at("bases")) {
        std::vector<int> ids;
        for (const auto& v : basis) {
            const auto entries = v.get<std::vector<int>>();
            auto it = std::find(raw.begin(), raw.end(), entries);
            if (it == raw.end()) {
                raw.push_back(entries);
                it = raw.end() - 1;
            }
            ids.push_back(static_cast<int>(it - raw.begin()));
        }
        bases.push_back(std::move(ids));
    }
    std::vector<std::string> labels;
    std::vector<StateVector> vecs;
    for (const auto& r : raw) {
        std::string label = "(";
        std::array<Complex, 4> a{};
        for (std::size_t i = 0; i < r.size(); ++i) {
            a[i] = r[i];
            label += (i ? "," : "") + std::to_string(r[i]);
        }
        labels.push_back(label + ")");
        vecs.push_back(StateVector::normalized(std::span<const Complex>(a)));
    }
    std::vector<Edge> edges;
    for (int i = 0; i < static_cast<int>(vecs.size()); ++i)
        for (int j = i + 1; j < static_cast<int>(vecs.size()); ++j)
            if (std::abs(inner(vecs[static_cast<std::size_t>(i)], vecs[static_cast<std::size_t>(j)])) < 1e-12) edges.emplace_back(i, j);
    return OrthogonalityGraph(std::move(labels), std::move(edges), std::move(bases), std::move(vecs));
}

/// Pentagon graph: five unrealized nodes in a 5-cycle, no bases.
inline OrthogonalityGraph pentagon_graph() {
    return OrthogonalityGraph({"0", "1", "2", "3", "4"}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}, {});
}

/// Orthogonality graph of a realized pentagram: node k joined to k+2.
inline OrthogonalityGraph pentagram_graph(const Pentagram& p) {
    std::vector<StateVector> vs(p.vectors().begin(), p.vectors().end());
    return OrthogonalityGraph({"0", "1", "2", "3", "4"}, {{0, 2}, {2, 4}, {4, 1}, {1, 3}, {3, 0}}, {}, std::move(vs));
}

} // namespace pentaks
