#pragma once

// JSON encodings shared by the library and the command-line tool.
//
//   state:    {"dim": n, "re": [...], "im": [...]}
//   operator: {"dim": n, "re": [[...], ...], "im": [[...], ...]}   (row-major)
//   graph:    {"nodes": [label, ...], "edges": [[i, j], ...],
//              "bases": [[i, ...], ...], "realization": {label: state}}

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pentaks/errors.hpp"
#include "pentaks/orthograph.hpp"
#include "pentaks/pentagram.hpp"
#include "pentaks/spectral.hpp"

namespace pentaks::json_io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const std::string& name, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
    const auto it = j.find(name);
    if (it == j.end()) throw ValidationError(where + "." + name + ": missing field");
    return *it;
}

inline double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ValidationError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(where + ": not finite");
    return v;
}

inline std::vector<double> numbers(const json& j, const std::string& where, std::size_t n) {
    if (!j.is_array()) throw ValidationError(where + ": expected an array");
    if (j.size() != n) throw ValidationError(where + ": expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline int integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ValidationError(where + ": expected an integer");
    return j.get<int>();
}

inline int dimension(const json& j, const std::string& where) {
    const int dim = integer(field(j, "dim", where), where + ".dim");
    if (dim < 1 || dim > max_dim) throw ValidationError(where + ".dim: must lie in 1.." + std::to_string(max_dim));
    return dim;
}

} // namespace detail

inline json to_json(const StateVector& v) {
    json re = json::array(), im = json::array();
    for (int i = 0; i < v.dim(); ++i) {
        re.push_back(v[i].real());
        im.push_back(v[i].imag());
    }
    return {{"dim", v.dim()}, {"re", re}, {"im", im}};
}

/// Reads a state; the amplitudes are normalized. `where` names the field in diagnostics.
inline StateVector state_from_json(const json& j, const std::string& where = "state") {
    const int dim = detail::dimension(j, where);
    const auto re = detail::numbers(detail::field(j, "re", where), where + ".re", static_cast<std::size_t>(dim));
    const auto im = detail::numbers(detail::field(j, "im", where), where + ".im", static_cast<std::size_t>(dim));
    std::array<Complex, max_dim> a{};
    for (std::size_t i = 0; i < static_cast<std::size_t>(dim); ++i) a[i] = {re[i], im[i]};
    try {
        return StateVector::normalized(std::span<const Complex>(a.data(), static_cast<std::size_t>(dim)));
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

inline json to_json(const Matrix& m) {
    json re = json::array(), im = json::array();
    for (int r = 0; r < m.dim(); ++r) {
        json rr = json::array(), ri = json::array();
        for (int c = 0; c < m.dim(); ++c) {
            rr.push_back(m(r, c).real());
            ri.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"dim", m.dim()}, {"re", re}, {"im", im}};
}

inline json to_json(const HermitianOperator& op) { return to_json(op.matrix()); }

inline HermitianOperator operator_from_json(const json& j, const std::string& where = "operator") {
    const int dim = detail::dimension(j, where);
    const json& re = detail::field(j, "re", where);
    const json& im = detail::field(j, "im", where);
    if (!re.is_array() || re.size() != static_cast<std::size_t>(dim)) throw ValidationError(where + ".re: expected " + std::to_string(dim) + " rows");
    if (!im.is_array() || im.size() != static_cast<std::size_t>(dim)) throw ValidationError(where + ".im: expected " + std::to_string(dim) + " rows");
    Matrix m(dim);
    for (int r = 0; r < dim; ++r) {
        const auto rr = detail::numbers(re[static_cast<std::size_t>(r)], where + ".re[" + std::to_string(r) + "]", static_cast<std::size_t>(dim));
        const auto ri = detail::numbers(im[static_cast<std::size_t>(r)], where + ".im[" + std::to_string(r) + "]", static_cast<std::size_t>(dim));
        for (int c = 0; c < dim; ++c) m(r, c) = {rr[static_cast<std::size_t>(c)], ri[static_cast<std::size_t>(c)]};
    }
    try {
        return HermitianOperator::from_matrix(m);
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

inline json to_json(const Spectrum& s) { return s.values; }

inline json to_json(const Pentagram& p) {
    json vs = json::array();
    for (const StateVector& v : p.vectors()) vs.push_back(to_json(v));
    return {{"dim", p.dim()}, {"vectors", vs}};
}

inline Pentagram pentagram_from_json(const json& j, const std::string& where = "pentagram") {
    const json& vs = detail::field(j, "vectors", where);
    if (!vs.is_array() || vs.size() != 5) throw ValidationError(where + ".vectors: expected 5 states");
    std::array<StateVector, 5> a{StateVector::basis(1, 0), StateVector::basis(1, 0), StateVector::basis(1, 0),
                                 StateVector::basis(1, 0), StateVector::basis(1, 0)};
    for (std::size_t k = 0; k < 5; ++k) a[k] = state_from_json(vs[k], where + ".vectors[" + std::to_string(k) + "]");
    try {
        return Pentagram::from_vectors(a);
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

inline json to_json(const OrthogonalityGraph& g) {
    json j{{"nodes", g.labels()}, {"edges", json::array()}, {"bases", g.bases()}};
    for (const auto& [a, b] : g.edges()) j["edges"].push_back({a, b});
    if (g.realized()) {
        json r = json::object();
        for (int i = 0; i < g.node_count(); ++i) r[g.labels()[static_cast<std::size_t>(i)]] = to_json(g.vector(i));
        j["realization"] = r;
    }
    return j;
}

inline OrthogonalityGraph graph_from_json(const json& j) {
    const json& nodes = detail::field(j, "nodes", "graph");
    if (!nodes.is_array()) throw ValidationError("graph.nodes: expected an array");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].is_string()) throw ValidationError("graph.nodes[" + std::to_string(i) + "]: expected a string");
        labels.push_back(nodes[i].get<std::string>());
    }
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t k = i + 1; k < labels.size(); ++k)
            if (labels[i] == labels[k]) throw ValidationError("graph.nodes: duplicate label '" + labels[i] + "'");

    const json& edges = detail::field(j, "edges", "graph");
    if (!edges.is_array()) throw ValidationError("graph.edges: expected an array");
    std::vector<Edge> es;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "graph.edges[" + std::to_string(i) + "]";
        if (!edges[i].is_array() || edges[i].size() != 2) throw ValidationError(where + ": expected a pair");
        es.emplace_back(detail::integer(edges[i][0], where + "[0]"), detail::integer(edges[i][1], where + "[1]"));
    }

    std::vector<std::vector<int>> bases;
    if (j.contains("bases")) {
        const json& bs = j.at("bases");
        if (!bs.is_array()) throw ValidationError("graph.bases: expected an array");
        for (std::size_t i = 0; i < bs.size(); ++i) {
            const std::string where = "graph.bases[" + std::to_string(i) + "]";
            if (!bs[i].is_array()) throw ValidationError(where + ": expected an array");
            std::vector<int> b;
            for (std::size_t k = 0; k < bs[i].size(); ++k) b.push_back(detail::integer(bs[i][k], where + "[" + std::to_string(k) + "]"));
            bases.push_back(std::move(b));
        }
    }

    std::vector<StateVector> realization;
    if (j.contains("realization") && !j.at("realization").is_null()) {
        const json& r = j.at("realization");
        if (!r.is_object()) throw ValidationError("graph.realization: expected an object");
        for (const std::string& label : labels) {
            if (!r.contains(label)) throw ValidationError("graph.realization." + label + ": missing state");
            realization.push_back(state_from_json(r.at(label), "graph.realization." + label));
        }
        if (r.size() != labels.size()) throw ValidationError("graph.realization: has entries for unknown nodes");
    }
    try {
        return OrthogonalityGraph(std::move(labels), std::move(es), std::move(bases), std::move(realization));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("graph: ") + e.what());
    }
}

inline json parse(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(source + ": malformed JSON (" + e.what() + ")");
    }
}

namespace detail {

inline std::string format_number(double v, bool pretty) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, pretty ? "%.6g" : "%.17g", v);
    std::string s = buf;
    if (s == "-0") s = "0";
    return s;
}

inline void write(std::ostream& os, const json& j, bool pretty, int depth) {
    const auto newline = [&](int d) {
        if (pretty) os << '\n' << std::string(static_cast<std::size_t>(2 * d), ' ');
    };
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ',';
            first = false;
            newline(depth + 1);
            os << json(it.key()).dump() << (pretty ? ": " : ":");
            write(os, it.value(), pretty, depth + 1);
        }
        newline(depth);
        os << '}';
        return;
    }
    case json::value_t::array: {
        os << '[';
        const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) os << (pretty && flat ? ", " : ",");
            if (!flat) newline(depth + 1);
            write(os, j[i], pretty, depth + 1);
        }
        if (!flat && !j.empty()) newline(depth);
        os << ']';
        return;
    }
    case json::value_t::number_float:
        os << format_number(j.get<double>(), pretty);
        return;
    default:
        os << j.dump();
    }
}

} // namespace detail

/// Serializes with every float at 17 significant digits, or 6 digits and
/// indentation when `pretty` is set.
inline std::string dump(const json& j, bool pretty = false) {
    std::ostringstream os;
    detail::write(os, j, pretty, 0);
    os << '\n';
    return os.str();
}

} // namespace pentaks::json_io
