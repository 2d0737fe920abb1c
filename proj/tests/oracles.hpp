#pragma once

// Reference computations that share no code with the library: Eigen for
// spectra, exhaustive enumeration for colourings, explicit cross products
// for random pentagrams, and closed forms written out from scratch.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pentaks/pentaks.hpp"

namespace oracle {

using C = std::complex<double>;
using V3 = std::array<C, 3>;
using V4 = std::array<C, 4>;

inline double phi() { return (1.0 + std::sqrt(5.0)) / 2.0; }
inline double inv_phi5() { return 1.0 / std::pow(phi(), 5); }
inline double a_min() { return 2.0 - inv_phi5(); }

inline std::vector<double> eigenvalues(const pentaks::HermitianOperator& op) {
    const int n = op.dim();
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = op(r, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(out.rbegin(), out.rend());
    return out;
}

/// Sum of |v><v| over the given vectors, as a dense Eigen matrix.
template <typename Vec>
Eigen::MatrixXcd projector_sum(const std::vector<Vec>& vs) {
    const int n = static_cast<int>(vs.front().size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& v : vs) {
        double n2 = 0;
        for (const C& c : v) n2 += std::norm(c);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c) += v[static_cast<std::size_t>(r)] * std::conj(v[static_cast<std::size_t>(c)]) / n2;
    }
    return m;
}

inline std::vector<double> eigenvalues(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    std::sort(out.rbegin(), out.rend());
    return out;
}

template <std::size_t N>
std::array<C, N> random_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::array<C, N> v{};
    double n2 = 0;
    for (auto& c : v) {
        c = {g(rng), g(rng)};
        n2 += std::norm(c);
    }
    for (auto& c : v) c /= std::sqrt(n2);
    return v;
}

/// conj(u x v): orthogonal to both u and v under <a|b> = sum conj(a) b.
inline V3 conj_cross(const V3& u, const V3& v) {
    return {std::conj(u[1] * v[2] - u[2] * v[1]), std::conj(u[2] * v[0] - u[0] * v[2]), std::conj(u[0] * v[1] - u[1] * v[0])};
}

template <std::size_t N>
std::array<C, N> remove_component(std::array<C, N> v, const std::array<C, N>& u) {
    C d = 0;
    double n2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
        d += std::conj(u[i]) * v[i];
        n2 += std::norm(u[i]);
    }
    for (std::size_t i = 0; i < N; ++i) v[i] -= d / n2 * u[i];
    return v;
}

template <std::size_t N>
pentaks::StateVector to_state(const std::array<C, N>& v) {
    return pentaks::StateVector::normalized(std::span<const C>(v.data(), N));
}

/// Random 3D pentagram: |0>, |1> free, |2> orthogonal to |0>, |3> = 0 x 1, |4> = 1 x 2.
inline std::array<pentaks::StateVector, 5> random_pentagram3(std::mt19937_64& rng) {
    const V3 v0 = random_vector<3>(rng), v1 = random_vector<3>(rng);
    const V3 v2 = remove_component(random_vector<3>(rng), v0);
    const V3 v3 = conj_cross(v0, v1), v4 = conj_cross(v1, v2);
    return {to_state(v0), to_state(v1), to_state(v2), to_state(v3), to_state(v4)};
}

/// Random 4D pentagram by successive Gram-Schmidt projections.
inline std::array<pentaks::StateVector, 5> random_pentagram4(std::mt19937_64& rng) {
    const V4 v0 = random_vector<4>(rng), v1 = random_vector<4>(rng);
    const V4 v2 = remove_component(random_vector<4>(rng), v0);
    const V4 v3 = remove_component(remove_component(random_vector<4>(rng), v0), remove_component(v1, v0));
    const V4 v4 = remove_component(remove_component(random_vector<4>(rng), v1), remove_component(v2, v1));
    return {to_state(v0), to_state(v1), to_state(v2), to_state(v3), to_state(v4)};
}

/// The family vectors, typed in directly from their defining formulas.
inline std::array<V3, 5> family(double a, double b, double mu, double nu) {
    const double sa = std::sin(a), ca = std::cos(a), sb = std::sin(b), cb = std::cos(b);
    const double n = std::sqrt(1 - sa * sa * sb * sb);
    return {{{1, 0, 0},
             {ca, 0, std::polar(sa, mu)},
             {0, cb, std::polar(sb, nu)},
             {0, 1, 0},
             {std::polar(sa * cb / n, -mu), std::polar(ca * sb / n, -nu), -ca * cb / n}}};
}

inline double closed_form_A(double a, double b) {
    const double s2a = std::pow(std::sin(a), 2), s2b = std::pow(std::sin(b), 2);
    return 2 - s2a * s2b * (1 - s2a) * (1 - s2b) / (1 - s2a * s2b);
}

/// Largest number of 1-valued nodes of weight among all valid 0/1
/// assignments, or -1 when none exists. Plain 2^n enumeration.
inline int brute_force_max(const pentaks::OrthogonalityGraph& g, const std::vector<int>& weight) {
    const int n = g.node_count();
    int best = -1;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (const auto& [i, j] : g.edges())
            if ((mask >> i & 1u) && (mask >> j & 1u)) {
                ok = false;
                break;
            }
        for (const auto& b : g.bases()) {
            if (!ok) break;
            int s = 0;
            for (int v : b) s += static_cast<int>(mask >> v & 1u);
            ok = s == 1;
        }
        if (!ok) continue;
        int w = 0;
        for (int v : weight) w += static_cast<int>(mask >> v & 1u);
        best = std::max(best, w);
    }
    return best;
}

} // namespace oracle
