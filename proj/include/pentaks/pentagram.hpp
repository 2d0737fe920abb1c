#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>

#include "pentaks/spectral.hpp"

namespace pentaks {

namespace tol {
inline constexpr double pentagram_orthogonality = 1e-10;
inline constexpr double regular_overlap = 1e-8;
inline constexpr double coincident_projector = 1e-10;
} // namespace tol

/// Five unit vectors with <k|k+2> = 0 for every k (indices mod 5), together
/// with the pentagram operator, the sum of their projectors.
class Pentagram {
public:
    static constexpr int size = 5;

    /// Validates dimensions and the five orthogonality relations.
    static Pentagram from_vectors(const std::array<StateVector, 5>& vs,
                                  double tolerance = tol::pentagram_orthogonality) {
        const int dim = vs[0].dim();
        for (const StateVector& v : vs)
            if (v.dim() != dim) throw ValidationError("pentagram vectors must share one dimension");
        for (int k = 0; k < size; ++k) {
            const double o = std::abs(inner(vs[static_cast<std::size_t>(k)], vs[static_cast<std::size_t>((k + 2) % size)]));
            if (!(o <= tolerance)) {
                throw ValidationError("pentagram relation <" + std::to_string(k) + "|" + std::to_string((k + 2) % size) +
                                      "> = 0 violated (|overlap| = " + std::to_string(o) + ")");
            }
        }
        return Pentagram(vs);
    }

    [[nodiscard]] int dim() const noexcept { return vectors_[0].dim(); }
    [[nodiscard]] const StateVector& operator[](int k) const { return vectors_[static_cast<std::size_t>(((k % size) + size) % size)]; }
    [[nodiscard]] const std::array<StateVector, 5>& vectors() const noexcept { return vectors_; }
    [[nodiscard]] const HermitianOperator& op() const noexcept { return op_; }

    /// p_{k,k+1} = |<k|k+1>|^2.
    [[nodiscard]] double neighbour_overlap(int k) const { return transition_probability((*this)[k], (*this)[k + 1]); }

    /// A = sum_k p_{k,k+1}.
    [[nodiscard]] double overlap_sum() const {
        double a = 0.0;
        for (int k = 0; k < size; ++k) a += neighbour_overlap(k);
        return a;
    }

    /// <psi|Sigma|psi>.
    [[nodiscard]] double expectation(const StateVector& psi) const { return op_.expectation(psi); }

    /// All five moduli |<k|k+1>| equal within `tolerance`.
    [[nodiscard]] bool is_regular(double tolerance = tol::regular_overlap) const {
        double lo = 2.0, hi = -1.0;
        for (int k = 0; k < size; ++k) {
            const double m = std::abs(inner((*this)[k], (*this)[k + 1]));
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        return hi - lo <= tolerance;
    }

    /// Two projectors coincide: some non-orthogonal pair has |<j|k>| > 1 - tolerance.
    [[nodiscard]] bool is_degenerate(double tolerance = tol::coincident_projector) const {
        for (int k = 0; k < size; ++k)
            if (std::abs(inner((*this)[k], (*this)[k + 1])) > 1.0 - tolerance) return true;
        return false;
    }

    /// Image under a unitary (or real orthogonal) matrix.
    [[nodiscard]] Pentagram transformed(const Matrix& u) const {
        std::array<StateVector, 5> out = vectors_;
        for (std::size_t k = 0; k < 5; ++k) out[k] = transform(u, vectors_[k]);
        return from_vectors(out, 1e-9);
    }

private:
    explicit Pentagram(const std::array<StateVector, 5>& vs)
        : vectors_(vs), op_(HermitianOperator::projector_sum(std::span<const StateVector>(vs.data(), vs.size()))) {}

    std::array<StateVector, 5> vectors_;
    HermitianOperator op_;
};

/// Characteristic polynomial of a dimension-3 pentagram operator with overlap sum A:
/// x^3 - 5x^2 + (10 - A)x + 3A - 10.
inline MonicCubic characteristic_cubic(double overlap_sum) {
    return {-5.0, 10.0 - overlap_sum, 3.0 * overlap_sum - 10.0};
}

} // namespace pentaks
