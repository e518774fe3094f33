#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sbp {

using Rational = boost::multiprecision::cpp_rational;

enum class StencilDirection { Forward, Backward };

/// Interior first-derivative stencil of order 2p. Coefficients are for unit
/// spacing; divide by h.
struct InteriorStencil {
    int p = 1;
    StencilDirection direction = StencilDirection::Forward;
    std::vector<int> offsets;
    std::vector<Rational> exact;
    std::vector<double> coeffs;

    /// Coefficient at `offset`, zero outside the stencil.
    double at(int offset) const;
    const Rational& exact_at(int offset) const;
    int first_offset() const { return offsets.front(); }
    int last_offset() const { return offsets.back(); }
};

/// Forward stencil on offsets -p+1..p+1, exact for x^0..x^{2p}.
InteriorStencil interior_forward_coeffs(int p);

/// Backward stencil on offsets -p-1..p-1; mirror of the forward one.
InteriorStencil interior_backward_coeffs(int p);

/// max_n |sum_j c_j j^n - n [n == 1]| for n = 0..order on a uniform grid.
double verify_order(const InteriorStencil& stencil, int order);

}  // namespace sbp
