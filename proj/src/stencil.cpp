#include "sbp/stencil.hpp"

#include <cmath>
#include <string>

#include "sbp/error.hpp"

namespace sbp {
namespace {

// Solve sum_j c_j o_j^n = [n == 1], n = 0..m-1, exactly.
std::vector<Rational> solve_moments(const std::vector<int>& offsets) {
    const int m = static_cast<int>(offsets.size());
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1));
    for (int n = 0; n < m; ++n) {
        for (int j = 0; j < m; ++j) {
            Rational v = 1;
            for (int e = 0; e < n; ++e) v *= offsets[j];
            a[n][j] = v;
        }
        a[n][m] = (n == 1) ? 1 : 0;
    }
    for (int col = 0; col < m; ++col) {
        int piv = col;
        while (piv < m && a[piv][col] == 0) ++piv;
        if (piv == m) throw SbpError(ErrorCode::PivotBreakdown, "singular moment system");
        std::swap(a[piv], a[col]);
        const Rational inv = 1 / a[col][col];
        for (int j = col; j <= m; ++j) a[col][j] *= inv;
        for (int r = 0; r < m; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col];
            for (int j = col; j <= m; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::vector<Rational> c(m);
    for (int j = 0; j < m; ++j) c[j] = a[j][m];
    return c;
}

}  // namespace

double InteriorStencil::at(int offset) const {
    if (offset < first_offset() || offset > last_offset()) return 0.0;
    return coeffs[offset - first_offset()];
}

const Rational& InteriorStencil::exact_at(int offset) const {
    static const Rational zero = 0;
    if (offset < first_offset() || offset > last_offset()) return zero;
    return exact[offset - first_offset()];
}

InteriorStencil interior_forward_coeffs(int p) {
    if (p < 1) throw SbpError(ErrorCode::InvalidArgument, "p must be >= 1, got " + std::to_string(p));
    InteriorStencil s;
    s.p = p;
    s.direction = StencilDirection::Forward;
    for (int j = -p + 1; j <= p + 1; ++j) s.offsets.push_back(j);
    s.exact = solve_moments(s.offsets);
    for (const auto& r : s.exact) s.coeffs.push_back(static_cast<double>(r));
    return s;
}

InteriorStencil interior_backward_coeffs(int p) {
    const InteriorStencil fwd = interior_forward_coeffs(p);
    InteriorStencil s;
    s.p = p;
    s.direction = StencilDirection::Backward;
    for (int j = -p - 1; j <= p - 1; ++j) {
        s.offsets.push_back(j);
        s.exact.push_back(-fwd.exact_at(-j));
        s.coeffs.push_back(static_cast<double>(s.exact.back()));
    }
    return s;
}

double verify_order(const InteriorStencil& stencil, int order) {
    double worst = 0.0;
    for (int n = 0; n <= order; ++n) {
        long double sum = 0.0L;
        for (std::size_t k = 0; k < stencil.offsets.size(); ++k) {
            sum += static_cast<long double>(stencil.coeffs[k]) * std::pow(static_cast<long double>(stencil.offsets[k]), n);
        }
        const long double target = (n == 1) ? 1.0L : 0.0L;
        worst = std::max(worst, static_cast<double>(std::fabs(sum - target)));
    }
    return worst;
}

}  // namespace sbp
