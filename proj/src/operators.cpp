#include "sbp/operators.hpp"

#include <cmath>
#include <random>
#include <string>

#include "sbp/error.hpp"
#include "sbp/stencil.hpp"

namespace sbp {
namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Dense rows of the left closure in unit spacing: rows 0..2p-1, columns 0..3p.
struct LeftClosure {
    Eigen::MatrixXd plus;
    Eigen::MatrixXd minus;
};

LeftClosure left_closure(const Eigen::MatrixXd& d, const std::vector<double>& mu, const InteriorStencil& fwd) {
    const int p = fwd.p;
    const int m = 2 * p;
    LeftClosure lc{Eigen::MatrixXd::Zero(m, 3 * p + 1), Eigen::MatrixXd::Zero(m, 3 * p + 1)};
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            lc.plus(i, j) = d(i, j);
            const double q = (i == 0 && j == 0) ? -1.0 : 0.0;
            lc.minus(i, j) = (q - mu[j] * d(j, i)) / mu[i];
        }
        for (int j = m; j <= 3 * p; ++j) {
            lc.plus(i, j) = fwd.at(j - i) / mu[i];
            lc.minus(i, j) = -fwd.at(i - j) / mu[i];
        }
    }
    return lc;
}

}  // namespace

Eigen::MatrixXd OperatorSet::Q() const {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(size(), size());
    q(0, 0) = -1.0;
    q(size() - 1, size() - 1) = 1.0;
    return q;
}

OperatorSet assemble(const Grid& grid, const BoundaryFamily& family, const Eigen::VectorXd& c) {
    const int p = family.p;
    if (grid.p() != p) {
        throw SbpError(ErrorCode::ShapeMismatch, "grid built for p = " + std::to_string(grid.p()) +
                                                     ", family for p = " + std::to_string(p));
    }
    if (grid.spec.boundary_spacings.size() != family.h_params.size()) {
        throw SbpError(ErrorCode::ShapeMismatch, "grid and family disagree on K");
    }
    for (std::size_t k = 0; k < family.h_params.size(); ++k) {
        if (std::fabs(grid.spec.boundary_spacings[k] - family.h_params[k]) > 1e-14 * family.h_params[k]) {
            throw SbpError(ErrorCode::ShapeMismatch, "grid and family disagree on h_" + std::to_string(k + 1));
        }
    }
    grid.spec.validate();

    const int n = grid.N();
    const int m = 2 * p;
    const double inv_h = 1.0 / grid.h;
    const InteriorStencil fwd = interior_forward_coeffs(p);
    const InteriorStencil bwd = interior_backward_coeffs(p);

    OperatorSet set;
    set.grid = grid;
    set.scheme.p = p;
    set.scheme.h_params = family.h_params;
    set.scheme.mu = family.mu;
    set.scheme.c.assign(c.data(), c.data() + c.size());
    set.dl_plus = family.dplus_block(c);

    const LeftClosure lc = left_closure(set.dl_plus, family.mu, fwd);

    set.H = Eigen::VectorXd::Constant(n + 1, grid.h);
    for (int i = 0; i < m; ++i) {
        set.H[i] = family.mu[i] * grid.h;
        set.H[n - i] = family.mu[i] * grid.h;
    }

    Triplets tp, tm;
    auto push = [](Triplets& t, int r, int col, double v) {
        if (v != 0.0) t.emplace_back(r, col, v);
    };
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j <= 3 * p; ++j) {
            push(tp, i, j, lc.plus(i, j) * inv_h);
            push(tm, i, j, lc.minus(i, j) * inv_h);
            // reverse-and-negate: P D+ P = -D-
            push(tp, n - i, n - j, -lc.minus(i, j) * inv_h);
            push(tm, n - i, n - j, -lc.plus(i, j) * inv_h);
        }
    }
    for (int r = m; r <= n - m; ++r) {
        for (std::size_t k = 0; k < fwd.offsets.size(); ++k) push(tp, r, r + fwd.offsets[k], fwd.coeffs[k] * inv_h);
        for (std::size_t k = 0; k < bwd.offsets.size(); ++k) push(tm, r, r + bwd.offsets[k], bwd.coeffs[k] * inv_h);
    }
    set.Dplus.resize(n + 1, n + 1);
    set.Dminus.resize(n + 1, n + 1);
    set.Dplus.setFromTriplets(tp.begin(), tp.end());
    set.Dminus.setFromTriplets(tm.begin(), tm.end());
    return set;
}

OperatorSet assemble_scheme(const SchemeParams& scheme, int N, GridMode mode, Precision precision) {
    const BoundaryFamily family = boundary_family(scheme.p, scheme.h_params, precision);
    GridSpec spec{scheme.p, N, scheme.h_params};
    const Grid grid = build_grid(spec, mode);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(family.dimension());
    if (!scheme.c.empty()) {
        if (static_cast<int>(scheme.c.size()) != family.dimension()) {
            throw SbpError(ErrorCode::ShapeMismatch, "scheme carries " + std::to_string(scheme.c.size()) +
                                                         " free parameters, family needs " +
                                                         std::to_string(family.dimension()));
        }
        c = Eigen::Map<const Eigen::VectorXd>(scheme.c.data(), scheme.c.size());
    }
    return assemble(grid, family, c);
}

SbpCheck verify_sbp(const OperatorSet& set, std::uint64_t seed, int trials) {
    const Eigen::MatrixXd dp(set.Dplus);
    const Eigen::MatrixXd dm(set.Dminus);
    const Eigen::MatrixXd h = set.H.asDiagonal();
    const Eigen::MatrixXd r = dp.transpose() * h + h * dm - set.Q();

    SbpCheck check;
    check.matrix_residual = r.cwiseAbs().maxCoeff();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int n = set.size();
    for (int t = 0; t < trials; ++t) {
        Eigen::VectorXd u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u[i] = dist(rng);
            v[i] = dist(rng);
        }
        const Eigen::VectorXd dv = set.Dplus * v;
        const Eigen::VectorXd du = set.Dminus * u;
        const double lhs = u.dot(set.H.cwiseProduct(dv)) + du.dot(set.H.cwiseProduct(v));
        const double rhs = u[n - 1] * v[n - 1] - u[0] * v[0];
        check.bilinear_residual = std::max(check.bilinear_residual, std::fabs(lhs - rhs));
    }
    return check;
}

double verify_boundary_order(const OperatorSet& set, int order) {
    const int n = set.grid.N();
    const int m = 2 * set.p();
    const double h = set.grid.h;
    const auto& x = set.grid.nodes;
    double worst = 0.0;

    auto check_rows = [&](const SparseRowMatrix& d, int first, int last, double origin) {
        for (int e = 0; e <= order; ++e) {
            Eigen::VectorXd w(n + 1);
            for (int j = 0; j <= n; ++j) w[j] = std::pow((x[j] - origin) / h, e);
            const Eigen::VectorXd dw = (d * w) * h;
            for (int i = first; i <= last; ++i) {
                const double xi = (x[i] - origin) / h;
                const double exact = e == 0 ? 0.0 : e * std::pow(xi, e - 1);
                worst = std::max(worst, std::fabs(dw[i] - exact));
            }
        }
    };
    for (const SparseRowMatrix* d : {&set.Dplus, &set.Dminus}) {
        check_rows(*d, 0, m - 1, x[0]);
        check_rows(*d, n - m + 1, n, x[n]);
    }
    return worst;
}

}  // namespace sbp
