#include "sbp/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sbp/error.hpp"
#include "sbp/grid.hpp"

namespace sbp {
namespace {

using boost::multiprecision::abs;
using std::abs;

template <class T>
struct Tolerances;

template <>
struct Tolerances<double> {
    static constexpr double pivot = 1e-10;
    static constexpr double rank = 1e-9;
    static constexpr double residual = 1e-9;
    static constexpr double structural = 1e-6;
};

template <>
struct Tolerances<long double> {
    static constexpr long double pivot = 1e-13L;
    static constexpr long double rank = 1e-12L;
    static constexpr long double residual = 1e-11L;
    static constexpr long double structural = 1e-9L;
};

template <>
struct Tolerances<HighReal> {
    static HighReal pivot() { return HighReal("1e-35"); }
    static HighReal rank() { return HighReal("1e-30"); }
    static HighReal residual() { return HighReal("1e-30"); }
    static HighReal structural() { return HighReal("1e-30"); }
};

template <class T>
T pivot_tol() {
    if constexpr (std::is_same_v<T, HighReal>) return Tolerances<T>::pivot();
    else return Tolerances<T>::pivot;
}
template <class T>
T rank_tol() {
    if constexpr (std::is_same_v<T, HighReal>) return Tolerances<T>::rank();
    else return Tolerances<T>::rank;
}
template <class T>
T residual_tol() {
    if constexpr (std::is_same_v<T, HighReal>) return Tolerances<T>::residual();
    else return Tolerances<T>::residual;
}

template <class T>
T structural_tol() {
    if constexpr (std::is_same_v<T, HighReal>) return Tolerances<T>::structural();
    else return Tolerances<T>::structural;
}

template <class T>
T from_rational(const Rational& r) {
    if constexpr (std::is_same_v<T, HighReal>) {
        return HighReal(boost::multiprecision::numerator(r)) / HighReal(boost::multiprecision::denominator(r));
    } else {
        return r.template convert_to<T>();
    }
}

template <class T>
T ipow(const T& x, int n) {
    T r(1);
    for (int k = 0; k < n; ++k) r *= x;
    return r;
}

template <class T>
std::string str(const T& v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

template <class T>
AccuracySystem<T> build_accuracy_system(int p, int pa, const std::vector<T>& h_params, PolynomialBasis basis) {
    if (p < 1) throw SbpError(ErrorCode::InvalidArgument, "boundary closures need p >= 1");
    if (pa < 0) throw SbpError(ErrorCode::InvalidArgument, "accuracy order must be >= 0");
    if (static_cast<int>(h_params.size()) > p - 1) {
        throw SbpError(ErrorCode::InvalidArgument, "at most p-1 shifted spacings");
    }
    for (const T& h : h_params) {
        if (!(h > T(0))) throw SbpError(ErrorCode::NonpositiveSpacing, "spacing " + str(h));
    }

    const InteriorStencil fwd = interior_forward_coeffs(p);
    std::vector<T> beta(fwd.exact.size());
    for (std::size_t k = 0; k < beta.size(); ++k) beta[k] = from_rational<T>(fwd.exact[k]);
    auto beta_at = [&](int offset) -> T {
        if (offset < fwd.first_offset() || offset > fwd.last_offset()) return T(0);
        return beta[offset - fwd.first_offset()];
    };

    const int m = 2 * p;
    AccuracySystem<T> sys;
    sys.p = p;
    sys.pa = pa;
    sys.nodes = unit_boundary_nodes(h_params, 3 * p + 1);
    const auto& x = sys.nodes;
    const int rows = 2 * m * (pa + 1);
    sys.coeff.assign(static_cast<std::size_t>(rows) * sys.cols(), T(0));
    sys.rhs.assign(rows, T(0));

    // Polynomial basis values phi_n(x_j) and derivatives phi_n'(x_j), j = 0..3p.
    const int npts = 3 * p + 1;
    std::vector<std::vector<T>> val(pa + 1, std::vector<T>(npts)), der(pa + 1, std::vector<T>(npts));
    if (basis == PolynomialBasis::Monomial) {
        for (int n = 0; n <= pa; ++n) {
            for (int j = 0; j < npts; ++j) {
                val[n][j] = ipow(x[j], n);
                der[n][j] = n == 0 ? T(0) : T(n) * ipow(x[j], n - 1);
            }
        }
    } else {
        // T_n(2x/L - 1) on [0, L], L = x_{3p}
        const T L = x[npts - 1];
        for (int j = 0; j < npts; ++j) {
            const T s = T(2) * x[j] / L - T(1);
            T t0(1), t1 = s, u0(0), u1(1);  // T_n and T_n'
            for (int n = 0; n <= pa; ++n) {
                if (n == 0) {
                    val[n][j] = T(1);
                    der[n][j] = T(0);
                } else if (n == 1) {
                    val[n][j] = s;
                    der[n][j] = T(2) / L;
                } else {
                    const T t2 = T(2) * s * t1 - t0;
                    const T u2 = T(2) * t1 + T(2) * s * u1 - u0;
                    t0 = t1;
                    t1 = t2;
                    u0 = u1;
                    u1 = u2;
                    val[n][j] = t2;
                    der[n][j] = u2 * T(2) / L;
                }
            }
        }
    }

    int r = 0;
    // D+ rows: sum_j q_ij phi(x_j) - mu_i phi'(x_i) = -sum_{j>=2p} beta_{j-i} phi(x_j)
    for (int i = 0; i < m; ++i) {
        for (int n = 0; n <= pa; ++n, ++r) {
            for (int j = 0; j < m; ++j) sys.at(r, i * m + j) = val[n][j];
            sys.at(r, sys.num_d() + i) = -der[n][i];
            T s(0);
            for (int j = m; j <= i + p + 1; ++j) s += beta_at(j - i) * val[n][j];
            sys.rhs[r] = -s;
        }
    }
    // D- rows, using H D- = Q - (H D+)^T:
    // -sum_j q_ji phi(x_j) - mu_i phi'(x_i) = -Q_ii phi(x_i) + sum_{j>=2p} beta_{i-j} phi(x_j)
    for (int i = 0; i < m; ++i) {
        for (int n = 0; n <= pa; ++n, ++r) {
            for (int j = 0; j < m; ++j) sys.at(r, j * m + i) = -val[n][j];
            sys.at(r, sys.num_d() + i) = -der[n][i];
            T s = (i == 0) ? val[n][0] : T(0);
            for (int j = m; j <= i + p - 1; ++j) s += beta_at(i - j) * val[n][j];
            sys.rhs[r] = s;
        }
    }
    return sys;
}

std::vector<int> default_free_columns(int p) {
    const int m = 2 * p;
    std::vector<int> cols;
    for (int i = p + 1; i < m; ++i) {
        for (int j = p + 1; j < m; ++j) cols.push_back(i * m + j);
    }
    return cols;
}

template <class T>
TriangularSystem<T> triangularize(const AccuracySystem<T>& system, std::span<const int> free_cols) {
    const int rows = system.rows();
    const int nd = system.num_d();
    const int nm = system.num_mu();
    const int width = system.cols() + 1;

    std::vector<T> a(static_cast<std::size_t>(rows) * width);
    auto A = [&](int r, int c) -> T& { return a[static_cast<std::size_t>(r) * width + c]; };
    for (int r = 0; r < rows; ++r) {
        T scale(0);
        for (int c = 0; c < system.cols(); ++c) scale = std::max<T>(scale, abs(system.at(r, c)));
        if (scale == T(0)) scale = T(1);
        for (int c = 0; c < system.cols(); ++c) A(r, c) = system.at(r, c) / scale;
        A(r, width - 1) = system.rhs[r] / scale;
    }

    std::vector<char> is_free(nd, 0);
    for (int c : free_cols) {
        if (c < 0 || c >= nd) throw SbpError(ErrorCode::InvalidArgument, "free column out of range");
        is_free[c] = 1;
    }

    TriangularSystem<T> tri;
    tri.p = system.p;
    tri.free_cols.assign(free_cols.begin(), free_cols.end());
    std::vector<int> pivot_row_of;
    std::vector<char> used(rows, 0);

    // Gauss-Jordan over the non-free d columns, partial pivoting by rows.
    for (int c = 0; c < nd; ++c) {
        if (is_free[c]) continue;
        int best = -1;
        T best_val(0);
        for (int r = 0; r < rows; ++r) {
            if (used[r]) continue;
            const T v = abs(A(r, c));
            if (v > best_val) {
                best_val = v;
                best = r;
            }
        }
        if (best < 0 || best_val < pivot_tol<T>()) {
            const int m = 2 * system.p;
            std::ostringstream os;
            os << "no pivot for d(" << c / m << "," << c % m << ") with h = (";
            for (int k = 0; k < system.p - 1 && k + 1 < static_cast<int>(system.nodes.size()); ++k) {
                os << (k ? ", " : "") << str(system.nodes[k + 1] - system.nodes[k]);
            }
            os << ")";
            throw SbpError(ErrorCode::PivotBreakdown, os.str());
        }
        used[best] = 1;
        tri.pivot_cols.push_back(c);
        pivot_row_of.push_back(best);
        const T inv = T(1) / A(best, c);
        for (int k = 0; k < width; ++k) A(best, k) *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == best) continue;
            const T f = A(r, c);
            if (f == T(0)) continue;
            for (int k = 0; k < width; ++k) A(r, k) -= f * A(best, k);
        }
    }

    const int nf = static_cast<int>(tri.free_cols.size());
    for (std::size_t u = 0; u < tri.pivot_cols.size(); ++u) {
        const int r = pivot_row_of[u];
        for (int f : tri.free_cols) tri.ut_free.push_back(A(r, f));
        for (int k = 0; k < nm; ++k) tri.ut_mu.push_back(A(r, nd + k));
        tri.ut_rhs.push_back(A(r, width - 1));
    }
    for (int r = 0; r < rows; ++r) {
        if (used[r]) continue;
        for (int f : tri.free_cols) tri.max_ds_free_coeff = std::max<T>(tri.max_ds_free_coeff, abs(A(r, f)));
        for (int k = 0; k < nm; ++k) tri.ds_mu.push_back(A(r, nd + k));
        tri.ds_rhs.push_back(A(r, width - 1));
    }
    (void)nf;
    return tri;
}

template <class T>
DsSolution<T> solve_ds_system(const TriangularSystem<T>& tri) {
    const int rows = tri.ds_rows();
    const int n = 2 * tri.p;
    if (tri.max_ds_free_coeff > structural_tol<T>()) {
        throw SbpError(ErrorCode::PivotBreakdown,
                       "free parameters are not free: residual coefficient " + str(tri.max_ds_free_coeff));
    }
    if (rows < n) throw SbpError(ErrorCode::RankDeficient, "fewer DS rows than norm entries");

    // Householder QR with column pivoting on [ds_mu | ds_rhs].
    std::vector<T> a(tri.ds_mu);
    std::vector<T> b(tri.ds_rhs);
    auto A = [&](int r, int c) -> T& { return a[static_cast<std::size_t>(r) * n + c]; };
    std::vector<int> perm(n);
    for (int k = 0; k < n; ++k) perm[k] = k;

    using std::sqrt;
    using boost::multiprecision::sqrt;

    int rank = 0;
    T r00(0);
    for (int k = 0; k < n; ++k) {
        int best = k;
        T best_norm(-1);
        for (int c = k; c < n; ++c) {
            T s(0);
            for (int r = k; r < rows; ++r) s += A(r, c) * A(r, c);
            if (s > best_norm) {
                best_norm = s;
                best = c;
            }
        }
        if (best != k) {
            for (int r = 0; r < rows; ++r) std::swap(A(r, k), A(r, best));
            std::swap(perm[k], perm[best]);
        }
        const T norm = sqrt(best_norm);
        if (k == 0) r00 = norm;
        if (norm <= rank_tol<T>() * r00 || norm == T(0)) break;
        ++rank;
        const T alpha = A(k, k) > T(0) ? -norm : norm;
        std::vector<T> v(rows, T(0));
        for (int r = k; r < rows; ++r) v[r] = A(r, k);
        v[k] -= alpha;
        T vnorm2(0);
        for (int r = k; r < rows; ++r) vnorm2 += v[r] * v[r];
        if (vnorm2 == T(0)) continue;
        for (int c = k; c < n; ++c) {
            T dot(0);
            for (int r = k; r < rows; ++r) dot += v[r] * A(r, c);
            const T f = T(2) * dot / vnorm2;
            for (int r = k; r < rows; ++r) A(r, c) -= f * v[r];
        }
        T dot(0);
        for (int r = k; r < rows; ++r) dot += v[r] * b[r];
        const T f = T(2) * dot / vnorm2;
        for (int r = k; r < rows; ++r) b[r] -= f * v[r];
    }
    if (rank < n) {
        throw SbpError(ErrorCode::RankDeficient,
                       "DS rank " + std::to_string(rank) + " < " + std::to_string(n));
    }

    std::vector<T> z(n, T(0));
    for (int k = n - 1; k >= 0; --k) {
        T s = b[k];
        for (int c = k + 1; c < n; ++c) s -= A(k, c) * z[c];
        z[k] = s / A(k, k);
    }
    DsSolution<T> sol;
    sol.rank = rank;
    sol.mu.assign(n, T(0));
    for (int k = 0; k < n; ++k) sol.mu[perm[k]] = z[k];

    T res(0);
    for (int r = 0; r < rows; ++r) {
        T s = -tri.ds_rhs[r];
        for (int k = 0; k < n; ++k) s += tri.ds_mu[static_cast<std::size_t>(r) * n + k] * sol.mu[k];
        res = std::max<T>(res, abs(s));
    }
    sol.residual = res;
    if (res > residual_tol<T>()) {
        throw SbpError(ErrorCode::DsInsoluble, "DS residual " + str(res));
    }
    return sol;
}

namespace {

template <class T>
void check_positive(const std::vector<T>& mu) {
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (!(mu[i] > T(0))) {
            std::ostringstream os;
            os << "mu_" << i + 1 << " = " << str(mu[i]) << " (mu = ";
            for (std::size_t k = 0; k < mu.size(); ++k) os << (k ? ", " : "") << str(mu[k]);
            os << ")";
            throw SbpError(ErrorCode::NonpositiveMu, os.str());
        }
    }
}

template <class T>
std::vector<T> convert_all(const std::vector<double>& v) {
    return std::vector<T>(v.begin(), v.end());
}

template <class T>
std::vector<double> to_double(const std::vector<T>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const T& x : v) out.push_back(static_cast<double>(x));
    return out;
}

template <class T>
std::vector<double> solve_DS_as(int p, const std::vector<double>& h_params) {
    const auto sys = build_accuracy_system<T>(p, p, convert_all<T>(h_params), PolynomialBasis::Chebyshev);
    const auto free_cols = default_free_columns(p);
    const auto tri = triangularize<T>(sys, free_cols);
    const auto sol = solve_ds_system<T>(tri);
    check_positive(sol.mu);
    return to_double(sol.mu);
}

template <class T>
BoundaryFamily family_as(int p, const std::vector<double>& h_params) {
    const auto sys = build_accuracy_system<T>(p, p, convert_all<T>(h_params), PolynomialBasis::Chebyshev);
    const auto free_cols = default_free_columns(p);
    const auto tri = triangularize<T>(sys, free_cols);
    const auto sol = solve_ds_system<T>(tri);
    check_positive(sol.mu);

    const int m = 2 * p;
    const int nf = static_cast<int>(free_cols.size());
    const int nm = m;

    // Free-entry parameterization in working precision: d = dfree0 + sum_f c_f B_f.
    const std::size_t nd = static_cast<std::size_t>(m) * m;
    std::vector<T> d0(nd, T(0));
    std::vector<std::vector<T>> basis(nf, std::vector<T>(nd, T(0)));
    for (int f = 0; f < nf; ++f) basis[f][free_cols[f]] = T(1);
    // q_piv = rhs - ut_mu.mu - sum_f ut_free(f) q_f,  q_f = mu_{row f} c_f,  d = q / mu_row
    for (int u = 0; u < tri.ut_rows(); ++u) {
        const int col = tri.pivot_cols[u];
        const int i = col / m;
        T q0 = tri.ut_rhs[u];
        for (int k = 0; k < nm; ++k) q0 -= tri.ut_mu[static_cast<std::size_t>(u) * nm + k] * sol.mu[k];
        d0[col] = q0 / sol.mu[i];
        for (int f = 0; f < nf; ++f) {
            const int fi = free_cols[f] / m;
            basis[f][col] = -tri.ut_free[static_cast<std::size_t>(u) * nf + f] * sol.mu[fi] / sol.mu[i];
        }
    }

    // The free-entry directions are badly scaled and nearly dependent. Replace
    // them by their Gram-Schmidt orthonormalization (fixed order, positive
    // diagonal, so continuous in h) and move the base point to the minimum
    // norm member of the family.
    using std::sqrt;
    using boost::multiprecision::sqrt;
    auto dot = [nd](const std::vector<T>& u, const std::vector<T>& v) {
        T s(0);
        for (std::size_t k = 0; k < nd; ++k) s += u[k] * v[k];
        return s;
    };
    for (int f = 0; f < nf; ++f) {
        for (int pass = 0; pass < 2; ++pass) {
            for (int g = 0; g < f; ++g) {
                const T proj = dot(basis[f], basis[g]);
                for (std::size_t k = 0; k < nd; ++k) basis[f][k] -= proj * basis[g][k];
            }
        }
        const T norm = sqrt(dot(basis[f], basis[f]));
        for (std::size_t k = 0; k < nd; ++k) basis[f][k] /= norm;
    }
    for (int pass = 0; pass < 2; ++pass) {
        for (int f = 0; f < nf; ++f) {
            const T proj = dot(d0, basis[f]);
            for (std::size_t k = 0; k < nd; ++k) d0[k] -= proj * basis[f][k];
        }
    }

    BoundaryFamily fam;
    fam.p = p;
    fam.h_params = h_params;
    fam.mu = to_double(sol.mu);
    fam.ds_residual = static_cast<double>(sol.residual);
    fam.ds_rank = sol.rank;
    fam.ds_rows = tri.ds_rows();
    fam.ut_rank = tri.ut_rows();
    fam.d0 = Eigen::MatrixXd::Zero(m, m);
    fam.d_basis.assign(nf, Eigen::MatrixXd::Zero(m, m));
    for (std::size_t k = 0; k < nd; ++k) {
        const int i = static_cast<int>(k) / m;
        const int j = static_cast<int>(k) % m;
        fam.d0(i, j) = static_cast<double>(d0[k]);
        for (int f = 0; f < nf; ++f) fam.d_basis[f](i, j) = static_cast<double>(basis[f][k]);
    }
    return fam;
}

}  // namespace

std::vector<double> solve_DS(int p, const std::vector<double>& h_params, Precision precision) {
    switch (precision) {
        case Precision::Double: return solve_DS_as<double>(p, h_params);
        case Precision::LongDouble: return solve_DS_as<long double>(p, h_params);
        case Precision::High: break;
    }
    return solve_DS_as<HighReal>(p, h_params);
}

std::vector<HighReal> solve_DS_exact(int p, const std::vector<std::string>& h_params) {
    std::vector<HighReal> h;
    for (const auto& s : h_params) h.emplace_back(s);
    const auto sys = build_accuracy_system<HighReal>(p, p, h);
    const auto free_cols = default_free_columns(p);
    const auto tri = triangularize<HighReal>(sys, free_cols);
    auto sol = solve_ds_system<HighReal>(tri);
    check_positive(sol.mu);
    return sol.mu;
}

BoundaryFamily boundary_family(int p, const std::vector<double>& h_params, Precision precision) {
    switch (precision) {
        case Precision::Double: return family_as<double>(p, h_params);
        case Precision::LongDouble: return family_as<long double>(p, h_params);
        case Precision::High: break;
    }
    return family_as<HighReal>(p, h_params);
}

Eigen::MatrixXd BoundaryFamily::dplus_block(const Eigen::VectorXd& c) const {
    if (c.size() != dimension()) {
        throw SbpError(ErrorCode::ShapeMismatch, "expected " + std::to_string(dimension()) + " free parameters, got " +
                                                     std::to_string(c.size()));
    }
    Eigen::MatrixXd d = d0;
    for (int k = 0; k < dimension(); ++k) d += c[k] * d_basis[k];
    return d;
}

Eigen::MatrixXd compute_Dlc(const std::vector<double>& mu, const InteriorStencil& backward) {
    const int p = backward.p;
    const int m = 2 * p;
    if (static_cast<int>(mu.size()) != m) throw SbpError(ErrorCode::ShapeMismatch, "need 2p norm entries");
    Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(m, p + 1);
    // (H D+)_{ij} = -(D-)_{ji} for interior rows j of D-.
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k <= p; ++k) {
            const int j = m + k;
            alpha(i, k) = -backward.at(i - j) / mu[i];
        }
    }
    return alpha;
}

template AccuracySystem<double> build_accuracy_system(int, int, const std::vector<double>&, PolynomialBasis);
template AccuracySystem<long double> build_accuracy_system(int, int, const std::vector<long double>&, PolynomialBasis);
template AccuracySystem<HighReal> build_accuracy_system(int, int, const std::vector<HighReal>&, PolynomialBasis);
template TriangularSystem<double> triangularize(const AccuracySystem<double>&, std::span<const int>);
template TriangularSystem<long double> triangularize(const AccuracySystem<long double>&, std::span<const int>);
template TriangularSystem<HighReal> triangularize(const AccuracySystem<HighReal>&, std::span<const int>);
template DsSolution<double> solve_ds_system(const TriangularSystem<double>&);
template DsSolution<long double> solve_ds_system(const TriangularSystem<long double>&);
template DsSolution<HighReal> solve_ds_system(const TriangularSystem<HighReal>&);

}  // namespace sbp
