#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sbp/stencil.hpp"

namespace sbp {

/// 50-digit binary float used where the boundary system must reproduce
/// published 18-digit data.
using HighReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                               boost::multiprecision::et_off>;

enum class Precision { Double, LongDouble, High };

/// Boundary accuracy conditions of the left closure, linear in the unknowns
///   q_{ij} = mu_i d_{ij}  (entries of H D+ in the 2p x 2p corner, unit spacing)
///   mu_1 .. mu_2p         (boundary entries of the norm)
/// The rows state D+ w_n = n w_{n-1} and D- w_n = n w_{n-1} on the 2p
/// boundary rows for n = 0..pa, with D- eliminated through the SBP identity.
template <class T>
struct AccuracySystem {
    int p = 0;
    int pa = 0;
    std::vector<T> nodes;  ///< unit-spacing x_0 .. x_{3p}
    std::vector<T> coeff;  ///< rows() x cols(), row-major; q block first, then mu
    std::vector<T> rhs;

    int num_d() const { return 4 * p * p; }
    int num_mu() const { return 2 * p; }
    int cols() const { return num_d() + num_mu(); }
    int rows() const { return static_cast<int>(rhs.size()); }
    T& at(int r, int c) { return coeff[static_cast<std::size_t>(r) * cols() + c]; }
    const T& at(int r, int c) const { return coeff[static_cast<std::size_t>(r) * cols() + c]; }
};

/// Basis in which the exactness conditions are written. Both give the same
/// solution set; Chebyshev polynomials on [0, x_3p] are far better
/// conditioned than monomials.
enum class PolynomialBasis { Monomial, Chebyshev };

template <class T>
AccuracySystem<T> build_accuracy_system(int p, int pa, const std::vector<T>& h_params,
                                        PolynomialBasis basis = PolynomialBasis::Monomial);

/// Result of eliminating the d-unknowns. Every UT row reads
///   q_pivot + sum_f ut_free(r,f) q_f + sum_m ut_mu(r,m) mu_m = ut_rhs(r)
/// and every DS row reads sum_m ds_mu(r,m) mu_m = ds_rhs(r).
template <class T>
struct TriangularSystem {
    int p = 0;
    std::vector<int> pivot_cols;
    std::vector<int> free_cols;
    std::vector<T> ut_free, ut_mu, ut_rhs;
    std::vector<T> ds_mu, ds_rhs;
    T max_ds_free_coeff = T(0);  ///< leftover q coefficients in DS rows (should vanish)

    int ut_rows() const { return static_cast<int>(ut_rhs.size()); }
    int ds_rows() const { return static_cast<int>(ds_rhs.size()); }
};

/// Entries of the corner block left as free parameters: rows and columns
/// p+1 .. 2p-1 (0-based), flattened as i*2p + j.
std::vector<int> default_free_columns(int p);

template <class T>
TriangularSystem<T> triangularize(const AccuracySystem<T>& system, std::span<const int> free_cols);

template <class T>
struct DsSolution {
    std::vector<T> mu;
    int rank = 0;
    T residual = T(0);
};

/// Least-squares solve of DS by column-pivoted QR. Throws RankDeficient or
/// DsInsoluble; does not check positivity.
template <class T>
DsSolution<T> solve_ds_system(const TriangularSystem<T>& tri);

/// mu_1..mu_2p for the given shifted spacings. Throws NonpositiveMu when the
/// scheme is inadmissible.
std::vector<double> solve_DS(int p, const std::vector<double>& h_params, Precision precision = Precision::High);

/// Same, with spacings given as decimal strings parsed at 50 digits.
std::vector<HighReal> solve_DS_exact(int p, const std::vector<std::string>& h_params);

/// Affine family of corner blocks D_l+(c) with the norm fixed:
///   D_l+(c) = d0 + sum_k c_k d_basis[k]
/// d0 is the minimum-Frobenius-norm member and the d_basis matrices are
/// orthonormal, so c are coordinates along the family measured from d0.
struct BoundaryFamily {
    int p = 0;
    std::vector<double> h_params;
    std::vector<double> mu;
    Eigen::MatrixXd d0;
    std::vector<Eigen::MatrixXd> d_basis;
    double ds_residual = 0.0;
    int ds_rank = 0;
    int ds_rows = 0;
    int ut_rank = 0;

    int K() const { return static_cast<int>(h_params.size()); }
    int dimension() const { return static_cast<int>(d_basis.size()); }
    Eigen::MatrixXd dplus_block(const Eigen::VectorXd& c) const;
};

BoundaryFamily boundary_family(int p, const std::vector<double>& h_params, Precision precision = Precision::Double);

/// D_lc+ in unit spacing: the 2p x (p+1) block of rows 0..2p-1, columns
/// 2p..3p, fixed by the norm and the backward interior stencil.
Eigen::MatrixXd compute_Dlc(const std::vector<double>& mu, const InteriorStencil& backward);

}  // namespace sbp
