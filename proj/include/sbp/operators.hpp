#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "sbp/boundary.hpp"
#include "sbp/grid.hpp"

namespace sbp {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Grid-independent description of a scheme: everything needed to assemble
/// the operators on any grid size.
struct SchemeParams {
    int p = 2;
    std::vector<double> h_params;
    std::vector<double> c;
    std::vector<double> mu;  ///< informational; recomputed from h_params on assembly

    int order() const { return 2 * p; }
    int K() const { return static_cast<int>(h_params.size()); }
};

/// H, D+ and D- on one grid. Entries of D carry 1/h, entries of H carry h.
struct OperatorSet {
    Grid grid;
    SchemeParams scheme;
    Eigen::VectorXd H;  ///< diagonal of the norm
    SparseRowMatrix Dplus;
    SparseRowMatrix Dminus;
    Eigen::MatrixXd dl_plus;  ///< unit-spacing corner block D_l+

    int p() const { return scheme.p; }
    int size() const { return static_cast<int>(H.size()); }
    Eigen::MatrixXd Q() const;
};

/// Assemble on `grid`. The grid's boundary spacings must equal the family's.
OperatorSet assemble(const Grid& grid, const BoundaryFamily& family, const Eigen::VectorXd& c);

/// Convenience: boundary family plus assembly on N+1 nodes.
OperatorSet assemble_scheme(const SchemeParams& scheme, int N, GridMode mode = GridMode::ScaledToUnitInterval,
                            Precision precision = Precision::High);

struct SbpCheck {
    double matrix_residual = 0.0;    ///< max |(D+)^T H + H D- - Q|
    double bilinear_residual = 0.0;  ///< max over random pairs of the scalar-product identity
    double max() const { return std::max(matrix_residual, bilinear_residual); }
};

SbpCheck verify_sbp(const OperatorSet& set, std::uint64_t seed = 7, int trials = 8);

/// Max over near-boundary rows of D+ and D- and n <= order of
/// |(D xi^n)_i - n xi_i^{n-1}| in unit-spacing coordinates measured from the
/// nearest end.
double verify_boundary_order(const OperatorSet& set, int order);

}  // namespace sbp
