#pragma once

#include "sbp/operators.hpp"

namespace sbp {

/// Eigenvalue diagnostics of (D+)^T H D+ u = lambda^2 H u. Both lambdas are
/// stored in units of 1/h (i.e. multiplied by the interior spacing).
struct SpectralReport {
    double lambda_full = 0.0;
    double lambda_int = 0.0;
    double ratio = 0.0;             ///< lambda_int / lambda_full
    double courant_interior = 0.0;  ///< 2 / lambda_int, the leapfrog CFL bound in the interior
};

/// Largest lambda of the full problem, in physical units (1/length).
double lambda_full(const OperatorSet& set);

/// max over theta of |sum_j beta_j e^{i j theta}| for the forward interior
/// stencil; the periodic-interior lambda in units of 1/h.
double lambda_int(int p);

SpectralReport spectral_report(const OperatorSet& set);

}  // namespace sbp
