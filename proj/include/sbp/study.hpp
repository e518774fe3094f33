#pragma once

#include <vector>

#include "sbp/optimizer.hpp"
#include "sbp/wavesim.hpp"

namespace sbp {

struct SchemeKey {
    int order = 0;
    int K = 0;
};

/// The thirteen (2p, K) rows of the published summary table.
const std::vector<SchemeKey>& table1_keys();

/// Published spacings (none for K = 0) with c re-derived by minimizing E at
/// fixed h, starting from C_aux(h).
OptimizationResult rederive_scheme(int order, int K, const ObjectiveConfig& config = {},
                                   const OptimizeOptions& options = {});

struct Table1Row {
    int order = 0;
    int K = 0;
    double p_num = 0.0;       ///< fitted order at t = 0.5
    double ratio = 0.0;       ///< lambda_int / lambda_full at 101 nodes
    double courant = 0.0;     ///< 2 / lambda_int in units of h
    double error_101 = 0.0;   ///< C-norm error at t = 0.5 on 101 nodes
};

Table1Row table1_row(const OptimizationResult& scheme, const SimOptions& options = {}, int workers = 0);

/// Error-vs-time series on 101 nodes, t in [0, t_end] sampled every `every`.
SimResult error_history(const OptimizationResult& scheme, double t_end = 0.6, double every = 0.01,
                        const SimOptions& options = {});

}  // namespace sbp
