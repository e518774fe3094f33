#include "sbp/study.hpp"

#include <cmath>

#include "sbp/error.hpp"
#include "sbp/spectra.hpp"
#include "sbp/tables.hpp"

namespace sbp {
namespace {

Eigen::VectorXd as_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

OperatorSet on_nodes(const OptimizationResult& scheme, int nodes) {
    return assemble_scheme(scheme.scheme(), nodes - 1, GridMode::ScaledToUnitInterval);
}

}  // namespace

const std::vector<SchemeKey>& table1_keys() {
    static const std::vector<SchemeKey> keys{{4, 0},  {4, 1},  {6, 0},  {6, 1},  {6, 2},  {8, 0}, {8, 1},
                                             {8, 2},  {8, 3},  {10, 1}, {10, 2}, {12, 1}, {12, 2}};
    return keys;
}

OptimizationResult rederive_scheme(int order, int K, const ObjectiveConfig& config, const OptimizeOptions& options) {
    if (order % 2 != 0 || order < 2) throw SbpError(ErrorCode::InvalidArgument, "order must be even and >= 2");
    std::vector<double> h;
    if (K > 0) {
        const PublishedGrid* grid = find_grid(order, K);
        if (!grid) {
            throw SbpError(ErrorCode::InvalidArgument,
                           "no published grid for 2p = " + std::to_string(order) + ", K = " + std::to_string(K));
        }
        h = grid->spacings();
    }
    return optimize_c(order / 2, h, config, options);
}

Table1Row table1_row(const OptimizationResult& scheme, const SimOptions& options, int workers) {
    Table1Row row;
    row.order = 2 * scheme.p;
    row.K = static_cast<int>(scheme.h_params.size());
    const SpectralReport spectra = spectral_report(on_nodes(scheme, 101));
    row.ratio = spectra.ratio;
    row.courant = spectra.courant_interior;

    const BoundaryFamily family = boundary_family(scheme.p, scheme.h_params, Precision::High);
    const ConvergenceReport conv =
        convergence_study(WaveProblem{}, family, as_vector(scheme.c), 0.5, default_node_counts(), options, workers);
    row.p_num = conv.order;
    row.error_101 = conv.points.front().error;
    return row;
}

SimResult error_history(const OptimizationResult& scheme, double t_end, double every, const SimOptions& options) {
    std::vector<double> times;
    const int count = static_cast<int>(std::lround(t_end / every));
    for (int k = 0; k <= count; ++k) times.push_back(k * every);
    return error_vs_time(WaveProblem{}, on_nodes(scheme, 101), times, options);
}

}  // namespace sbp
