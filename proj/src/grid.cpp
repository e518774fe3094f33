#include "sbp/grid.hpp"

#include <numeric>
#include <string>

#include "sbp/error.hpp"

namespace sbp {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NodeCountTooSmall: return "node-count-too-small";
        case ErrorCode::NonpositiveSpacing: return "nonpositive-spacing";
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::PivotBreakdown: return "pivot-breakdown";
        case ErrorCode::RankDeficient: return "rank-deficient";
        case ErrorCode::DsInsoluble: return "ds-insoluble";
        case ErrorCode::NonpositiveMu: return "nonpositive-mu";
        case ErrorCode::ShapeMismatch: return "shape-mismatch";
        case ErrorCode::Infeasible: return "infeasible";
        case ErrorCode::DegenerateFit: return "degenerate-fit";
        case ErrorCode::Instability: return "instability";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

void GridSpec::validate() const {
    if (p < 1) throw SbpError(ErrorCode::InvalidArgument, "p must be >= 1");
    if (K() > p - 1 && K() > 0) {
        throw SbpError(ErrorCode::InvalidArgument,
                       "at most p-1 = " + std::to_string(p - 1) + " shifted spacings allowed");
    }
    for (double s : boundary_spacings) {
        if (!(s > 0.0)) throw SbpError(ErrorCode::NonpositiveSpacing, "boundary spacing " + std::to_string(s));
    }
    if (N < min_intervals(p)) {
        throw SbpError(ErrorCode::NodeCountTooSmall,
                       "N+1 = " + std::to_string(N + 1) + " nodes; need at least " +
                           std::to_string(min_intervals(p) + 1) + " for p = " + std::to_string(p));
    }
}

Grid build_grid(const GridSpec& spec, GridMode mode) {
    spec.validate();
    Grid grid;
    grid.spec = spec;
    grid.mode = mode;

    const int n = spec.N;
    const int k = spec.K();
    // spacing of interval i (1-based), symmetric about the middle
    auto rel_spacing = [&](int i) {
        const int from_end = std::min(i, n - i + 1);
        return from_end <= k ? spec.boundary_spacings[from_end - 1] : 1.0;
    };

    const double rel_sum = std::accumulate(spec.boundary_spacings.begin(), spec.boundary_spacings.end(), 0.0);
    grid.h = mode == GridMode::ScaledToUnitInterval ? 1.0 / (n - 2 * k + 2.0 * rel_sum) : 1.0;

    grid.nodes.resize(n + 1);
    grid.nodes[0] = 0.0;
    // Accumulate from both ends so that the mirrored spacings agree bitwise.
    const double last = mode == GridMode::ScaledToUnitInterval ? 1.0 : (n - 2 * k + 2.0 * rel_sum);
    grid.nodes[n] = last;
    for (int i = 1; i <= n / 2; ++i) {
        grid.nodes[i] = grid.nodes[i - 1] + rel_spacing(i) * grid.h;
        grid.nodes[n - i] = grid.nodes[n - i + 1] - rel_spacing(n - i + 1) * grid.h;
    }
    if (n % 2 == 0) grid.nodes[n / 2] = 0.5 * last;
    return grid;
}

std::pair<int, int> interior_node_range(const GridSpec& spec) {
    spec.validate();
    return {2 * spec.p, spec.N - 2 * spec.p};
}

}  // namespace sbp
