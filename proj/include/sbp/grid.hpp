#pragma once

#include <utility>
#include <vector>

namespace sbp {

enum class GridMode {
    ScaledToUnitInterval,  ///< x_0 = 0, x_N = 1
    UnitInteriorSpacing,   ///< interior spacing h = 1
};

/// Symmetric grid description: K free spacings at each end, expressed in
/// units of the interior spacing.
struct GridSpec {
    int p = 2;  ///< half-order; the scheme is of order 2p
    int N = 0;  ///< number of nodes minus one
    std::vector<double> boundary_spacings;

    int K() const { return static_cast<int>(boundary_spacings.size()); }

    /// Smallest N for which the two boundary closures do not interact.
    static int min_intervals(int p) { return 5 * p; }

    /// Throws SbpError on an invalid combination.
    void validate() const;
};

struct Grid {
    GridSpec spec;
    GridMode mode = GridMode::ScaledToUnitInterval;
    std::vector<double> nodes;
    double h = 1.0;  ///< interior spacing in length units

    int N() const { return spec.N; }
    int p() const { return spec.p; }
    double spacing(int i) const { return nodes[i] - nodes[i - 1]; }
};

Grid build_grid(const GridSpec& spec, GridMode mode);

/// First and last internal node indices, (2p, N-2p).
std::pair<int, int> interior_node_range(const GridSpec& spec);

/// Unit-mode coordinates x_0..x_{count-1} of the left end (x_0 = 0).
template <class T>
std::vector<T> unit_boundary_nodes(const std::vector<T>& spacings, int count) {
    std::vector<T> x(count);
    x[0] = T(0);
    for (int i = 1; i < count; ++i) {
        const int k = i - 1;
        x[i] = x[i - 1] + (k < static_cast<int>(spacings.size()) ? spacings[k] : T(1));
    }
    return x;
}

}  // namespace sbp
