#pragma once

#include <string>
#include <vector>

#include "sbp/operators.hpp"

namespace sbp {

/// Published spacings of the shifted nodes (interior spacing 1).
struct PublishedGrid {
    int order = 0;  ///< 2p
    int K = 0;
    std::vector<std::string> h_params;

    std::vector<double> spacings() const;
};

/// Published norm coefficients. `mu` is stored as printed, including the
/// trailing interior value 1.
struct PublishedScheme {
    int order = 0;
    int K = 0;
    std::string label;  ///< e.g. "3.2"
    std::vector<std::string> h_params;
    std::vector<std::string> mu;

    int p() const { return order / 2; }
    std::vector<double> spacings() const;
};

const std::vector<PublishedGrid>& list_grids();
const std::vector<PublishedScheme>& list_schemes();

/// nullptr if the catalog has no such entry.
const PublishedScheme* find_scheme(int order, int K);
const PublishedGrid* find_grid(int order, int K);

struct ValidationReport {
    bool match = false;
    int required_digits = 10;
    std::vector<double> digits;  ///< significant digits of agreement for each boundary mu
    int worst_index = -1;        ///< 1-based index of the least accurate mu
    double min_digits = 0.0;
    bool positive = false;
    std::vector<std::string> notes;
};

/// Recomputes mu from the published spacings at 50 digits and compares.
ValidationReport validate_scheme(const PublishedScheme& scheme, int required_digits = 10);

/// Agreement of a against b in significant decimal digits (17 when equal in
/// double precision).
double agreement_digits(double a, double b);

}  // namespace sbp
