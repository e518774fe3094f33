#include "sbp/tables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbp/boundary.hpp"
#include "sbp/error.hpp"

namespace sbp {
namespace {

std::vector<double> parse_all(const std::vector<std::string>& values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(std::stod(v));
    return out;
}

double digits_between(const HighReal& a, const HighReal& b) {
    using boost::multiprecision::abs;
    using boost::multiprecision::log10;
    const HighReal diff = abs(a - b);
    if (diff == 0) return 50.0;
    const HighReal scale = std::max(abs(a), abs(b));
    return static_cast<double>(-log10(diff / scale));
}

}  // namespace

std::vector<double> PublishedGrid::spacings() const { return parse_all(h_params); }
std::vector<double> PublishedScheme::spacings() const { return parse_all(h_params); }

const std::vector<PublishedGrid>& list_grids() {
    static const std::vector<PublishedGrid> grids{
        {4, 1, {"0.64701892044823239"}},
        {6, 1, {"0.55959440808516225"}},
        {6, 2, {"0.52989554067209088", "0.9577049256058392"}},
        {8, 1, {"0.53057599940567612"}},
        {8, 2, {"0.39203322551059488", "0.81423930361885499"}},
        {8, 3, {"0.43979786646687147", "0.90985090947051206", "1.0771428495647428"}},
        {10, 1, {"0.50900297608285072"}},
        {10, 2, {"0.37366515483267776", "0.79308655639992476"}},
        {12, 1, {"0.48125000596046169"}},
        {12, 2, {"0.38823311074361344", "0.81640993512856175"}},
    };
    return grids;
}

const std::vector<PublishedScheme>& list_schemes() {
    static const std::vector<PublishedScheme> schemes = [] {
        std::vector<PublishedScheme> s{
            {4, 1, "1.1", {},
             {"0.186109276322411116", "0.975448598874482986", "0.976489275826791681", "1.008971769424537701", "1"}},
            {6, 1, "2.1", {},
             {"0.162227980272819955", "0.873555067807182617", "1.031381558634351325", "0.991130867107816504",
              "1.001296776753106244", "1.000002157509889189", "1"}},
            {6, 2, "2.2", {},
             {"0.153545834255111785", "0.827868630728788024", "1.007836990306931968", "0.998846303560314341",
              "0.999229946106053313", "1.000272761320736059", "1"}},
            {8, 1, "3.1", {},
             {"0.294839655769715270", "1.526077766754849963", "0.256381448412698443", "1.799899415784832479",
              "0.410922343474426854", "1.279556051587301679", "0.922938436948853691", "1.009384881267321621", "1"}},
            {8, 2, "3.2", {},
             {"0.110338815724131761", "0.635841857271623012", "0.950804714528380446", "1.013133760425796615",
              "0.994604889106195045", "1.001983074003966800", "0.999507111548435856", "1.000058306520917872", "1"}},
            {8, 3, "3.3", {},
             {"0.123920978343533647", "0.712830551002903490", "1.054602637461168113", "1.046653662344426694",
              "0.985006468579236016", "1.004695892473460361", "0.998971519552118048", "1.000109915745287070", "1"}},
            {10, 1, "4.1", {},
             {"0.144437776901122500", "0.817330306276763396", "1.085198183908459013", "0.929611527349792244",
              "1.055478528306474040", "0.964711409696087818", "1.016688169724728752", "0.994562982288813791",
              "1.001083360908970654", "0.999900730721632103", "1"}},
            {10, 2, "4.2", {},
             {"0.104654633738292063", "0.609748535967006844", "0.940178174636667863", "1.018013035012260925",
              "0.991135498769543100", "1.004360329350681758", "0.998221653537359699", "1.000531902166808873",
              "0.999898886800964282", "1.000009061253016585", "1"}},
            {12, 2, "5.1", {},
             {"0.108740366453879106", "0.632865778556215175", "0.956449007732071865", "1.007176273126186183",
              "1.001241188722324038", "0.995791403173844181", "1.004146733839414329", "0.997356904816331769",
              "1.001160562212721983", "0.999659249972080222", "1.000060503196924522", "0.999995074070187173",
              "1"}},
        };
        for (auto& scheme : s) scheme.h_params = find_grid(scheme.order, scheme.K)->h_params;
        return s;
    }();
    return schemes;
}

const PublishedScheme* find_scheme(int order, int K) {
    for (const auto& s : list_schemes()) {
        if (s.order == order && s.K == K) return &s;
    }
    return nullptr;
}

const PublishedGrid* find_grid(int order, int K) {
    for (const auto& g : list_grids()) {
        if (g.order == order && g.K == K) return &g;
    }
    return nullptr;
}

double agreement_digits(double a, double b) {
    const double diff = std::fabs(a - b);
    const double scale = std::max(std::fabs(a), std::fabs(b));
    if (diff == 0.0 || diff <= 1e-17 * scale) return 17.0;
    return -std::log10(diff / scale);
}

ValidationReport validate_scheme(const PublishedScheme& scheme, int required_digits) {
    ValidationReport report;
    report.required_digits = required_digits;
    const int p = scheme.p();
    const int boundary = 2 * p;
    if (static_cast<int>(scheme.mu.size()) == boundary + 1) {
        report.notes.push_back("entry " + std::to_string(boundary + 1) + " = " + scheme.mu.back() +
                               " is the interior value; " + std::to_string(boundary) + " boundary coefficients compared");
        if (HighReal(scheme.mu.back()) != 1) report.notes.push_back("trailing interior value differs from 1");
    } else if (static_cast<int>(scheme.mu.size()) != boundary) {
        throw SbpError(ErrorCode::ShapeMismatch, "scheme " + scheme.label + " lists " +
                                                     std::to_string(scheme.mu.size()) + " coefficients, expected " +
                                                     std::to_string(boundary));
    }

    std::vector<HighReal> mu;
    try {
        mu = solve_DS_exact(p, scheme.h_params);
    } catch (const SbpError& e) {
        report.notes.push_back(std::string("norm system failed: ") + e.what());
        return report;
    }

    report.positive = true;
    report.min_digits = 50.0;
    for (int i = 0; i < boundary; ++i) {
        const HighReal published(scheme.mu[i]);
        const double d = digits_between(mu[i], published);
        report.digits.push_back(d);
        if (d < report.min_digits) {
            report.min_digits = d;
            report.worst_index = i + 1;
        }
        if (published <= 0 || mu[i] <= 0) report.positive = false;
    }
    report.match = report.positive && report.min_digits >= required_digits;
    if (!report.match && scheme.K > 0) {
        // A published set can coincide with the norm of a different grid.
        try {
            const std::vector<HighReal> uniform = solve_DS_exact(p, {});
            double worst = 50.0;
            for (int i = 0; i < boundary; ++i) {
                worst = std::min(worst, digits_between(uniform[i], HighReal(scheme.mu[i])));
            }
            if (worst >= required_digits) {
                report.notes.push_back("published values equal the uniform-grid (K = 0) norm to " +
                                       std::to_string(static_cast<int>(worst)) + " digits");
            }
        } catch (const SbpError&) {
        }
    }
    return report;
}

}  // namespace sbp
