#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sbp/error.hpp"
#include "sbp/operators.hpp"
#include "sbp/optimizer.hpp"
#include "sbp/tables.hpp"

using namespace sbp;

namespace {

SchemeParams published_with_aux(const PublishedGrid& g) {
    const auto h = g.spacings();
    const Eigen::VectorXd c = solve_c_aux(g.order / 2, h, ObjectiveConfig{});
    return SchemeParams{g.order / 2, h, std::vector<double>(c.data(), c.data() + c.size()), {}};
}

}  // namespace

TEST_CASE("SBP identity on 101 nodes for every published grid") {
    for (const auto& g : list_grids()) {
        CAPTURE(g.order);
        CAPTURE(g.K);
        const OperatorSet set = assemble_scheme(published_with_aux(g), 100);
        const SbpCheck chk = verify_sbp(set);
        CHECK(chk.matrix_residual <= 1e-10 / set.grid.h);
        CHECK(chk.bilinear_residual <= 1e-10 / set.grid.h);
        CHECK(verify_boundary_order(set, set.p()) < 1e-8);
        CHECK(set.H.minCoeff() > 0.0);
    }
}

TEST_CASE("SBP identity holds for arbitrary free parameters") {
    SchemeParams s{3, {0.5, 0.8}, {0.3, -1.2, 2.0, 0.7}, {}};
    const OperatorSet set = assemble_scheme(s, 60);
    CHECK(verify_sbp(set).max() <= 1e-10 / set.grid.h);
    CHECK(verify_boundary_order(set, 3) < 1e-8);
}

TEST_CASE("interior rows carry the interior stencils") {
    const OperatorSet set = assemble_scheme(SchemeParams{3, {0.6, 0.9}, {0, 0, 0, 0}, {}}, 50);
    const InteriorStencil f = interior_forward_coeffs(3);
    const InteriorStencil b = interior_backward_coeffs(3);
    const Eigen::MatrixXd Dp(set.Dplus), Dm(set.Dminus);
    for (int i = 6; i <= 44; ++i) {
        for (int j = 0; j <= 50; ++j) {
            CHECK(Dp(i, j) * set.grid.h == doctest::Approx(f.at(j - i)).scale(1.0).epsilon(1e-13));
            CHECK(Dm(i, j) * set.grid.h == doctest::Approx(b.at(j - i)).scale(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("right end mirrors the left end") {
    const OperatorSet set = assemble_scheme(SchemeParams{2, {0.64701892}, {0.4}, {}}, 30);
    const Eigen::MatrixXd Dp(set.Dplus), Dm(set.Dminus);
    for (int i = 0; i <= 30; ++i) {
        CHECK(set.H[i] == doctest::Approx(set.H[30 - i]));
        for (int j = 0; j <= 30; ++j) CHECK(Dp(i, j) == doctest::Approx(-Dm(30 - i, 30 - j)).scale(1.0));
    }
}

TEST_CASE("assembled coupling block equals the full-matrix oracle") {
    for (int p = 2; p <= 4; ++p) {
        const int N = GridSpec::min_intervals(p);
        const OperatorSet set = assemble_scheme(SchemeParams{p, {}, std::vector<double>((p - 1) * (p - 1), 0.0), {}}, N,
                                                GridMode::UnitInteriorSpacing);
        const std::vector<double> mu(set.H.data(), set.H.data() + 2 * p);
        const Eigen::MatrixXd ref = oracle::coupling_block(mu, p, N);
        const Eigen::MatrixXd got = Eigen::MatrixXd(set.Dplus).block(0, 2 * p, 2 * p, p + 1);
        CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("mismatched family and grid") {
    const BoundaryFamily f = boundary_family(2, {0.6});
    const Grid g = build_grid({2, 30, {0.7}}, GridMode::ScaledToUnitInterval);
    CHECK_THROWS_AS(assemble(g, f, Eigen::VectorXd::Zero(1)), SbpError);
    const Grid g2 = build_grid({2, 30, {0.6}}, GridMode::ScaledToUnitInterval);
    CHECK_THROWS_AS(assemble(g2, f, Eigen::VectorXd::Zero(3)), SbpError);
}
