#include <cmath>

#include "doctest.h"
#include "sbp/error.hpp"
#include "sbp/grid.hpp"

using namespace sbp;

TEST_CASE("scaled grid spans the unit interval") {
    const GridSpec spec{4, 100, {0.3, 0.7}};
    const Grid g = build_grid(spec, GridMode::ScaledToUnitInterval);
    REQUIRE(g.nodes.size() == 101);
    CHECK(g.nodes.front() == 0.0);
    CHECK(g.nodes.back() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.h == doctest::Approx(1.0 / (100 - 4 + 2 * 1.0)));
    CHECK(g.spacing(1) == doctest::Approx(0.3 * g.h));
    CHECK(g.spacing(2) == doctest::Approx(0.7 * g.h));
    CHECK(g.spacing(3) == doctest::Approx(g.h));
    CHECK(g.spacing(100) == doctest::Approx(0.3 * g.h));
    for (int i = 0; i <= 100; ++i) CHECK(g.nodes[i] + g.nodes[100 - i] == doctest::Approx(1.0));
}

TEST_CASE("unit grid has interior spacing one") {
    const Grid g = build_grid({2, 20, {0.5}}, GridMode::UnitInteriorSpacing);
    CHECK(g.h == 1.0);
    CHECK(g.nodes[1] == 0.5);
    CHECK(g.nodes[2] == 1.5);
    CHECK(g.nodes.back() == doctest::Approx(19.0));
}

TEST_CASE("grid validation") {
    auto code = [](const GridSpec& s) {
        try {
            build_grid(s, GridMode::ScaledToUnitInterval);
        } catch (const SbpError& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CHECK(code({3, GridSpec::min_intervals(3) - 1, {}}) == ErrorCode::NodeCountTooSmall);
    CHECK(code({3, 50, {0.5, -0.1}}) == ErrorCode::NonpositiveSpacing);
    CHECK(code({3, 50, {0.5, 0.0}}) == ErrorCode::NonpositiveSpacing);
    CHECK(code({3, 50, {0.5, 0.5, 0.5}}) == ErrorCode::InvalidArgument);
    CHECK_NOTHROW(build_grid({3, GridSpec::min_intervals(3), {0.5, 0.5}}, GridMode::ScaledToUnitInterval));
}

TEST_CASE("interior node range") {
    const auto [lo, hi] = interior_node_range({3, 40, {}});
    CHECK(lo == 6);
    CHECK(hi == 34);
}
