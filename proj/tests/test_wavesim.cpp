#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sbp/error.hpp"
#include "sbp/optimizer.hpp"
#include "sbp/spectra.hpp"
#include "sbp/wavesim.hpp"

using namespace sbp;

namespace {

OperatorSet fourth_order(int nodes) {
    return assemble_scheme(SchemeParams{2, {0.64701892}, {0.0}, {}}, nodes - 1, GridMode::ScaledToUnitInterval);
}

}  // namespace

TEST_CASE("exact solution equals a brute-force image sum") {
    const WaveProblem wp;
    double worst = 0.0;
    for (double t : {0.0, 0.13, 0.5, 0.77, 1.9}) {
        for (int i = 0; i <= 50; ++i) {
            const double x = -0.5 + i / 50.0;
            worst = std::max(worst, std::fabs(exact_solution(wp, x, t) - oracle::image_sum(x, t, 1.0, 0.05, 200)));
        }
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("exact solution satisfies the initial and boundary conditions") {
    const WaveProblem wp;
    CHECK(exact_solution(wp, 0.0, 0.0) == doctest::Approx(1.0));
    const double d = 1e-5;
    for (double t : {0.1, 0.45, 0.6}) {
        const double slope = (exact_solution(wp, 0.5, t) - exact_solution(wp, 0.5 - d, t)) / d;
        CHECK(std::fabs(slope) < 1e-3);
    }
}

TEST_CASE("order fit recovers a synthetic power law") {
    std::vector<double> h, e;
    for (int n : {100, 120, 150, 200, 300}) {
        h.push_back(1.0 / n);
        e.push_back(3.7 * std::pow(1.0 / n, 4));
    }
    CHECK(estimate_order(h, e) == doctest::Approx(4.0).epsilon(1e-12));
    const std::vector<double> two{0.1, 0.2};
    CHECK_THROWS_AS(estimate_order(two, two), SbpError);
    const std::vector<double> same{0.1, 0.1, 0.1};
    CHECK_THROWS_AS(estimate_order(same, std::vector<double>{1, 2, 3}), SbpError);
}

TEST_CASE("discrete energy is conserved") {
    const OperatorSet set = fourth_order(61);
    const double dt = 0.5 * 2.0 / lambda_full(set);
    for (int order : {2, 4}) {
        WaveIntegrator w(second_derivative(set), set.H, dt, order);
        Eigen::VectorXd u0(set.size());
        for (int i = 0; i < set.size(); ++i) u0[i] = std::exp(-std::pow((set.grid.nodes[i] - 0.4) / 0.1, 2));
        w.start(u0);
        const double e0 = w.energy();
        CHECK(e0 > 0.0);
        for (int n = 0; n < 2000; ++n) w.step();
        CHECK(w.energy() == doctest::Approx(e0).epsilon(1e-9));
    }
}

TEST_CASE("alternating data does not grow") {
    const OperatorSet set = fourth_order(101);
    const double dt = 0.9 * 2.0 / lambda_full(set);
    WaveIntegrator w(second_derivative(set), set.H, dt, 2);
    Eigen::VectorXd u0(set.size());
    for (int i = 0; i < set.size(); ++i) u0[i] = i % 2 == 0 ? 1.0 : -1.0;
    w.start(u0);
    const double e0 = w.energy();
    double first = 0.0, second = 0.0;
    for (int n = 1; n <= 1000; ++n) {
        w.step();
        double& env = n <= 500 ? first : second;
        env = std::max(env, w.current().lpNorm<Eigen::Infinity>());
    }
    CHECK(second <= 1.05 * first);
    CHECK(w.energy() == doctest::Approx(e0).epsilon(1e-12));
}

TEST_CASE("simulation converges at the expected rate") {
    const SimResult coarse = simulate(WaveProblem{}, fourth_order(101), SimOptions{0.5, 0, {0.2}});
    const SimResult fine = simulate(WaveProblem{}, fourth_order(201), SimOptions{0.5, 0, {0.2}});
    CHECK(coarse.times.back() == doctest::Approx(0.2).epsilon(1e-14));
    const double rate = std::log(coarse.errors.back() / fine.errors.back()) / std::log(2.0);
    CHECK(rate > 3.0);
}

TEST_CASE("unstable time steps are reported") {
    const OperatorSet set = fourth_order(61);
    SimOptions opts{1.5, 2, {2.0}};
    CHECK_THROWS_AS(simulate(WaveProblem{}, set, opts), SbpError);
}

TEST_CASE("parallel convergence study equals the serial one") {
    const BoundaryFamily f = boundary_family(2, {0.64701892}, Precision::High);
    const std::vector<int> nodes{101, 121, 151};
    const Eigen::VectorXd c = Eigen::VectorXd::Zero(1);
    const ConvergenceReport a = convergence_study(WaveProblem{}, f, c, 0.3, nodes, {}, 1);
    const ConvergenceReport b = convergence_study(WaveProblem{}, f, c, 0.3, nodes, {}, 3);
    REQUIRE(a.points.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(a.points[i].error == b.points[i].error);
    CHECK(a.order == b.order);
}
