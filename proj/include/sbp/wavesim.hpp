#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sbp/boundary.hpp"
#include "sbp/operators.hpp"

namespace sbp {

/// u_tt = u_xx on [left, right], Neumann ends, Gaussian initial profile
/// centred mid-interval, at rest.
struct WaveProblem {
    double left = -0.5;
    double right = 0.5;
    double sigma = 0.05;

    double initial(double x) const;
    double length() const { return right - left; }
};

/// d'Alembert solution with the profile extended by even reflection about
/// both ends; the images are spaced right - left apart.
double exact_solution(const WaveProblem& problem, double x, double t);

/// A = -H^{-1} (D+)^T H D+, the homogeneous-Neumann second derivative.
SparseRowMatrix second_derivative(const OperatorSet& set);

/// Three-level scheme u^{n+1} = 2 u^n - u^{n-1} + 2 sum_{m=1}^{M} dt^{2m}/(2m)! A^m u^n
/// with M = time_order / 2. time_order = 2 is the classical leapfrog.
class WaveIntegrator {
public:
    WaveIntegrator(SparseRowMatrix A, Eigen::VectorXd H, double dt, int time_order);

    /// Sets u^0 and takes the first step from zero initial velocity.
    void start(const Eigen::VectorXd& u0);
    void step();

    const Eigen::VectorXd& current() const { return u_; }
    double time() const { return steps_ * dt_; }
    int steps() const { return steps_; }
    double dt() const { return dt_; }
    /// ||(u^{n+1} - u^n)/dt||_H^2 - <u^{n+1}, A_dt u^n>_H, conserved by the scheme.
    double energy() const;

private:
    Eigen::VectorXd apply_series(const Eigen::VectorXd& u, bool half) const;

    SparseRowMatrix A_;
    Eigen::VectorXd H_;
    double dt_;
    int half_order_;
    Eigen::VectorXd u_prev_, u_;
    int steps_ = 0;
};

struct SimOptions {
    double cfl_fraction = 0.5;        ///< dt = cfl_fraction * 2 / lambda_full (before adjustment)
    int time_order = 0;               ///< even; 2 gives plain leapfrog, 0 matches the spatial order 2p
    std::vector<double> sample_times;  ///< errors recorded at the step nearest each time
    double instability_threshold = 1e3;
};

struct SimResult {
    int nodes = 0;
    double h = 0.0;
    double dt = 0.0;
    int steps = 0;
    std::vector<double> times;   ///< actual step times of the samples
    std::vector<double> errors;  ///< C-norm error at those times

    double max_error() const;
};

/// Integrates to the last sample time. dt is reduced so that the last sample
/// time is hit exactly; earlier samples use the nearest step. Throws
/// SbpError(Instability) when the error exceeds the threshold.
SimResult simulate(const WaveProblem& problem, const OperatorSet& set, const SimOptions& options);

/// C-norm error series at the given times.
SimResult error_vs_time(const WaveProblem& problem, const OperatorSet& set, std::span<const double> times,
                        SimOptions options = {});

/// Least-squares slope of log(error) against log(h). Needs >= 3 points.
double estimate_order(std::span<const double> h, std::span<const double> errors);

const std::vector<int>& default_node_counts();

struct ConvergencePoint {
    int nodes = 0;
    double h = 0.0;
    double dt = 0.0;
    double error = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergencePoint> points;
    double order = 0.0;
};

/// Errors at time t over several grids of one scheme. Runs `workers`
/// simulations concurrently (<= 0: from SBPGEN_WORKERS, else hardware threads).
ConvergenceReport convergence_study(const WaveProblem& problem, const BoundaryFamily& family, const Eigen::VectorXd& c,
                                    double t, std::span<const int> node_counts, const SimOptions& options = {},
                                    int workers = 0);

int worker_count(int requested);

}  // namespace sbp
