#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbp/boundary.hpp"
#include "sbp/operators.hpp"

namespace sbp {

struct NelderMeadOptions {
    double x_tol = 1e-10;          ///< stop when the simplex diameter (inf-norm) drops below this
    int max_iterations = 2000;
    double initial_step = 0.05;    ///< relative step for the initial simplex
    double step_floor = 0.005;     ///< relative steps are taken w.r.t. max(|x_i|, step_floor)
    bool adaptive = false;         ///< dimension-dependent coefficients (helps for n > 5)
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
using IterationCallback = std::function<void(int iteration, const Eigen::VectorXd& best, double f_best)>;

/// Derivative-free simplex minimization. Points where f is not finite are
/// treated as a barrier and never enter the simplex.
NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& options = {},
                             const IterationCallback& on_iteration = {});

/// Constants of the objective functional.
struct ObjectiveConfig {
    double C = 0.0;      ///< penalty weight; <= 0 selects 1e3 x the unpenalized value at the start point
    double kappa = 0.0;  ///< spectral threshold; <= 0 selects default_kappa(p)
    int probe_N = 100;   ///< probe grid has probe_N + 1 nodes on [0, 1]
    Precision precision = Precision::LongDouble;  ///< boundary family precision for 2p <= 8
    double aux_rcond = 1e-9;  ///< relative singular-value cutoff of the C_aux least-squares solve

    static double default_kappa(int p) { return 2 * p >= 8 ? 1.0 / 0.12 : 5.0; }
    double kappa_for(int p) const { return kappa > 0.0 ? kappa : default_kappa(p); }
    /// Extended precision is not enough to resolve the corner system beyond 2p = 8.
    Precision precision_for(int p) const { return p >= 5 ? Precision::High : precision; }
};

struct ObjectiveTerms {
    double accuracy = 0.0;  ///< sum_n ||D-D+ T_n - T_n''||_H^2 / ||T_n||_H^2, n = p+1..2p
    double penalty = 0.0;   ///< C or 0
    double spectral_ratio = 0.0;  ///< lambda_full / lambda_int
    double total() const { return accuracy + penalty; }
};

/// Objective evaluation with (p, h) fixed: the boundary family and probe grid
/// are built once and reused for every c.
class SchemeEvaluator {
public:
    /// Throws SbpError (NonpositiveMu, ...) when h is inadmissible.
    SchemeEvaluator(int p, std::vector<double> h_params, const ObjectiveConfig& config);

    int p() const { return family_.p; }
    int dimension() const { return family_.dimension(); }
    const BoundaryFamily& family() const { return family_; }
    const Grid& probe_grid() const { return grid_; }

    OperatorSet operators(const Eigen::VectorXd& c) const;
    ObjectiveTerms objective(const Eigen::VectorXd& c, double C) const;
    double aux_objective(const Eigen::VectorXd& c) const;
    /// argmin_c of aux_objective over the numerically resolved directions of
    /// the design matrix (truncated SVD, minimum norm).
    Eigen::VectorXd solve_c_aux() const;

private:
    BoundaryFamily family_;
    Grid grid_;
    double kappa_;
    double lambda_int_;
    double aux_rcond_;
    std::vector<Eigen::VectorXd> cheb_, cheb_d1_, cheb_d2_;
};

/// Objective functional; +inf when h gives a nonpositive norm.
double objective_E(int p, const std::vector<double>& h_params, const Eigen::VectorXd& c, const ObjectiveConfig& config,
                   double C);
double aux_objective(int p, const std::vector<double>& h_params, const Eigen::VectorXd& c,
                     const ObjectiveConfig& config);
Eigen::VectorXd solve_c_aux(int p, const std::vector<double>& h_params, const ObjectiveConfig& config);

struct OptimizationLogEntry {
    std::string stage;
    int iteration = 0;
    double E = 0.0;
    double spectral_ratio = 0.0;  ///< lambda_int / lambda_full of the best point
};

struct OptimizeOptions {
    std::uint64_t seed = 1;
    int alternations = 2;
    int restarts = 5;                ///< random restarts if the initial h is infeasible
    std::vector<double> initial_h;   ///< default: all 0.5
    NelderMeadOptions h_search{};
    NelderMeadOptions c_search{1e-10, 2000, 0.05, 0.05, true};
};

struct OptimizationResult {
    int p = 0;
    std::vector<double> h_params;
    std::vector<double> c;
    std::vector<double> mu;
    double E_value = 0.0;
    double E_initial = 0.0;
    double C = 0.0;
    double kappa = 0.0;
    std::vector<OptimizationLogEntry> history;

    SchemeParams scheme() const { return SchemeParams{p, h_params, c, mu}; }
};

/// Alternating simplex search over (h, c): first h with c = C_aux(h), then
/// `alternations` rounds of c-then-h searches.
OptimizationResult optimize_scheme(int p, int K, const ObjectiveConfig& config, const OptimizeOptions& options = {});

/// c minimizing E with h fixed, starting from C_aux(h).
OptimizationResult optimize_c(int p, const std::vector<double>& h_params, const ObjectiveConfig& config,
                              const OptimizeOptions& options = {});

}  // namespace sbp
