#include "sbp/wavesim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "sbp/error.hpp"
#include "sbp/spectra.hpp"

namespace sbp {

double WaveProblem::initial(double x) const {
    const double s = (x - 0.5 * (left + right)) / sigma;
    return std::exp(-0.5 * s * s);
}

double exact_solution(const WaveProblem& problem, double x, double t) {
    const double L = problem.length();
    const double center = 0.5 * (problem.left + problem.right);
    // Images of a profile centred mid-interval sit at center + k L for all k.
    const double reach = 40.0 * problem.sigma;  // exp(-800) < 1e-300
    auto images = [&](double y) {
        const double r = (y - center) / L;
        double sum = 0.0;
        const long lo = static_cast<long>(std::ceil(r - reach / L));
        const long hi = static_cast<long>(std::floor(r + reach / L));
        for (long k = lo; k <= hi; ++k) sum += problem.initial(y - k * L);
        return sum;
    };
    return 0.5 * (images(x - t) + images(x + t));
}

SparseRowMatrix second_derivative(const OperatorSet& set) {
    const Eigen::VectorXd inv_h = set.H.cwiseInverse();
    SparseRowMatrix hd = set.H.asDiagonal() * set.Dplus;
    SparseRowMatrix a = -(inv_h.asDiagonal() * SparseRowMatrix(set.Dplus.transpose() * hd));
    a.prune(0.0);
    return a;
}

WaveIntegrator::WaveIntegrator(SparseRowMatrix A, Eigen::VectorXd H, double dt, int time_order)
    : A_(std::move(A)), H_(std::move(H)), dt_(dt), half_order_(time_order / 2) {
    if (time_order < 2 || time_order % 2 != 0) {
        throw SbpError(ErrorCode::InvalidArgument, "time order must be even and >= 2, got " + std::to_string(time_order));
    }
    if (!(dt > 0.0)) throw SbpError(ErrorCode::InvalidArgument, "time step must be positive");
}

// sum_{m=1}^{M} w_m dt^{2m}/(2m)! A^m u, with w_m = 2 (full) or 1 (first step).
Eigen::VectorXd WaveIntegrator::apply_series(const Eigen::VectorXd& u, bool half) const {
    Eigen::VectorXd term = u;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(u.size());
    double coef = 1.0;
    for (int m = 1; m <= half_order_; ++m) {
        term = A_ * term;
        coef *= dt_ * dt_ / ((2.0 * m - 1.0) * (2.0 * m));
        sum += coef * term;
    }
    return half ? sum : Eigen::VectorXd(2.0 * sum);
}

void WaveIntegrator::start(const Eigen::VectorXd& u0) {
    u_prev_ = u0;
    u_ = u0 + apply_series(u0, true);
    steps_ = 1;
}

void WaveIntegrator::step() {
    Eigen::VectorXd next = 2.0 * u_ - u_prev_ + apply_series(u_, false);
    u_prev_ = std::move(u_);
    u_ = std::move(next);
    ++steps_;
}

double WaveIntegrator::energy() const {
    const Eigen::VectorXd v = (u_ - u_prev_) / dt_;
    // A_dt u^n recovered from the scheme itself: (u^{n+1} - 2u^n + u^{n-1}) / dt^2
    const Eigen::VectorXd a_un = apply_series(u_prev_, false) / (dt_ * dt_);
    return v.cwiseProduct(v).dot(H_) - u_.cwiseProduct(a_un).dot(H_);
}

double SimResult::max_error() const { return errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end()); }

namespace {

Eigen::VectorXd physical_nodes(const WaveProblem& problem, const OperatorSet& set) {
    const auto& x = set.grid.nodes;
    const double span = x.back() - x.front();
    Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = problem.left + (x[i] - x.front()) / span * problem.length();
    }
    return out;
}

}  // namespace

SimResult simulate(const WaveProblem& problem, const OperatorSet& set, const SimOptions& options) {
    if (!(options.cfl_fraction > 0.0 && options.cfl_fraction < 1.0)) {
        throw SbpError(ErrorCode::InvalidArgument, "cfl fraction must lie in (0, 1)");
    }
    std::vector<double> samples = options.sample_times;
    std::sort(samples.begin(), samples.end());
    if (samples.empty() || samples.front() < 0.0) {
        throw SbpError(ErrorCode::InvalidArgument, "need nonnegative sample times");
    }
    const double span = set.grid.nodes.back() - set.grid.nodes.front();
    const double scale = problem.length() / span;
    // Operators live on the grid coordinate; rescale to the physical interval.
    OperatorSet phys = set;
    phys.Dplus /= scale;
    phys.Dminus /= scale;
    phys.H *= scale;

    const double lam = lambda_full(phys);
    const double t_end = samples.back();
    double dt = options.cfl_fraction * 2.0 / lam;
    const int total = t_end > 0.0 ? static_cast<int>(std::ceil(t_end / dt - 1e-12)) : 0;
    if (total > 0) dt = t_end / total;

    SimResult result;
    result.nodes = set.size();
    result.h = set.grid.h * scale;
    result.dt = dt;
    result.steps = total;

    const Eigen::VectorXd x = physical_nodes(problem, set);
    Eigen::VectorXd u0(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) u0[i] = problem.initial(x[i]);

    auto error_at = [&](const Eigen::VectorXd& u, double t) {
        double e = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) e = std::max(e, std::fabs(u[i] - exact_solution(problem, x[i], t)));
        return e;
    };

    std::vector<int> sample_steps;
    for (double s : samples) {
        sample_steps.push_back(std::min(total, static_cast<int>(std::lround(s / dt))));
    }
    std::size_t next = 0;
    auto record = [&](int n, const Eigen::VectorXd& u) {
        while (next < sample_steps.size() && sample_steps[next] == n) {
            const double t = n == total ? t_end : n * dt;
            const double e = error_at(u, t);
            if (!(e <= options.instability_threshold)) {
                throw SbpError(ErrorCode::Instability, "error " + std::to_string(e) + " at t = " + std::to_string(t) +
                                                           " on " + std::to_string(result.nodes) +
                                                           " nodes; reduce the cfl fraction");
            }
            result.times.push_back(t);
            result.errors.push_back(e);
            ++next;
        }
    };

    record(0, u0);
    if (total == 0) return result;
    const int time_order = options.time_order > 0 ? options.time_order : 2 * set.p();
    WaveIntegrator integrator(second_derivative(phys), phys.H, dt, time_order);
    integrator.start(u0);
    record(1, integrator.current());
    const int check_every = 64;
    while (integrator.steps() < total) {
        integrator.step();
        const int n = integrator.steps();
        if (n % check_every == 0 && !(integrator.current().cwiseAbs().maxCoeff() <= options.instability_threshold)) {
            throw SbpError(ErrorCode::Instability, "solution exceeded " + std::to_string(options.instability_threshold) +
                                                       " at t = " + std::to_string(n * dt) + " on " +
                                                       std::to_string(result.nodes) + " nodes");
        }
        record(n, integrator.current());
    }
    return result;
}

SimResult error_vs_time(const WaveProblem& problem, const OperatorSet& set, std::span<const double> times,
                        SimOptions options) {
    options.sample_times.assign(times.begin(), times.end());
    return simulate(problem, set, options);
}

double estimate_order(std::span<const double> h, std::span<const double> errors) {
    if (h.size() != errors.size() || h.size() < 3) {
        throw SbpError(ErrorCode::DegenerateFit, "need at least 3 (h, error) pairs, got " + std::to_string(h.size()));
    }
    const double n = static_cast<double>(h.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0) || !(errors[i] > 0.0)) {
            throw SbpError(ErrorCode::DegenerateFit, "spacings and errors must be positive");
        }
        sx += std::log(h[i]);
        sy += std::log(errors[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double dx = std::log(h[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(errors[i]) - my);
    }
    if (!(sxx > 1e-300)) throw SbpError(ErrorCode::DegenerateFit, "all grids have the same spacing");
    return sxy / sxx;
}

const std::vector<int>& default_node_counts() {
    static const std::vector<int> counts{101, 111, 121, 131, 151, 171, 201, 231, 261, 301};
    return counts;
}

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SBPGEN_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ConvergenceReport convergence_study(const WaveProblem& problem, const BoundaryFamily& family, const Eigen::VectorXd& c,
                                    double t, std::span<const int> node_counts, const SimOptions& options,
                                    int workers) {
    ConvergenceReport report;
    report.points.resize(node_counts.size());
    SimOptions opts = options;
    opts.sample_times = {t};

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(node_counts.size());
    auto work = [&] {
        for (std::size_t i = next++; i < node_counts.size(); i = next++) {
            try {
                const Grid grid = build_grid(GridSpec{family.p, node_counts[i] - 1, family.h_params},
                                             GridMode::ScaledToUnitInterval);
                const SimResult r = simulate(problem, assemble(grid, family, c), opts);
                report.points[i] = {node_counts[i], r.h, r.dt, r.errors.back()};
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const int n_workers = std::min<int>(worker_count(workers), static_cast<int>(node_counts.size()));
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    std::vector<double> hs, es;
    for (const auto& p : report.points) {
        hs.push_back(p.h);
        es.push_back(p.error);
    }
    report.order = estimate_order(hs, es);
    return report;
}

}  // namespace sbp
