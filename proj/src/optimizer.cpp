#include "sbp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "sbp/error.hpp"
#include "sbp/spectra.hpp"

namespace sbp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
    Eigen::VectorXd x;
    double f;
};

double diameter(const std::vector<Vertex>& s) {
    double d = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) d = std::max(d, (s[i].x - s[0].x).cwiseAbs().maxCoeff());
    return d;
}

double h_norm_sq(const Eigen::VectorXd& v, const Eigen::VectorXd& H) { return v.cwiseProduct(v).dot(H); }

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, const NelderMeadOptions& options,
                             const IterationCallback& on_iteration) {
    const int n = static_cast<int>(x0.size());
    NelderMeadResult result;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++result.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : kInf;
    };

    const double f0 = eval(x0);
    if (n == 0 || !std::isfinite(f0)) {
        result.x = x0;
        result.f = f0;
        result.converged = n == 0;
        return result;
    }

    double rho = 1.0, chi = 2.0, gamma = 0.5, sigma = 0.5;
    if (options.adaptive && n > 2) {
        chi = 1.0 + 2.0 / n;
        gamma = 0.75 - 0.5 / n;
        sigma = 1.0 - 1.0 / n;
    }

    std::vector<Vertex> simplex{{x0, f0}};
    for (int i = 0; i < n; ++i) {
        double step = options.initial_step * std::max(std::fabs(x0[i]), options.step_floor);
        Vertex v{x0, kInf};
        for (int tries = 0; tries < 60 && !std::isfinite(v.f); ++tries, step *= 0.5) {
            v.x = x0;
            v.x[i] += step;
            v.f = eval(v.x);
        }
        if (!std::isfinite(v.f)) v = {x0, f0};
        simplex.push_back(v);
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::stable_sort(simplex.begin(), simplex.end(), by_value);

    while (result.iterations < options.max_iterations) {
        if (diameter(simplex) < options.x_tol) {
            result.converged = true;
            break;
        }
        ++result.iterations;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += simplex[i].x;
        centroid /= n;
        Vertex& worst = simplex[n];

        const Eigen::VectorXd xr = centroid + rho * (centroid - worst.x);
        const double fr = eval(xr);
        bool shrink = false;
        if (fr < simplex[0].f) {
            const Eigen::VectorXd xe = centroid + rho * chi * (centroid - worst.x);
            const double fe = eval(xe);
            worst = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < simplex[n - 1].f) {
            worst = {xr, fr};
        } else if (fr < worst.f) {
            const Eigen::VectorXd xc = centroid + gamma * (xr - centroid);
            const double fc = eval(xc);
            if (fc <= fr) {
                worst = {xc, fc};
            } else {
                shrink = true;
            }
        } else {
            const Eigen::VectorXd xcc = centroid - gamma * (centroid - worst.x);
            const double fcc = eval(xcc);
            if (fcc < worst.f) {
                worst = {xcc, fcc};
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (int i = 1; i <= n; ++i) {
                const Eigen::VectorXd xs = simplex[0].x + sigma * (simplex[i].x - simplex[0].x);
                const double fs = eval(xs);
                // an infeasible shrink point keeps the old vertex
                if (std::isfinite(fs)) simplex[i] = {xs, fs};
            }
        }
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
        if (on_iteration) on_iteration(result.iterations, simplex[0].x, simplex[0].f);
    }
    if (!result.converged) result.converged = diameter(simplex) < options.x_tol;
    result.x = simplex[0].x;
    result.f = simplex[0].f;
    return result;
}

SchemeEvaluator::SchemeEvaluator(int p, std::vector<double> h_params, const ObjectiveConfig& config)
    : family_(boundary_family(p, h_params, config.precision_for(p))),
      grid_(build_grid(GridSpec{p, config.probe_N, std::move(h_params)}, GridMode::ScaledToUnitInterval)),
      kappa_(config.kappa_for(p)),
      lambda_int_(lambda_int(p)),
      aux_rcond_(config.aux_rcond) {
    const int nodes = grid_.N() + 1;
    for (int n = 0; n <= 2 * p; ++n) {
        cheb_.emplace_back(nodes);
        cheb_d1_.emplace_back(nodes);
        cheb_d2_.emplace_back(nodes);
    }
    for (int j = 0; j < nodes; ++j) {
        const double s = 2.0 * grid_.nodes[j] - 1.0;
        // T_{n+1} = 2 s T_n - T_{n-1}, differentiated term by term
        cheb_[0][j] = 1.0;
        cheb_d1_[0][j] = 0.0;
        cheb_d2_[0][j] = 0.0;
        if (2 * p >= 1) {
            cheb_[1][j] = s;
            cheb_d1_[1][j] = 1.0;
            cheb_d2_[1][j] = 0.0;
        }
        for (int n = 1; n < 2 * p; ++n) {
            cheb_[n + 1][j] = 2.0 * s * cheb_[n][j] - cheb_[n - 1][j];
            cheb_d1_[n + 1][j] = 2.0 * cheb_[n][j] + 2.0 * s * cheb_d1_[n][j] - cheb_d1_[n - 1][j];
            cheb_d2_[n + 1][j] = 4.0 * cheb_d1_[n][j] + 2.0 * s * cheb_d2_[n][j] - cheb_d2_[n - 1][j];
        }
    }
    // d/dx = 2 d/ds on [0, 1]
    for (int n = 0; n <= 2 * p; ++n) {
        cheb_d1_[n] *= 2.0;
        cheb_d2_[n] *= 4.0;
    }
}

OperatorSet SchemeEvaluator::operators(const Eigen::VectorXd& c) const { return assemble(grid_, family_, c); }

ObjectiveTerms SchemeEvaluator::objective(const Eigen::VectorXd& c, double C) const {
    const OperatorSet set = operators(c);
    ObjectiveTerms t;
    for (int n = p() + 1; n <= 2 * p(); ++n) {
        const Eigen::VectorXd r = set.Dminus * (set.Dplus * cheb_[n]) - cheb_d2_[n];
        t.accuracy += h_norm_sq(r, set.H) / h_norm_sq(cheb_[n], set.H);
    }
    t.spectral_ratio = lambda_full(set) * grid_.h / lambda_int_;
    t.penalty = t.spectral_ratio - kappa_ > 0.0 ? C : 0.0;
    return t;
}

double SchemeEvaluator::aux_objective(const Eigen::VectorXd& c) const {
    const OperatorSet set = operators(c);
    double sum = 0.0;
    for (int n = p() + 1; n <= 2 * p(); ++n) sum += h_norm_sq(set.Dplus * cheb_[n] - cheb_d1_[n], set.H);
    return sum;
}

Eigen::VectorXd SchemeEvaluator::solve_c_aux() const {
    const int dim = dimension();
    const int nodes = grid_.N() + 1;
    const int terms = p();
    auto residual = [&](const Eigen::VectorXd& c) {
        const OperatorSet set = operators(c);
        const Eigen::VectorXd w = set.H.cwiseSqrt();
        Eigen::VectorXd r(nodes * terms);
        for (int k = 0; k < terms; ++k) {
            const int n = p() + 1 + k;
            r.segment(k * nodes, nodes) = w.cwiseProduct(set.Dplus * cheb_[n] - cheb_d1_[n]);
        }
        return r;
    };
    if (dim == 0) return Eigen::VectorXd();
    // r(c) = r0 + G c exactly, since D+ is affine in c and H does not depend on c
    const Eigen::VectorXd r0 = residual(Eigen::VectorXd::Zero(dim));
    Eigen::MatrixXd G(r0.size(), dim);
    for (int k = 0; k < dim; ++k) {
        G.col(k) = residual(Eigen::VectorXd::Unit(dim, k)) - r0;
    }
    // Truncated SVD: directions with sigma_k < aux_rcond * sigma_max only see
    // residual components far below the probe resolution; their exact
    // coefficients explode and are dropped (minimum-norm in that subspace).
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::VectorXd proj = svd.matrixU().transpose() * r0;
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv[k] > aux_rcond_ * sv[0]) coef[k] = -proj[k] / sv[k];
    }
    return svd.matrixV() * coef;
}

double objective_E(int p, const std::vector<double>& h_params, const Eigen::VectorXd& c, const ObjectiveConfig& config,
                   double C) {
    try {
        return SchemeEvaluator(p, h_params, config).objective(c, C).total();
    } catch (const SbpError&) {
        return kInf;
    }
}

double aux_objective(int p, const std::vector<double>& h_params, const Eigen::VectorXd& c,
                     const ObjectiveConfig& config) {
    try {
        return SchemeEvaluator(p, h_params, config).aux_objective(c);
    } catch (const SbpError&) {
        return kInf;
    }
}

Eigen::VectorXd solve_c_aux(int p, const std::vector<double>& h_params, const ObjectiveConfig& config) {
    return SchemeEvaluator(p, h_params, config).solve_c_aux();
}

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

class Search {
public:
    Search(int p, const ObjectiveConfig& config, OptimizationResult& out) : p_(p), config_(config), out_(out) {}

    // E(h, c) with c = C_aux(h) when `c` is null.
    ObjectiveTerms evaluate(const std::vector<double>& h, const Eigen::VectorXd* c) {
        for (double v : h) {
            if (!(v > 0.0)) return {kInf, 0.0, kInf};
        }
        try {
            SchemeEvaluator ev(p_, h, config_);
            const Eigen::VectorXd cc = c ? *c : ev.solve_c_aux();
            return ev.objective(cc, out_.C);
        } catch (const SbpError&) {
            return {kInf, 0.0, kInf};
        }
    }

    void log(const std::string& stage, int iteration, double E, double ratio) {
        out_.history.push_back({stage, iteration, E, ratio > 0.0 && std::isfinite(ratio) ? 1.0 / ratio : 0.0});
    }

    NelderMeadResult run_h(const std::string& stage, const std::vector<double>& h0, const Eigen::VectorXd* c,
                           const NelderMeadOptions& nm) {
        std::map<std::vector<double>, double> ratios;
        auto f = [&](const Eigen::VectorXd& x) {
            const ObjectiveTerms t = evaluate(to_std(x), c);
            ratios[to_std(x)] = t.spectral_ratio;
            return t.total();
        };
        auto cb = [&](int it, const Eigen::VectorXd& best, double fb) { log(stage, it, fb, ratios[to_std(best)]); };
        return nelder_mead(f, to_eigen(h0), nm, cb);
    }

    NelderMeadResult run_c(const std::string& stage, const SchemeEvaluator& ev, const Eigen::VectorXd& c0,
                           const NelderMeadOptions& nm) {
        std::map<std::vector<double>, double> ratios;
        auto f = [&](const Eigen::VectorXd& x) {
            const ObjectiveTerms t = ev.objective(x, out_.C);
            ratios[to_std(x)] = t.spectral_ratio;
            return t.total();
        };
        auto cb = [&](int it, const Eigen::VectorXd& best, double fb) { log(stage, it, fb, ratios[to_std(best)]); };
        return nelder_mead(f, c0, nm, cb);
    }

private:
    int p_;
    ObjectiveConfig config_;
    OptimizationResult& out_;
};

void finalize(OptimizationResult& r) {
    r.mu = solve_DS(r.p, r.h_params, Precision::High);
}

}  // namespace

OptimizationResult optimize_c(int p, const std::vector<double>& h_params, const ObjectiveConfig& config,
                              const OptimizeOptions& options) {
    OptimizationResult r;
    r.p = p;
    r.h_params = h_params;
    r.kappa = config.kappa_for(p);
    const SchemeEvaluator ev(p, h_params, config);
    const Eigen::VectorXd c0 = ev.solve_c_aux();
    const ObjectiveTerms t0 = ev.objective(c0, 0.0);
    r.C = config.C > 0.0 ? config.C : 1e3 * std::max(t0.accuracy, std::numeric_limits<double>::min());
    r.E_initial = ev.objective(c0, r.C).total();
    Search search(p, config, r);
    search.log("c_aux", 0, r.E_initial, t0.spectral_ratio);
    const NelderMeadResult nm = search.run_c("c1", ev, c0, options.c_search);
    r.c = to_std(nm.f <= r.E_initial ? nm.x : c0);
    r.E_value = std::min(nm.f, r.E_initial);
    finalize(r);
    return r;
}

OptimizationResult optimize_scheme(int p, int K, const ObjectiveConfig& config, const OptimizeOptions& options) {
    if (p < 1 || K < 0 || K > p - 1) {
        throw SbpError(ErrorCode::InvalidArgument,
                       "need 0 <= K <= p-1, got p = " + std::to_string(p) + ", K = " + std::to_string(K));
    }
    if (K == 0) return optimize_c(p, {}, config, options);

    OptimizationResult r;
    r.p = p;
    r.kappa = config.kappa_for(p);
    std::vector<double> h = options.initial_h.empty() ? std::vector<double>(K, 0.5) : options.initial_h;
    if (static_cast<int>(h.size()) != K) {
        throw SbpError(ErrorCode::ShapeMismatch, "initial h has " + std::to_string(h.size()) + " entries, K = " +
                                                     std::to_string(K));
    }

    Search search(p, config, r);
    r.C = 1.0;
    ObjectiveTerms t0 = search.evaluate(h, nullptr);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> spread(0.2, 1.2);
    for (int attempt = 0; attempt < options.restarts && !std::isfinite(t0.accuracy); ++attempt) {
        for (double& v : h) v = spread(rng);
        t0 = search.evaluate(h, nullptr);
    }
    if (!std::isfinite(t0.accuracy)) {
        throw SbpError(ErrorCode::Infeasible, "no start point with positive norm found for 2p = " +
                                                  std::to_string(2 * p) + ", K = " + std::to_string(K));
    }
    r.C = config.C > 0.0 ? config.C : 1e3 * std::max(t0.accuracy, std::numeric_limits<double>::min());
    r.E_initial = search.evaluate(h, nullptr).total();
    search.log("start", 0, r.E_initial, t0.spectral_ratio);

    // h_0 = argmin_h E(h, C_aux(h))
    NelderMeadResult nh = search.run_h("h0", h, nullptr, options.h_search);
    h = to_std(nh.x);
    double best = nh.f;
    Eigen::VectorXd c = SchemeEvaluator(p, h, config).solve_c_aux();

    for (int i = 1; i <= options.alternations; ++i) {
        const SchemeEvaluator ev(p, h, config);
        const NelderMeadResult nc = search.run_c("c" + std::to_string(i), ev, c, options.c_search);
        if (nc.f <= best) {
            c = nc.x;
            best = nc.f;
        }
        nh = search.run_h("h" + std::to_string(i), h, &c, options.h_search);
        if (nh.f <= best) {
            h = to_std(nh.x);
            best = nh.f;
        }
    }
    r.h_params = h;
    r.c = to_std(c);
    r.E_value = best;
    finalize(r);
    return r;
}

}  // namespace sbp
