// sbpgen: generate, validate and exercise SBP operators on grids with
// shifted boundary nodes.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbp/error.hpp"
#include "sbp/io.hpp"
#include "sbp/optimizer.hpp"
#include "sbp/spectra.hpp"
#include "sbp/study.hpp"
#include "sbp/tables.hpp"
#include "sbp/wavesim.hpp"

namespace fs = std::filesystem;
using namespace sbp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUsage = 64;

struct Common {
    std::string out_dir = ".";
    int workers = 0;
};

struct ObjectiveFlags {
    double C = 0.0;
    double kappa = 0.0;
    int probe = 100;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--C", C, "penalty weight (default: 1e3 x E at the start point)");
        cmd->add_option("--kappa", kappa, "spectral threshold lambda_full/lambda_int (default by order)");
        cmd->add_option("--probe", probe, "probe grid intervals for the objective")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "seed for restarts from random spacings");
    }
    ObjectiveConfig config() const {
        ObjectiveConfig c;
        c.C = C;
        c.kappa = kappa;
        c.probe_N = probe;
        return c;
    }
    OptimizeOptions options() const {
        OptimizeOptions o;
        o.seed = seed;
        return o;
    }
    Json to_json() const { return {{"C", C}, {"kappa", kappa}, {"probe", probe}, {"seed", seed}}; }
};

struct SimFlags {
    double cfl = 0.5;
    int time_order = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--cfl", cfl, "fraction of the stability limit 2/lambda_full")->check(CLI::Range(1e-6, 0.999));
        cmd->add_option("--time-order", time_order, "even order of the time stepper; 2 = leapfrog, 0 = match 2p");
    }
    SimOptions options() const {
        SimOptions o;
        o.cfl_fraction = cfl;
        o.time_order = time_order;
        return o;
    }
};

fs::path output_path(const Common& common, const std::string& name) {
    fs::create_directories(common.out_dir);
    return fs::path(common.out_dir) / name;
}

std::pair<int, int> parse_key(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--scheme", "expected 2p,K such as 8,2");
    try {
        return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--scheme", "expected 2p,K such as 8,2");
    }
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_real(item));
    }
    return out;
}

std::string scheme_tag(int order, int K) { return "2p" + std::to_string(order) + "_K" + std::to_string(K); }

void write_log(const fs::path& path, const OptimizationResult& r) {
    CsvWriter csv(path, {"stage", "iteration", "E", "lambda_ratio"});
    for (const auto& e : r.history) csv.cell(e.stage).cell(e.iteration).cell(e.E).cell(e.spectral_ratio).end_row();
    csv.close();
}

OperatorSet load_or_rederive(const std::string& scheme_file, const std::string& key, int nodes,
                             const ObjectiveFlags& obj, RunManifest& manifest) {
    if (!scheme_file.empty()) {
        manifest.add_input(scheme_file);
        const SchemeParams s = scheme_from_json(read_json(scheme_file));
        return assemble_scheme(s, nodes - 1);
    }
    const auto [order, K] = parse_key(key);
    const OptimizationResult r = rederive_scheme(order, K, obj.config(), obj.options());
    return assemble_scheme(r.scheme(), nodes - 1);
}

int cmd_generate(const Common& common, int order, int K, int nodes, const ObjectiveFlags& obj) {
    if (order % 2 != 0 || order < 2) throw CLI::ValidationError("--order", "must be even");
    RunManifest manifest("generate", {{"order", order}, {"shifted", K}, {"nodes", nodes}, {"objective", obj.to_json()}});
    const OptimizationResult r = optimize_scheme(order / 2, K, obj.config(), obj.options());
    const OperatorSet set = assemble_scheme(r.scheme(), nodes - 1);
    const std::string tag = scheme_tag(order, K);
    Json j = operator_set_to_json(set);
    j["E"] = format_real(r.E_value);
    j["C"] = format_real(r.C);
    j["kappa"] = format_real(r.kappa);
    const fs::path scheme_path = output_path(common, tag + ".json");
    const fs::path log_path = output_path(common, tag + "_log.csv");
    write_json(scheme_path, j);
    write_log(log_path, r);
    manifest.add_output(scheme_path);
    manifest.add_output(log_path);
    manifest.write(output_path(common, tag + ".manifest.json"));
    std::printf("2p = %d, K = %d: E = %.6g, h =", order, K, r.E_value);
    for (double h : r.h_params) std::printf(" %.17g", h);
    std::printf("\nwrote %s\n", scheme_path.string().c_str());
    return kExitOk;
}

int cmd_tables_list() {
    std::printf("grids (interior spacing 1):\n");
    for (const auto& g : list_grids()) {
        std::printf("  2p = %2d  K = %d  h =", g.order, g.K);
        for (const auto& h : g.h_params) std::printf(" %s", h.c_str());
        std::printf("\n");
    }
    std::printf("norm coefficients:\n");
    for (const auto& s : list_schemes()) {
        std::printf("  %s  2p = %2d  K = %d  mu =", s.label.c_str(), s.order, s.K);
        for (const auto& m : s.mu) std::printf(" %s", m.c_str());
        std::printf("\n");
    }
    return kExitOk;
}

int cmd_tables_validate(const std::string& key) {
    std::vector<const PublishedScheme*> targets;
    if (key.empty()) {
        for (const auto& s : list_schemes()) targets.push_back(&s);
    } else {
        const auto [order, K] = parse_key(key);
        const PublishedScheme* s = find_scheme(order, K);
        if (!s) throw CLI::ValidationError("--scheme", "no published norm for " + key);
        targets.push_back(s);
    }
    int failures = 0;
    for (const PublishedScheme* s : targets) {
        const ValidationReport r = validate_scheme(*s);
        std::printf("%s  2p = %2d  K = %d  %s  min digits %.1f", s->label.c_str(), s->order, s->K,
                    r.match ? "match   " : "MISMATCH", r.min_digits);
        if (!r.match && r.worst_index > 0) std::printf(" (mu_%d)", r.worst_index);
        std::printf("\n");
        for (const auto& note : r.notes) std::printf("      %s\n", note.c_str());
        failures += r.match ? 0 : 1;
    }
    return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_tables_export(const Common& common, const std::string& key, int nodes) {
    const auto [order, K] = parse_key(key);
    const PublishedGrid* grid = find_grid(order, K);
    if (!grid) throw CLI::ValidationError("--scheme", "no published grid for " + key);
    RunManifest manifest("tables export", {{"scheme", key}, {"nodes", nodes}});
    const std::vector<double> h = grid->spacings();
    SchemeParams s{order / 2, h, {}, {}};
    const Eigen::VectorXd c = solve_c_aux(order / 2, h, ObjectiveConfig{});
    s.c.assign(c.data(), c.data() + c.size());
    s.mu = solve_DS(order / 2, h);
    const OperatorSet set = assemble_scheme(s, nodes - 1);
    const fs::path path = output_path(common, scheme_tag(order, K) + "_published.json");
    write_json(path, operator_set_to_json(set));
    manifest.add_output(path);
    manifest.write(output_path(common, scheme_tag(order, K) + "_published.manifest.json"));
    std::printf("wrote %s\n", path.string().c_str());
    return kExitOk;
}

int cmd_validate(const std::string& file) {
    const OperatorSet stored = operator_set_from_json(read_json(file));
    const SbpCheck sbp = verify_sbp(stored);
    const double order_res = verify_boundary_order(stored, stored.p());
    bool positive = true;
    for (int i = 0; i < stored.size(); ++i) positive = positive && stored.H[i] > 0.0;
    const double tol = 1e-10 / stored.grid.h;
    std::printf("SBP residual      %.3e  (limit %.1e)  %s\n", sbp.max(), tol, sbp.max() <= tol ? "ok" : "FAIL");
    std::printf("boundary order %d  %.3e  %s\n", stored.p(), order_res, order_res <= 1e-8 ? "ok" : "FAIL");
    std::printf("norm positive     %s\n", positive ? "ok" : "FAIL");
    return sbp.max() <= tol && order_res <= 1e-8 && positive ? kExitOk : kExitFailure;
}

int cmd_spectra(const Common& common, const std::string& file, const std::string& key, int nodes,
                const ObjectiveFlags& obj) {
    RunManifest manifest("spectra", {{"scheme_file", file}, {"scheme", key}, {"nodes", nodes}});
    const OperatorSet set = load_or_rederive(file, key, nodes, obj, manifest);
    const SpectralReport r = spectral_report(set);
    const fs::path path = output_path(common, "spectra.csv");
    CsvWriter csv(path, {"order", "K", "nodes", "lambda_full", "lambda_int", "ratio", "courant"});
    csv.cell(2 * set.p()).cell(set.scheme.K()).cell(set.size()).cell(r.lambda_full).cell(r.lambda_int);
    csv.cell(r.ratio).cell(r.courant_interior).end_row();
    csv.close();
    manifest.add_output(path);
    manifest.write(output_path(common, "spectra.manifest.json"));
    std::printf("lambda_full = %.6f/h  lambda_int = %.6f/h  ratio = %.4f  courant = %.4f\n", r.lambda_full,
                r.lambda_int, r.ratio, r.courant_interior);
    return kExitOk;
}

int cmd_simulate(const Common& common, const std::string& file, const std::string& key, int nodes, double t_final,
                 const std::string& samples, const SimFlags& sim, const ObjectiveFlags& obj) {
    RunManifest manifest("simulate", {{"scheme_file", file}, {"scheme", key}, {"grid", nodes}, {"t_final", t_final},
                                      {"samples", samples}, {"cfl", sim.cfl}, {"time_order", sim.time_order}});
    const OperatorSet set = load_or_rederive(file, key, nodes, obj, manifest);
    SimOptions opts = sim.options();
    opts.sample_times = samples.empty() ? std::vector<double>{t_final} : parse_list(samples);
    if (samples.empty() || opts.sample_times.back() < t_final) opts.sample_times.push_back(t_final);
    const SimResult r = simulate(WaveProblem{}, set, opts);
    const fs::path path = output_path(common, "simulate.csv");
    CsvWriter csv(path, {"t", "error"});
    for (std::size_t i = 0; i < r.times.size(); ++i) csv.cell(r.times[i]).cell(r.errors[i]).end_row();
    csv.close();
    manifest.add_output(path);
    manifest.write(output_path(common, "simulate.manifest.json"));
    std::printf("%d nodes, dt = %.4e, %d steps, max C-norm error %.4e\n", r.nodes, r.dt, r.steps, r.max_error());
    return kExitOk;
}

int cmd_converge(const Common& common, const std::string& file, const std::string& key, double t,
                 const SimFlags& sim, const ObjectiveFlags& obj) {
    RunManifest manifest("converge", {{"scheme_file", file}, {"scheme", key}, {"time", t}, {"cfl", sim.cfl},
                                      {"time_order", sim.time_order}});
    SchemeParams s;
    if (!file.empty()) {
        manifest.add_input(file);
        s = scheme_from_json(read_json(file));
    } else {
        const auto [order, K] = parse_key(key);
        s = rederive_scheme(order, K, obj.config(), obj.options()).scheme();
    }
    const BoundaryFamily family = boundary_family(s.p, s.h_params, Precision::High);
    const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(s.c.data(), static_cast<Eigen::Index>(s.c.size()));
    const ConvergenceReport r =
        convergence_study(WaveProblem{}, family, c, t, default_node_counts(), sim.options(), common.workers);
    const fs::path path = output_path(common, "converge.csv");
    CsvWriter csv(path, {"nodes", "h", "error", "P_num"});
    for (const auto& pt : r.points) csv.cell(pt.nodes).cell(pt.h).cell(pt.error).cell(r.order).end_row();
    csv.close();
    manifest.add_output(path);
    manifest.write(output_path(common, "converge.manifest.json"));
    std::printf("2p = %d, K = %d, t = %.3f: P_num = %.3f\n", 2 * s.p, s.K(), t, r.order);
    return kExitOk;
}

int cmd_report_table1(const Common& common, const SimFlags& sim, const ObjectiveFlags& obj) {
    RunManifest manifest("report-table1", {{"objective", obj.to_json()}, {"cfl", sim.cfl}});
    const fs::path path = output_path(common, "table1.csv");
    CsvWriter csv(path, {"order", "K", "P_num", "ratio", "courant", "error_101"});
    for (const auto& key : table1_keys()) {
        try {
            const OptimizationResult r = rederive_scheme(key.order, key.K, obj.config(), obj.options());
            const Table1Row row = table1_row(r, sim.options(), common.workers);
            csv.cell(row.order).cell(row.K).cell(row.p_num).cell(row.ratio).cell(row.courant).cell(row.error_101);
            std::printf("2p = %2d  K = %d  P_num = %5.2f  ratio = %.3f  courant = %.3f\n", row.order, row.K,
                        row.p_num, row.ratio, row.courant);
        } catch (const SbpError& e) {
            csv.cell(key.order).cell(key.K).cell("nan").cell("nan").cell("nan").cell("nan");
            std::printf("2p = %2d  K = %d  failed: %s\n", key.order, key.K, e.what());
        }
        csv.end_row();
    }
    csv.close();
    manifest.add_output(path);
    manifest.write(output_path(common, "table1.manifest.json"));
    return kExitOk;
}

int cmd_figures(const Common& common, int fig, const SimFlags& sim, const ObjectiveFlags& obj) {
    RunManifest manifest("figures", {{"fig", fig}, {"objective", obj.to_json()}, {"cfl", sim.cfl}});
    const fs::path path = output_path(common, "fig" + std::to_string(fig) + ".csv");
    if (fig == 4) {
        CsvWriter csv(path, {"K", "t", "nodes", "h", "error"});
        for (int K = 0; K <= 3; ++K) {
            const OptimizationResult r = rederive_scheme(8, K, obj.config(), obj.options());
            const BoundaryFamily family = boundary_family(r.p, r.h_params, Precision::High);
            const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(r.c.data(), r.c.size());
            for (double t : {0.2, 0.5}) {
                const ConvergenceReport conv =
                    convergence_study(WaveProblem{}, family, c, t, default_node_counts(), sim.options(), common.workers);
                for (const auto& pt : conv.points) csv.cell(K).cell(t).cell(pt.nodes).cell(pt.h).cell(pt.error).end_row();
            }
        }
        csv.close();
    } else if (fig == 5 || fig == 6) {
        std::vector<SchemeKey> keys;
        if (fig == 5) {
            keys = {{8, 0}, {8, 1}, {8, 2}, {8, 3}};
        } else {
            keys = {{4, 1}, {6, 1}, {8, 2}, {10, 2}, {12, 2}};
        }
        CsvWriter csv(path, {"order", "K", "t", "error"});
        for (const auto& key : keys) {
            const OptimizationResult r = rederive_scheme(key.order, key.K, obj.config(), obj.options());
            const SimResult s = error_history(r, 0.6, 0.01, sim.options());
            for (std::size_t i = 0; i < s.times.size(); ++i) {
                csv.cell(key.order).cell(key.K).cell(s.times[i]).cell(s.errors[i]).end_row();
            }
        }
        csv.close();
    } else {
        throw CLI::ValidationError("--fig", "expected 4, 5 or 6");
    }
    manifest.add_output(path);
    manifest.write(output_path(common, "fig" + std::to_string(fig) + ".manifest.json"));
    std::printf("wrote %s\n", path.string().c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-order SBP operators on grids with shifted boundary nodes"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--out", common.out_dir, "output directory");
    app.add_option("--workers", common.workers, "parallel simulations (default: SBPGEN_WORKERS or all cores)");

    ObjectiveFlags obj;
    SimFlags sim;
    int order = 0, K = 0, nodes = 101, fig = 0;
    double t_final = 0.5, t_conv = 0.5;
    std::string scheme_file, key, samples;

    auto* gen = app.add_subcommand("generate", "optimize spacings and free parameters, write the operators");
    gen->add_option("--order", order, "accuracy order 2p")->required();
    gen->add_option("--shifted", K, "number of shifted boundary nodes K")->required();
    gen->add_option("--nodes", nodes, "nodes N+1 of the written operator")->check(CLI::PositiveNumber);
    obj.attach(gen);

    auto* tables = app.add_subcommand("tables", "published spacings and norms");
    tables->require_subcommand(1);
    auto* t_list = tables->add_subcommand("list", "print the catalog");
    auto* t_validate = tables->add_subcommand("validate", "recompute the published norms");
    t_validate->add_option("--scheme", key, "2p,K (default: all)");
    auto* t_export = tables->add_subcommand("export", "write a published scheme with c = C_aux(h)");
    t_export->add_option("--scheme", key, "2p,K")->required();
    t_export->add_option("--nodes", nodes, "nodes N+1")->check(CLI::PositiveNumber);

    auto* val = app.add_subcommand("validate", "check an operator file");
    val->add_option("file", scheme_file, "operator JSON")->required()->check(CLI::ExistingFile);

    auto add_source = [&](CLI::App* cmd) {
        auto* f = cmd->add_option("--scheme-file", scheme_file, "operator JSON")->check(CLI::ExistingFile);
        auto* k = cmd->add_option("--scheme", key, "2p,K: published spacings with re-derived c");
        f->excludes(k);
        k->excludes(f);
    };
    auto* spec = app.add_subcommand("spectra", "eigenvalue diagnostics");
    add_source(spec);
    spec->add_option("--nodes", nodes, "nodes N+1")->check(CLI::PositiveNumber);
    obj.attach(spec);

    auto* simc = app.add_subcommand("simulate", "wave test problem, error against the exact solution");
    add_source(simc);
    simc->add_option("--grid", nodes, "nodes N+1")->check(CLI::PositiveNumber);
    simc->add_option("--t-final", t_final, "final time")->check(CLI::NonNegativeNumber);
    simc->add_option("--samples", samples, "comma-separated sample times");
    sim.attach(simc);
    obj.attach(simc);

    auto* conv = app.add_subcommand("converge", "errors over the standard grid set and fitted order");
    add_source(conv);
    conv->add_option("--order", order, "2p (with --shifted, same as --scheme 2p,K)");
    conv->add_option("--shifted", K, "K");
    conv->add_option("--time", t_conv, "time of the error measurement")->check(CLI::PositiveNumber);
    sim.attach(conv);
    obj.attach(conv);

    auto* t1 = app.add_subcommand("report-table1", "summary table for all thirteen schemes");
    sim.attach(t1);
    obj.attach(t1);

    auto* figs = app.add_subcommand("figures", "data series of the convergence and error-history figures");
    figs->add_option("--fig", fig, "4, 5 or 6")->required();
    sim.attach(figs);
    obj.attach(figs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) return cmd_generate(common, order, K, nodes, obj);
        if (*t_list) return cmd_tables_list();
        if (*t_validate) return cmd_tables_validate(key);
        if (*t_export) return cmd_tables_export(common, key, nodes);
        if (*val) return cmd_validate(scheme_file);
        if (*spec || *simc || *conv) {
            if (*conv && key.empty() && scheme_file.empty() && order > 0) key = std::to_string(order) + "," + std::to_string(K);
            if (key.empty() && scheme_file.empty()) {
                std::fprintf(stderr, "error: one of --scheme or --scheme-file is required\n");
                return kExitUsage;
            }
            if (*spec) return cmd_spectra(common, scheme_file, key, nodes, obj);
            if (*simc) return cmd_simulate(common, scheme_file, key, nodes, t_final, samples, sim, obj);
            return cmd_converge(common, scheme_file, key, t_conv, sim, obj);
        }
        if (*t1) return cmd_report_table1(common, sim, obj);
        if (*figs) return cmd_figures(common, fig, sim, obj);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const SbpError& e) {
        std::fprintf(stderr, "error [%s]: %s\n", to_string(e.code()), e.what());
        const bool infeasible = e.code() == ErrorCode::NonpositiveMu || e.code() == ErrorCode::Infeasible ||
                                e.code() == ErrorCode::DsInsoluble;
        return infeasible ? kExitInfeasible : kExitFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitOk;
}
