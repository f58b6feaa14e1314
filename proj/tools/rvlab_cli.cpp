// Command-line front end: simulate, theta, triple, verify-flt, tailproc,
// diagnose, metric. Exit status 0 on success, 2 when verify-flt fails its
// pass rule, 1 on any error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rvlab/cadlag.hpp"
#include "rvlab/config.hpp"
#include "rvlab/csv.hpp"
#include "rvlab/estimators.hpp"
#include "rvlab/harness.hpp"
#include "rvlab/parallel.hpp"
#include "rvlab/svg.hpp"
#include "rvlab/tailproc.hpp"

using namespace rvlab;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned workers = 0;
};

ExperimentConfig load_experiment(const Globals& g) {
    ExperimentConfig cfg = g.config_path.empty() ? ExperimentConfig{} : experiment_from_config(load_config(g.config_path));
    apply_seed_override(cfg);
    if (g.seed) {
        cfg.seeds = {*g.seed};
        cfg.seed_source = SeedSource::command_line;
    }
    if (!g.out.empty()) {
        cfg.out = g.out;
    }
    cfg.validate();
    return cfg;
}

std::vector<double> read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return read_csv_column(in, "value");
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
}

/// The series to analyse: from --input when given, else simulated from the
/// config with the first seed.
struct SeriesSource {
    std::vector<double> x;
    std::optional<double> a_n;
};

SeriesSource obtain_series(const ExperimentConfig& cfg, const std::string& input) {
    if (!input.empty()) {
        return {read_series_file(input), std::nullopt};
    }
    return {simulate_series(cfg.model, cfg.n, cfg.seeds.front()),
            normalizing_sequence(cfg.model, cfg.n, {cfg.seeds.front(), CalibrationOptions{}.draws}).value};
}

int cmd_simulate(const Globals& g, std::uint64_t replicate) {
    const auto cfg = load_experiment(g);
    const auto x = simulate_series(cfg.model, cfg.n, cfg.seeds.front(), replicate);
    if (g.out.empty()) {
        write_series_csv(std::cout, x);
    } else {
        const auto p = fs::path(cfg.out) / (cfg.experiment_id + "_seed" + std::to_string(cfg.seeds.front()) + "_r" +
                                            std::to_string(replicate) + "_series.csv");
        fs::create_directories(p.parent_path());
        std::ofstream out(p);
        write_series_csv(out, x);
        if (!out) {
            throw std::runtime_error("cannot write " + p.string());
        }
        std::cout << p.string() << "\n";
    }
    return 0;
}

int cmd_theta(const Globals& g, const std::string& input, std::optional<double> u, std::optional<double> threshold) {
    const auto cfg = load_experiment(g);
    const auto src = obtain_series(cfg, input);
    double level = 0.0;
    if (threshold) {
        level = *threshold;
    } else if (src.a_n) {
        level = u.value_or(cfg.theta_u) * *src.a_n;
    } else {
        level = default_tail_threshold(src.x);
    }
    const auto scheme = BlockingScheme::make(src.x.size(), cfg.scheme_exponent);
    const auto b = blocks_counts(src.x, level, scheme);
    const auto r = runs_counts(src.x, level, scheme);
    ojson j;
    j["threshold"] = level;
    j["n"] = src.x.size();
    j["r_n"] = scheme.r_n;
    j["exceedances"] = b.exceedances;
    j["blocks"] = blocks_value(b);
    j["runs"] = r.trials > 0 ? ojson(runs_value(r)) : ojson(nullptr);
    const auto w = wilson_interval(r.hits, r.trials);
    j["runs_interval"] = r.trials > 0 ? ojson{w.first, w.second} : ojson(nullptr);
    if (input.empty()) {
        try {
            j["theoretical"] = extremal_index_theoretical(cfg.model);
        } catch (const std::invalid_argument&) {
            j["theoretical"] = nullptr;
        }
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_triple(const Globals& g, const std::string& method, std::size_t reps) {
    const auto cfg = load_experiment(g);
    const std::uint64_t seed = cfg.seeds.front();
    TripleReport rep;
    if (method == "mc") {
        if (std::holds_alternative<Garch11SquaredModel>(cfg.model)) {
            rep = resolve_triple(cfg, seed);
        } else {
            rep = levy_triple_spectral(tail_sampler(cfg.model), reps, seed);
        }
    } else if (method == "closed") {
        rep = resolve_triple(cfg, seed);
        if (rep.method != "closed_form") {
            throw std::invalid_argument("no closed-form triple for this model");
        }
    } else {
        rep = resolve_triple(cfg, seed);
    }
    std::cout << triple_to_json(rep) << "\n";
    return 0;
}

int cmd_verify(const Globals& g) {
    const auto cfg = load_experiment(g);
    auto suite = run_flt_suite(cfg, g.workers);
    ojson summary = ojson::array();
    for (auto& r : suite.reports) {
        const auto files = emit_report(r);
        ojson e;
        e["seed"] = r.seed;
        e["passed"] = r.passed;
        e["underpowered"] = r.underpowered;
        ojson p = ojson::array();
        for (const auto& c : r.comparisons) {
            p.push_back(c.ks ? ojson(c.ks->p_value) : ojson(nullptr));
        }
        e["p_values"] = p;
        e["runtime_seconds"] = r.runtime_seconds;
        e["files"] = files;
        summary.push_back(e);
    }
    ojson j;
    j["experiment_id"] = cfg.experiment_id;
    j["seeds_passed"] = suite.passed;
    j["seeds_required"] = suite.required;
    j["pass"] = suite.pass();
    j["reports"] = summary;
    std::cout << j.dump(2) << "\n";
    return suite.pass() ? 0 : 2;
}

int cmd_tailproc(const Globals& g, const std::string& input, int lag_min, int lag_max,
                 std::optional<double> threshold) {
    const auto cfg = load_experiment(g);
    const auto src = obtain_series(cfg, input);
    const double level = threshold ? *threshold : default_tail_threshold(src.x);
    const auto pop = empirical_tail_process(src.x, level, lag_min, lag_max);
    ojson lags = ojson::array();
    for (int lag = lag_min; lag <= lag_max; ++lag) {
        std::vector<double> theta;
        std::vector<double> mags;
        for (const auto& w : pop.windows) {
            theta.push_back(w.spectral(lag));
            mags.push_back(std::abs(w.spectral(lag)));
        }
        const auto m = mean_with_se(theta);
        lags.push_back({{"lag", lag},
                        {"mean_spectral", m.value},
                        {"se", m.se},
                        {"median_abs_spectral", median(mags)},
                        {"quantile_90_abs_spectral", quantile(mags, 0.9)}});
    }
    ojson j;
    j["threshold"] = level;
    j["exceedances"] = pop.exceedances;
    j["windows"] = pop.windows.size();
    j["dropped_at_edges"] = pop.dropped_at_edges;
    j["lags"] = lags;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_diagnose(const Globals& g, const std::string& condition, const std::string& input) {
    const auto cfg = load_experiment(g);
    const std::uint64_t seed = cfg.seeds.front();
    DiagnosticReport rep;
    bool log_x = false;
    if (condition == "anticlustering") {
        const auto src = obtain_series(cfg, input);
        const double level = src.a_n ? cfg.theta_u * *src.a_n : default_tail_threshold(src.x);
        const auto scheme = BlockingScheme::make(src.x.size(), cfg.scheme_exponent);
        std::vector<std::size_t> m_grid;
        for (std::size_t m = 1; m <= scheme.r_n; m *= 2) {
            m_grid.push_back(m);
        }
        rep = anticlustering_diagnostic(src.x, level, m_grid, scheme, true);
        log_x = true;
    } else if (condition == "small-step") {
        const double a = normalizing_sequence(cfg.model, cfg.n, {seed, CalibrationOptions{}.draws}).value;
        std::vector<std::vector<double>> ensemble(cfg.replicates);
        parallel_for(cfg.replicates, g.workers,
                     [&](std::size_t r) { ensemble[r] = simulate_series(cfg.model, cfg.n, seed, r); });
        rep = small_step_diagnostic(cfg.model, ensemble, a, cfg.u_grid, cfg.delta, {seed, CalibrationOptions{}.draws});
        log_x = true;
    } else if (condition == "mixing") {
        const auto scheme = BlockingScheme::make(cfg.n, cfg.scheme_exponent);
        rep = mixing_diagnostic(cfg.model, cfg.n, scheme, default_tent_family(cfg.theta_u), cfg.replicates, seed);
    } else {
        throw std::invalid_argument("unknown condition '" + condition + "'");
    }
    const std::string json = rep.to_json();
    std::cout << json << "\n";
    if (!g.out.empty()) {
        const std::string base = cfg.experiment_id + "_seed" + std::to_string(seed) + "_" + condition;
        write_text(fs::path(cfg.out) / (base + ".json"), json + "\n");
        write_text(fs::path(cfg.out) / (base + ".svg"), curve_svg(condition, rep.grid, rep.curve, log_x));
    }
    return 0;
}

int cmd_metric(const std::string& a_path, const std::string& b_path) {
    auto load = [](const std::string& p) {
        std::ifstream in(p);
        if (!in) {
            throw std::runtime_error("cannot open " + p);
        }
        return read_path_csv(in);
    };
    const auto a = load(a_path);
    const auto b = load(b_path);
    ojson j;
    j["m1"] = m1_distance(a, b);
    j["uniform"] = uniform_distance(a, b);
    j["l1"] = l1_distance(a, b);
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification toolkit for heavy-tailed partial-sum limits"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed_value = 0;
    app.add_option("--config", g.config_path, "flat key = value configuration file")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed_value, "master seed; overrides the config and the environment");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--workers", g.workers, "worker threads (0 = hardware concurrency)");

    std::uint64_t replicate = 0;
    auto* sim = app.add_subcommand("simulate", "write one simulated series as CSV");
    sim->add_option("--replicate", replicate, "replicate substream index");

    std::string input;
    std::optional<double> u;
    std::optional<double> threshold;
    auto* theta = app.add_subcommand("theta", "blocks and runs estimates of the extremal index");
    theta->add_option("--input", input, "CSV with a value column; simulated from the config when absent");
    theta->add_option("--u", u, "threshold as a multiple of a_n (simulated series)");
    theta->add_option("--threshold", threshold, "absolute threshold");

    std::string method = "auto";
    std::size_t reps = 200000;
    auto* triple = app.add_subcommand("triple", "limit Levy triple of the configured model");
    triple->add_option("--method", method, "auto, closed or mc")->check(CLI::IsMember({"auto", "closed", "mc"}));
    triple->add_option("--reps", reps, "Monte Carlo replicates");

    auto* verify = app.add_subcommand("verify-flt", "KS comparison of V_n with its limit over the configured seeds");

    int lag_min = -3;
    int lag_max = 3;
    auto* tail = app.add_subcommand("tailproc", "empirical spectral tail process");
    tail->add_option("--input", input, "CSV with a value column; simulated from the config when absent");
    tail->add_option("--lag-min", lag_min);
    tail->add_option("--lag-max", lag_max);
    tail->add_option("--threshold", threshold, "absolute threshold (default: 99.5% quantile of |X|)");

    std::string condition;
    auto* diag = app.add_subcommand("diagnose", "anticlustering, small-step or mixing diagnostic");
    diag->add_option("--condition", condition)
        ->required()
        ->check(CLI::IsMember({"anticlustering", "small-step", "mixing"}));
    diag->add_option("--input", input, "CSV series for the anticlustering diagnostic");

    std::string path_a;
    std::string path_b;
    auto* metric = app.add_subcommand("metric", "M1, uniform and L1 distances between two path CSVs");
    metric->add_option("a", path_a)->required()->check(CLI::ExistingFile);
    metric->add_option("b", path_b)->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (seed_opt->count() > 0) {
        g.seed = seed_value;
    }

    try {
        set_default_workers(g.workers);
        if (*sim) return cmd_simulate(g, replicate);
        if (*theta) return cmd_theta(g, input, u, threshold);
        if (*triple) return cmd_triple(g, method, reps);
        if (*verify) return cmd_verify(g);
        if (*tail) return cmd_tailproc(g, input, lag_min, lag_max, threshold);
        if (*diag) return cmd_diagnose(g, condition, input);
        if (*metric) return cmd_metric(path_a, path_b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
