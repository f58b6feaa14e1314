#include "rvlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "json.hpp"
#include "rvlab/parallel.hpp"
#include "rvlab/pointproc.hpp"
#include "rvlab/svg.hpp"
#include "rvlab/tailproc.hpp"

namespace rvlab {

namespace {

using ojson = nlohmann::ordered_json;

constexpr std::size_t garch_triple_reps = 100000;
constexpr std::size_t theta_tail_reps = 100000;

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::string time_label(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

struct ReplicateResult {
    std::vector<double> pre;
    std::vector<double> lim;
    bool conserved = true;
    std::size_t psi_failures = 0;
    double psi_error = 0.0;
    ThetaCounts blocks;
    ThetaCounts runs;
    std::vector<unsigned char> small;
};

}  // namespace

TripleReport resolve_triple(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.triple) {
        TripleReport r;
        r.triple = *cfg.triple;
        r.method = "user";
        return r;
    }
    return std::visit(
        [&](const auto& m) -> TripleReport {
            using T = std::decay_t<decltype(m)>;
            TripleReport r;
            if constexpr (std::is_same_v<T, MaModel>) {
                if (m.marginal.alpha == 1.0) {
                    throw std::invalid_argument(
                        "missing triple: the MA drift has no closed form at alpha = 1; supply triple_c_plus, "
                        "triple_c_minus and triple_b");
                }
                r.triple = levy_triple_ma(m);
                r.method = "closed_form";
            } else if constexpr (std::is_same_v<T, Garch11SquaredModel>) {
                const double alpha = garch_tail_index(m.alpha1, m.beta1);
                if (alpha >= 1.0) {
                    throw std::invalid_argument(
                        "missing triple: squared GARCH with tail index >= 1; supply triple_c_plus, "
                        "triple_c_minus and triple_b");
                }
                const auto c = garch_cplus(m.alpha0, m.alpha1, m.beta1, alpha, garch_triple_reps,
                                           default_garch_truncation, seed);
                const double k = alpha / (1.0 - alpha);
                r.triple = {alpha, c.estimate.value, 0.0, k * (c.estimate.value - 1.0)};
                r.method = "monte_carlo";
                r.se_c_plus = c.estimate.se;
                r.se_b = k * c.estimate.se;
                r.reps = c.estimate.reps;
                r.seed = c.estimate.seed;
            } else {
                // Asymptotically independent: the marginal limit measure, no drift.
                r.triple = {m.marginal.alpha, m.marginal.p, m.marginal.q(), 0.0};
                r.method = "closed_form";
            }
            return r;
        },
        cfg.model);
}

Report run_flt_experiment(const ExperimentConfig& cfg, std::uint64_t seed, unsigned workers) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();
    Report rep;
    rep.config = cfg;
    rep.seed = seed;
    rep.model = model_name(cfg.model);
    rep.triple = resolve_triple(cfg, seed);
    const LevyTriple& triple = rep.triple.triple;

    const CalibrationOptions calib{seed, CalibrationOptions{}.draws};
    rep.a_n = normalizing_sequence(cfg.model, cfg.n, calib);
    const double a = rep.a_n.value;
    rep.b_n = centering_sequence(cfg.model, a, calib);
    const double b = rep.b_n.estimate.value;
    rep.u_trunc = cfg.u_trunc > 0.0 ? cfg.u_trunc : default_u_trunc(triple.alpha);
    rep.truncation_error = truncation_error_scale(triple, rep.u_trunc);

    const auto scheme = BlockingScheme::make(cfg.n, cfg.scheme_exponent);
    const double theta_level = cfg.theta_u * a;
    const double psi_u = cfg.theta_u;
    rep.audits.psi_u = psi_u;

    const bool do_small = cfg.replicates >= min_small_step_replicates && !cfg.u_grid.empty();
    std::vector<double> small_means;
    if (do_small) {
        for (double u : cfg.u_grid) {
            small_means.push_back(centering_sequence(cfg.model, u * a, calib).estimate.value);
        }
    }

    const std::size_t reps = cfg.replicates;
    const std::size_t nt = cfg.times.size();
    const double nd = static_cast<double>(cfg.n);
    std::vector<ReplicateResult> results(reps);
    parallel_for(reps, workers, [&](std::size_t r) {
        ReplicateResult& out = results[r];
        const auto series = simulate_series(cfg.model, cfg.n, seed, r);
        const auto path = build_partial_sum_path(series, a, b);
        for (double t : cfg.times) {
            out.pre.push_back(path(t));
        }
        out.conserved = path.terminal_value() == partial_sum_terminal(series, a, b);

        const auto psi = summation_functional(build_time_space_measure(series, a), psi_u);
        double remainder = 0.0;
        double scale = 0.0;
        for (std::size_t k = 1; k <= cfg.n; ++k) {
            const double mark = series[k - 1] / a;
            if (!(std::abs(mark) > psi_u)) {
                remainder += mark;
            }
            scale += std::abs(mark);
            const double t = static_cast<double>(k) / nd;
            const double centering = static_cast<double>(k) * b / a;
            const double err = std::abs(path(t) - (psi(t) + remainder - centering)) /
                               (1.0 + scale + std::abs(centering));
            out.psi_error = std::max(out.psi_error, err);
            out.psi_failures += err > psi_audit_tolerance;
        }

        try {
            out.blocks = blocks_counts(series, theta_level, scheme);
        } catch (const std::invalid_argument&) {
            out.blocks = {0, scheme.k_n, 0, cfg.n, scheme.r_n};
        }
        try {
            out.runs = runs_counts(series, theta_level, scheme);
        } catch (const std::invalid_argument&) {
            out.runs = {0, 0, 0, cfg.n, scheme.r_n};
        }
        if (do_small) {
            out.small = small_step_exceedances(series, a, cfg.u_grid, small_means, cfg.delta);
        }

        Rng rng(seed, stream::limit, r);
        const auto limit_path = simulate_limit_path(triple, rep.u_trunc, cfg.grid, rng);
        for (double t : cfg.times) {
            out.lim.push_back(limit_path(t));
        }
    });

    rep.prelimit.assign(nt, std::vector<double>(reps));
    rep.limit.assign(nt, std::vector<double>(reps));
    std::vector<std::size_t> small_hits(cfg.u_grid.size(), 0);
    ThetaCounts blocks;
    ThetaCounts runs;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto& res = results[r];
        for (std::size_t j = 0; j < nt; ++j) {
            rep.prelimit[j][r] = res.pre[j];
            rep.limit[j][r] = res.lim[j];
        }
        rep.audits.conservation_failures += !res.conserved;
        rep.audits.psi_failures += res.psi_failures;
        rep.audits.psi_max_relative_error = std::max(rep.audits.psi_max_relative_error, res.psi_error);
        blocks += res.blocks;
        runs += res.runs;
        for (std::size_t j = 0; j < res.small.size(); ++j) {
            small_hits[j] += res.small[j];
        }
    }

    rep.underpowered = cfg.n < min_powered_n || reps < min_powered_replicates;
    bool all_pass = true;
    for (std::size_t j = 0; j < nt; ++j) {
        TimeComparison c;
        c.t = cfg.times[j];
        if (reps >= min_ks_sample) {
            c.ks = ks_two_sample(rep.prelimit[j], rep.limit[j]);
            c.pass = c.ks->p_value > ks_level;
        }
        all_pass = all_pass && c.pass;
        rep.comparisons.push_back(c);
    }

    auto& th = rep.theta;
    th.u = cfg.theta_u;
    th.r_n = scheme.r_n;
    th.blocks_counts = blocks;
    th.runs_counts = runs;
    try {
        th.theoretical = extremal_index_theoretical(cfg.model);
    } catch (const std::invalid_argument&) {
    }
    try {
        th.tail_process = cluster_acceptance_rate(tail_sampler(cfg.model), theta_tail_reps, seed);
    } catch (const std::invalid_argument&) {
    }
    if (blocks.exceedances > 0 && blocks.trials > 0) {
        th.blocks = blocks_value(blocks);
        const double rate = static_cast<double>(scheme.r_n) * static_cast<double>(blocks.exceedances) /
                            static_cast<double>(blocks.n);
        const auto w = wilson_interval(blocks.hits, blocks.trials);
        th.blocks_interval = {w.first / rate, w.second / rate};
    }
    if (runs.trials > 0) {
        th.runs = runs_value(runs);
        th.runs_interval = wilson_interval(runs.hits, runs.trials);
    }

    if (do_small) {
        rep.small_step = small_step_report(small_hits, reps, a, cfg.u_grid, cfg.delta,
                                           triple.alpha < 1.0 ? triple.alpha : 0.0);
    } else {
        rep.small_step_note = "skipped: fewer than 200 replicates or empty u_grid";
    }

    rep.passed = all_pass && !rep.underpowered && rep.audits.conservation_failures == 0 &&
                 rep.audits.psi_failures == 0;
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::string Report::to_json() const {
    ojson j;
    j["experiment_id"] = config.experiment_id;
    j["seed"] = seed;
    j["seed_source"] = to_string(config.seed_source);
    ojson echo = ojson::object();
    for (const auto& [k, v] : experiment_to_config(config, seed)) {
        echo[k] = v;
    }
    j["config"] = echo;
    j["model"] = model;
    j["normalization"] = {{"a_n", a_n.value},
                          {"method", a_n.method},
                          {"calibration_length", a_n.calibration_length}};
    j["centering"] = {{"b_n", b_n.estimate.value},
                      {"se", b_n.estimate.se},
                      {"reps", b_n.estimate.reps},
                      {"seed", b_n.estimate.seed},
                      {"method", b_n.method}};
    j["triple"] = ojson::parse(triple_to_json(triple));
    j["limit"] = {{"u_trunc", u_trunc}, {"truncation_error_scale", truncation_error}, {"drift_grid", config.grid}};
    ojson comps = ojson::array();
    for (const auto& c : comparisons) {
        ojson e;
        e["t"] = c.t;
        e["ks_statistic"] = c.ks ? ojson(c.ks->statistic) : ojson(nullptr);
        e["p_value"] = c.ks ? ojson(c.ks->p_value) : ojson(nullptr);
        e["pass"] = c.pass;
        comps.push_back(e);
    }
    j["comparisons"] = comps;
    j["underpowered"] = underpowered;

    auto counts = [](const ThetaCounts& c) {
        return ojson{{"hits", c.hits}, {"trials", c.trials}, {"exceedances", c.exceedances}, {"n", c.n}};
    };
    ojson th;
    th["u"] = theta.u;
    th["r_n"] = theta.r_n;
    th["theoretical"] = optional_number(theta.theoretical);
    if (theta.tail_process) {
        th["tail_process"] = {{"value", theta.tail_process->value},
                              {"se", theta.tail_process->se},
                              {"reps", theta.tail_process->reps},
                              {"seed", theta.tail_process->seed}};
    } else {
        th["tail_process"] = nullptr;
    }
    th["blocks"] = {{"value", optional_number(theta.blocks)},
                    {"interval", theta.blocks ? ojson{theta.blocks_interval.first, theta.blocks_interval.second}
                                              : ojson(nullptr)},
                    {"counts", counts(theta.blocks_counts)}};
    th["runs"] = {{"value", optional_number(theta.runs)},
                  {"interval", theta.runs ? ojson{theta.runs_interval.first, theta.runs_interval.second}
                                          : ojson(nullptr)},
                  {"counts", counts(theta.runs_counts)}};
    j["theta"] = th;
    j["small_step"] = small_step ? ojson::parse(small_step->to_json()) : ojson{{"skipped", small_step_note}};
    j["audits"] = {{"conservation_failures", audits.conservation_failures},
                   {"psi_u", audits.psi_u},
                   {"psi_failures", audits.psi_failures},
                   {"psi_max_relative_error", audits.psi_max_relative_error},
                   {"psi_tolerance", psi_audit_tolerance}};
    j["passed"] = passed;
    j["artifacts"] = artifacts;
    return j.dump(2);
}

std::vector<std::string> emit_report(Report& report) {
    namespace fs = std::filesystem;
    const auto& cfg = report.config;
    const fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + cfg.out + ": " + ec.message());
    }
    const std::string base = cfg.experiment_id + "_seed" + std::to_string(report.seed);
    auto wants = [&](const char* f) { return std::find(cfg.formats.begin(), cfg.formats.end(), f) != cfg.formats.end(); };

    std::vector<std::pair<std::string, std::string>> files;  // name, contents
    report.artifacts.clear();
    report.artifacts.push_back(base + ".json");
    if (wants("csv")) {
        std::ostringstream os;
        os.precision(std::numeric_limits<double>::max_digits10);
        os << "replicate,t,prelimit,limit\n";
        for (std::size_t j = 0; j < report.prelimit.size(); ++j) {
            for (std::size_t r = 0; r < report.prelimit[j].size(); ++r) {
                os << r << ',' << cfg.times[j] << ',' << report.prelimit[j][r] << ',' << report.limit[j][r] << '\n';
            }
        }
        report.artifacts.push_back(base + "_samples.csv");
        files.emplace_back(report.artifacts.back(), os.str());
    }
    if (wants("svg")) {
        for (std::size_t j = 0; j < report.prelimit.size(); ++j) {
            const std::string label = time_label(cfg.times[j]);
            report.artifacts.push_back(base + "_t" + label + ".svg");
            files.emplace_back(report.artifacts.back(),
                               survival_overlay_svg(report.model + ", t = " + label,
                                                    {{"V_n(t)", report.prelimit[j]}, {"V(t)", report.limit[j]}}));
        }
    }
    files.insert(files.begin(), {report.artifacts.front(), report.to_json() + "\n"});

    std::vector<std::string> written;
    for (const auto& [name, contents] : files) {
        const fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out << contents;
        if (!out) {
            throw std::runtime_error("cannot write " + p.string());
        }
        written.push_back(p.string());
    }
    return written;
}

SuiteResult run_flt_suite(const ExperimentConfig& cfg, unsigned workers) {
    cfg.validate();
    SuiteResult s;
    s.required = (suite_pass_numerator * cfg.seeds.size() + suite_pass_denominator - 1) / suite_pass_denominator;
    for (std::uint64_t seed : cfg.seeds) {
        s.reports.push_back(run_flt_experiment(cfg, seed, workers));
        s.passed += s.reports.back().passed;
    }
    return s;
}

}  // namespace rvlab
