#include "rvlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "rvlab/parallel.hpp"

namespace rvlab {

BlockingScheme BlockingScheme::make(std::size_t n, double exponent) {
    if (n < 1) {
        throw std::invalid_argument("BlockingScheme: n must be at least 1");
    }
    if (!(exponent > 0.0 && exponent < 1.0)) {
        throw std::invalid_argument("BlockingScheme: exponent must lie in (0, 1)");
    }
    auto r = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), exponent)));
    return with_block_length(n, std::clamp<std::size_t>(r, 1, n));
}

BlockingScheme BlockingScheme::with_block_length(std::size_t n, std::size_t r_n) {
    if (r_n < 1 || r_n > n) {
        throw std::invalid_argument("BlockingScheme: need 1 <= r_n <= n");
    }
    return {n, r_n, n / r_n};
}

ThetaCounts& ThetaCounts::operator+=(const ThetaCounts& other) {
    if (r_n != other.r_n && n != 0) {
        throw std::invalid_argument("ThetaCounts: cannot pool different block lengths");
    }
    hits += other.hits;
    trials += other.trials;
    exceedances += other.exceedances;
    n += other.n;
    r_n = other.r_n;
    return *this;
}

double blocks_value(const ThetaCounts& c) {
    if (c.exceedances == 0 || c.trials == 0) {
        throw std::invalid_argument("blocks estimator: no exceedances");
    }
    const double block_rate = static_cast<double>(c.hits) / static_cast<double>(c.trials);
    const double point_rate = static_cast<double>(c.exceedances) / static_cast<double>(c.n);
    return block_rate / (static_cast<double>(c.r_n) * point_rate);
}

double runs_value(const ThetaCounts& c) {
    if (c.trials == 0) {
        throw std::invalid_argument("runs estimator: no exceedance with a full forward window");
    }
    return static_cast<double>(c.hits) / static_cast<double>(c.trials);
}

namespace {

void check_scheme(std::span<const double> series, const BlockingScheme& scheme) {
    if (scheme.n != series.size()) {
        throw std::invalid_argument("blocking scheme built for a different series length");
    }
}

std::vector<std::size_t> exceedance_indices(std::span<const double> series, double u_abs) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (std::abs(series[i]) > u_abs) {
            idx.push_back(i);
        }
    }
    return idx;
}

}  // namespace

ThetaCounts blocks_counts(std::span<const double> series, double u_abs, const BlockingScheme& scheme) {
    check_scheme(series, scheme);
    ThetaCounts c{0, scheme.k_n, 0, scheme.n, scheme.r_n};
    for (std::size_t b = 0; b < scheme.k_n; ++b) {
        bool hit = false;
        for (std::size_t i = b * scheme.r_n; i < (b + 1) * scheme.r_n; ++i) {
            hit |= std::abs(series[i]) > u_abs;
        }
        c.hits += hit;
    }
    for (double x : series) {
        c.exceedances += std::abs(x) > u_abs;
    }
    if (c.exceedances == 0) {
        throw std::invalid_argument("blocks estimator: no exceedances");
    }
    return c;
}

ThetaCounts runs_counts(std::span<const double> series, double u_abs, const BlockingScheme& scheme) {
    check_scheme(series, scheme);
    const auto idx = exceedance_indices(series, u_abs);
    if (idx.empty()) {
        throw std::invalid_argument("runs estimator: no exceedances");
    }
    ThetaCounts c{0, 0, idx.size(), scheme.n, scheme.r_n};
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] + scheme.r_n >= scheme.n) {
            break;
        }
        ++c.trials;
        const bool clear = j + 1 == idx.size() || idx[j + 1] > idx[j] + scheme.r_n;
        c.hits += clear;
    }
    return c;
}

double blocks_estimator(std::span<const double> series, double u_abs, const BlockingScheme& scheme) {
    return blocks_value(blocks_counts(series, u_abs, scheme));
}

double runs_estimator(std::span<const double> series, double u_abs, const BlockingScheme& scheme) {
    return runs_value(runs_counts(series, u_abs, scheme));
}

double default_tail_threshold(std::span<const double> series) {
    std::vector<double> a(series.size());
    std::transform(series.begin(), series.end(), a.begin(), [](double v) { return std::abs(v); });
    return quantile(std::move(a), default_tail_quantile);
}

TailPopulation empirical_tail_process(std::span<const double> series, double threshold, int lag_min, int lag_max) {
    if (lag_min > 0 || lag_max < 0) {
        throw std::invalid_argument("empirical_tail_process: window must contain lag 0");
    }
    if (!(threshold > 0.0)) {
        throw std::invalid_argument("empirical_tail_process: threshold must be positive");
    }
    const auto idx = exceedance_indices(series, threshold);
    if (idx.size() < min_tail_exceedances) {
        throw std::invalid_argument("empirical_tail_process: fewer than 100 exceedances");
    }
    TailPopulation pop;
    pop.threshold = threshold;
    pop.exceedances = idx.size();
    const auto n = static_cast<long long>(series.size());
    for (std::size_t i : idx) {
        const auto ii = static_cast<long long>(i);
        if (ii + lag_min < 0 || ii + lag_max >= n) {
            ++pop.dropped_at_edges;
            continue;
        }
        TailWindow w{lag_min, {}};
        w.values.reserve(static_cast<std::size_t>(lag_max - lag_min + 1));
        for (int lag = lag_min; lag <= lag_max; ++lag) {
            w.values.push_back(series[static_cast<std::size_t>(ii + lag)] / threshold);
        }
        pop.windows.push_back(std::move(w));
    }
    return pop;
}

std::string DiagnosticReport::to_json() const {
    nlohmann::ordered_json j;
    j["condition"] = condition;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : parameters) {
        params[k] = v;
    }
    j["parameters"] = params;
    nlohmann::ordered_json c = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        c.push_back({{"x", grid[i]}, {"value", curve[i]}});
    }
    j["curve"] = c;
    nlohmann::ordered_json iv = nlohmann::ordered_json::array();
    for (const auto& [lo, hi] : intervals) {
        iv.push_back({lo, hi});
    }
    j["intervals"] = iv;
    if (!extras.empty()) {
        nlohmann::ordered_json ex = nlohmann::ordered_json::object();
        for (const auto& [k, v] : extras) {
            ex[k] = v;
        }
        j["extras"] = ex;
    }
    return j.dump(2);
}

DiagnosticReport anticlustering_diagnostic(std::span<const double> series, double u_abs,
                                           const std::vector<std::size_t>& m_grid, const BlockingScheme& scheme,
                                           bool pair_sum) {
    check_scheme(series, scheme);
    const auto idx = exceedance_indices(series, u_abs);
    if (idx.empty()) {
        throw std::invalid_argument("anticlustering_diagnostic: no exceedances");
    }
    const std::size_t r = scheme.r_n;
    // Farthest exceeding neighbour within distance r of each anchor.
    std::vector<std::size_t> reach;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        const std::size_t i = idx[j];
        if (i < r || i + r >= series.size()) {
            continue;
        }
        const auto right = std::upper_bound(idx.begin(), idx.end(), i + r) - 1;
        const auto left = std::lower_bound(idx.begin(), idx.end(), i - r);
        reach.push_back(std::max(*right - i, i - *left));
    }
    if (reach.empty()) {
        throw std::invalid_argument("anticlustering_diagnostic: no exceedance with a full window");
    }
    DiagnosticReport rep;
    rep.condition = "anticlustering";
    rep.parameters = {{"u_abs", u_abs},
                      {"n", static_cast<double>(scheme.n)},
                      {"r_n", static_cast<double>(r)},
                      {"anchors", static_cast<double>(reach.size())}};
    for (std::size_t m : m_grid) {
        if (m < 1) {
            throw std::invalid_argument("anticlustering_diagnostic: m must be at least 1");
        }
        const auto hits = static_cast<std::size_t>(
            std::count_if(reach.begin(), reach.end(), [m](std::size_t d) { return d >= m; }));
        rep.grid.push_back(static_cast<double>(m));
        rep.curve.push_back(static_cast<double>(hits) / static_cast<double>(reach.size()));
        rep.intervals.push_back(wilson_interval(hits, reach.size()));
    }
    if (pair_sum) {
        const double n = static_cast<double>(series.size());
        double total = 0.0;
        for (std::size_t lag = 1; lag <= r && lag < series.size(); ++lag) {
            std::size_t joint = 0;
            for (std::size_t i : idx) {
                joint += i + lag < series.size() && std::abs(series[i + lag]) > u_abs;
            }
            total += static_cast<double>(joint) / (n - static_cast<double>(lag));
        }
        rep.extras.push_back({"pair_sum", n * total});
    }
    return rep;
}

std::vector<unsigned char> small_step_exceedances(std::span<const double> series, double a_n,
                                                  const std::vector<double>& u_grid,
                                                  const std::vector<double>& small_means, double delta) {
    if (u_grid.size() != small_means.size()) {
        throw std::invalid_argument("small_step_diagnostic: one mean per u required");
    }
    if (!(a_n > 0.0) || !(delta > 0.0)) {
        throw std::invalid_argument("small_step_diagnostic: a_n and delta must be positive");
    }
    std::vector<unsigned char> out(u_grid.size(), 0);
    for (std::size_t j = 0; j < u_grid.size(); ++j) {
        const double level = u_grid[j] * a_n;
        const double m = small_means[j] / a_n;
        double s = 0.0;
        double worst = 0.0;
        for (double v : series) {
            s += (std::abs(v) <= level ? v / a_n : 0.0) - m;
            worst = std::max(worst, std::abs(s));
        }
        out[j] = worst > delta;
    }
    return out;
}

DiagnosticReport small_step_report(const std::vector<std::size_t>& hits, std::size_t reps, double a_n,
                                   const std::vector<double>& u_grid, double delta, double alpha) {
    DiagnosticReport rep;
    rep.condition = "small_step";
    rep.parameters = {{"a_n", a_n}, {"delta", delta}, {"replicates", static_cast<double>(reps)}};
    for (std::size_t j = 0; j < u_grid.size(); ++j) {
        rep.grid.push_back(u_grid[j]);
        rep.curve.push_back(static_cast<double>(hits[j]) / static_cast<double>(reps));
        rep.intervals.push_back(wilson_interval(hits[j], reps));
        if (alpha > 0.0 && alpha < 1.0) {
            rep.extras.push_back({"chebyshev_bound_" + std::to_string(j),
                                  2.0 / delta * alpha / (1.0 - alpha) * std::pow(u_grid[j], 1.0 - alpha)});
        }
    }
    return rep;
}

DiagnosticReport small_step_diagnostic(const std::vector<std::vector<double>>& ensemble, double a_n,
                                       const std::vector<double>& u_grid, const std::vector<double>& small_means,
                                       double delta, double alpha) {
    if (ensemble.size() < 200) {
        throw std::invalid_argument("small_step_diagnostic: at least 200 replicate series required");
    }
    const std::size_t reps = ensemble.size();
    std::vector<std::vector<unsigned char>> flags(reps);
    parallel_for(reps, 0, [&](std::size_t r) {
        flags[r] = small_step_exceedances(ensemble[r], a_n, u_grid, small_means, delta);
    });
    std::vector<std::size_t> hits(u_grid.size(), 0);
    for (const auto& f : flags) {
        for (std::size_t j = 0; j < f.size(); ++j) {
            hits[j] += f[j];
        }
    }
    return small_step_report(hits, reps, a_n, u_grid, delta, alpha);
}

DiagnosticReport small_step_diagnostic(const ModelSpec& spec, const std::vector<std::vector<double>>& ensemble,
                                       double a_n, const std::vector<double>& u_grid, double delta,
                                       const CalibrationOptions& opts) {
    std::vector<double> means;
    for (double u : u_grid) {
        means.push_back(centering_sequence(spec, u * a_n, opts).estimate.value);
    }
    const double alpha = std::holds_alternative<Garch11SquaredModel>(spec) ? 0.0 : tail_index(spec);
    return small_step_diagnostic(ensemble, a_n, u_grid, means, delta, alpha);
}

double TentFunction::operator()(double x) const {
    return height * std::max(0.0, 1.0 - std::abs(std::abs(x) - center) / half_width);
}

std::vector<TentFunction> default_tent_family(double u) {
    if (!(u > 0.0)) {
        throw std::invalid_argument("default_tent_family: u must be positive");
    }
    return {{2.0 * u, u, 1.0}, {4.0 * u, 2.0 * u, 1.0}, {8.0 * u, 4.0 * u, 1.0}};
}

DiagnosticReport mixing_diagnostic(const std::function<std::vector<double>(std::size_t)>& replicate, double a_n,
                                   const BlockingScheme& scheme, const std::vector<TentFunction>& tests,
                                   std::size_t reps) {
    if (reps < 2) {
        throw std::invalid_argument("mixing_diagnostic: at least two replicates required");
    }
    if (!(a_n > 0.0)) {
        throw std::invalid_argument("mixing_diagnostic: a_n must be positive");
    }
    const std::size_t nt = tests.size();
    // Per replicate and test: the whole-sample term and the block average.
    std::vector<double> whole(reps * nt);
    std::vector<double> block(reps * nt);
    parallel_for(reps, 0, [&](std::size_t r) {
        const auto x = replicate(r);
        if (x.size() != scheme.n) {
            throw std::invalid_argument("mixing_diagnostic: replicate length differs from the scheme");
        }
        for (std::size_t t = 0; t < nt; ++t) {
            double total = 0.0;
            double avg = 0.0;
            for (std::size_t b = 0; b < scheme.k_n; ++b) {
                double s = 0.0;
                for (std::size_t i = b * scheme.r_n; i < (b + 1) * scheme.r_n; ++i) {
                    s += tests[t](x[i] / a_n);
                }
                total += s;
                avg += std::exp(-s);
            }
            whole[r * nt + t] = std::exp(-total);
            block[r * nt + t] = avg / static_cast<double>(scheme.k_n);
        }
    });
    DiagnosticReport rep;
    rep.condition = "mixing_A_prime";
    rep.parameters = {{"a_n", a_n},
                      {"n", static_cast<double>(scheme.n)},
                      {"r_n", static_cast<double>(scheme.r_n)},
                      {"k_n", static_cast<double>(scheme.k_n)},
                      {"replicates", static_cast<double>(reps)}};
    const double k = static_cast<double>(scheme.k_n);
    for (std::size_t t = 0; t < nt; ++t) {
        std::vector<double> a(reps);
        std::vector<double> b(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            a[r] = whole[r * nt + t];
            b[r] = block[r * nt + t];
        }
        const double ea = mean(a);
        const double eb = mean(b);
        const double slope = k * std::pow(eb, k - 1.0);
        std::vector<double> influence(reps);
        for (std::size_t r = 0; r < reps; ++r) {
            influence[r] = a[r] - slope * b[r];
        }
        const double se = mean_with_se(influence).se;
        const double d = ea - std::pow(eb, k);
        rep.grid.push_back(static_cast<double>(t));
        rep.curve.push_back(d);
        rep.intervals.push_back({d - 3.0 * se, d + 3.0 * se});
        rep.extras.push_back({"se_" + std::to_string(t), se});
        rep.extras.push_back({"whole_" + std::to_string(t), ea});
        rep.extras.push_back({"product_" + std::to_string(t), std::pow(eb, k)});
    }
    rep.extras.push_back({"verdict_consistent_with_A_prime",
                          std::all_of(rep.intervals.begin(), rep.intervals.end(),
                                      [](const auto& iv) { return iv.first <= 0.0 && iv.second >= 0.0; })
                              ? 1.0
                              : 0.0});
    return rep;
}

DiagnosticReport mixing_diagnostic(const ModelSpec& spec, std::size_t n, const BlockingScheme& scheme,
                                   const std::vector<TentFunction>& tests, std::size_t reps, std::uint64_t seed) {
    const double a_n = normalizing_sequence(spec, n).value;
    return mixing_diagnostic([&](std::size_t r) { return simulate_series(spec, n, seed, r); }, a_n, scheme, tests,
                             reps);
}

}  // namespace rvlab
