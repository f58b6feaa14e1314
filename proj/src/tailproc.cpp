#include "rvlab/tailproc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "rvlab/montecarlo.hpp"

namespace rvlab {

double TailWindow::at(int lag) const {
    if (lag < first_lag || lag > last_lag()) {
        return 0.0;
    }
    return values[static_cast<std::size_t>(lag - first_lag)];
}

void LevyTriple::validate() const {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw std::invalid_argument("triple: alpha must lie in (0, 2)");
    }
    if (!(c_plus >= 0.0) || !(c_minus >= 0.0) || !std::isfinite(c_plus) || !std::isfinite(c_minus)) {
        throw std::invalid_argument("triple: c_plus and c_minus must be finite and nonnegative");
    }
    if (!std::isfinite(b)) {
        throw std::invalid_argument("triple: drift must be finite");
    }
}

double LevyTriple::truncated_first_moment(double lo, double hi) const {
    if (!(hi > lo)) {
        return 0.0;
    }
    const double w = c_plus - c_minus;
    if (alpha == 1.0) {
        return w * std::log(hi / lo);
    }
    return w * alpha / (1.0 - alpha) * (std::pow(hi, 1.0 - alpha) - std::pow(lo, 1.0 - alpha));
}

std::string triple_to_json(const TripleReport& r) {
    nlohmann::ordered_json j;
    j["alpha"] = r.triple.alpha;
    j["c_plus"] = r.triple.c_plus;
    j["c_minus"] = r.triple.c_minus;
    j["b"] = r.triple.b;
    j["method"] = r.method;
    j["se"] = {{"c_plus", r.se_c_plus}, {"c_minus", r.se_c_minus}, {"b", r.se_b}};
    j["reps"] = r.reps;
    j["seed"] = r.seed;
    return j.dump(2);
}

TripleReport triple_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    auto num = [](const nlohmann::json& v) {
        return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    TripleReport r;
    r.triple.alpha = j.at("alpha").get<double>();
    r.triple.c_plus = j.at("c_plus").get<double>();
    r.triple.c_minus = j.at("c_minus").get<double>();
    r.triple.b = num(j.at("b"));
    r.method = j.value("method", "user");
    if (j.contains("se")) {
        const auto& se = j["se"];
        r.se_c_plus = num(se.value("c_plus", nlohmann::json(0.0)));
        r.se_c_minus = num(se.value("c_minus", nlohmann::json(0.0)));
        r.se_b = num(se.value("b", nlohmann::json(0.0)));
    }
    r.reps = j.value("reps", std::size_t{0});
    r.seed = j.value("seed", std::uint64_t{0});
    return r;
}

namespace {

std::vector<double> normalized(std::vector<double> c, double alpha) {
    double norm = 0.0;
    for (double v : c) {
        if (!(v >= 0.0)) {
            throw std::invalid_argument("coefficients must be nonnegative");
        }
        norm += std::pow(v, alpha);
    }
    if (!(norm > 0.0)) {
        throw std::invalid_argument("coefficients must not all vanish");
    }
    const double f = std::pow(norm, -1.0 / alpha);
    for (double& v : c) {
        v *= f;
    }
    return c;
}

void check_lags(int lag_min, int lag_max) {
    if (lag_min > 0 || lag_max < 0) {
        throw std::invalid_argument("tail window must contain lag 0");
    }
}

TailWindow draw_ma(const std::vector<double>& c, const std::vector<double>& cdf, double alpha, double p, Rng& rng,
                   int lag_min, int lag_max) {
    const double u = rng.uniform() * cdf.back();
    const auto k = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const int kk = std::min(k, static_cast<int>(c.size()) - 1);
    const double sign = rng.uniform() < p ? 1.0 : -1.0;
    const double y0 = sign * std::pow(rng.uniform(), -1.0 / alpha);
    TailWindow w{lag_min, std::vector<double>(static_cast<std::size_t>(lag_max - lag_min + 1), 0.0)};
    for (int lag = lag_min; lag <= lag_max; ++lag) {
        const int idx = lag + kk;
        if (idx >= 0 && idx < static_cast<int>(c.size())) {
            w.values[static_cast<std::size_t>(lag - lag_min)] = c[static_cast<std::size_t>(idx)] / c[kk] * y0;
        }
    }
    return w;
}

std::vector<double> cumulative_powers(const std::vector<double>& c, double alpha) {
    std::vector<double> cdf(c.size());
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        s += std::pow(c[i], alpha);
        cdf[i] = s;
    }
    return cdf;
}

}  // namespace

TailWindow ma_tail_process(const std::vector<double>& coefficients, double alpha, double p, Rng& rng, int lag_min,
                           int lag_max) {
    check_lags(lag_min, lag_max);
    const auto c = normalized(coefficients, alpha);
    return draw_ma(c, cumulative_powers(c, alpha), alpha, p, rng, lag_min, lag_max);
}

TailWindow ma_tail_process(const std::vector<double>& coefficients, double alpha, double p, std::uint64_t seed,
                           int lag_min, int lag_max) {
    Rng rng(seed, stream::tail, 0);
    return ma_tail_process(coefficients, alpha, p, rng, lag_min, lag_max);
}

TailSampler iid_tail_sampler(double alpha, double p, int lag_min, int lag_max) {
    check_lags(lag_min, lag_max);
    TailSampler s;
    s.alpha = alpha;
    s.p = p;
    s.lag_min = lag_min;
    s.lag_max = lag_max;
    s.draw = [alpha, p, lag_min, lag_max](Rng& rng) {
        TailWindow w{lag_min, std::vector<double>(static_cast<std::size_t>(lag_max - lag_min + 1), 0.0)};
        const double sign = rng.uniform() < p ? 1.0 : -1.0;
        w.values[static_cast<std::size_t>(-lag_min)] = sign * std::pow(rng.uniform(), -1.0 / alpha);
        return w;
    };
    return s;
}

TailSampler ma_tail_sampler(const MaModel& model, int lag_min, int lag_max) {
    check_lags(lag_min, lag_max);
    const double alpha = model.marginal.alpha;
    const double p = model.marginal.p;
    auto c = normalized(model.coefficients, alpha);
    auto cdf = cumulative_powers(c, alpha);
    const int m = static_cast<int>(c.size()) - 1;
    TailSampler s;
    s.alpha = alpha;
    s.p = p;
    s.lag_min = lag_min;
    s.lag_max = lag_max;
    s.exact_lag_min = -m;
    s.exact_lag_max = m;
    s.draw = [c = std::move(c), cdf = std::move(cdf), alpha, p, lag_min, lag_max](Rng& rng) {
        return draw_ma(c, cdf, alpha, p, rng, lag_min, lag_max);
    };
    return s;
}

TailSampler tail_sampler(const ModelSpec& spec) {
    validate_model(spec);
    if (const auto* ma = std::get_if<MaModel>(&spec)) {
        const int m = static_cast<int>(ma->coefficients.size()) - 1;
        return ma_tail_sampler(*ma, -m, m);
    }
    if (std::holds_alternative<Garch11SquaredModel>(spec)) {
        throw std::invalid_argument("tail_sampler: no analytic tail process for garch; use empirical windows");
    }
    return iid_tail_sampler(tail_index(spec), positive_tail_weight(spec));
}

TailSampler empirical_tail_sampler(std::vector<TailWindow> population, double alpha) {
    if (population.empty()) {
        throw std::invalid_argument("empirical_tail_sampler: empty population");
    }
    const int lo = population.front().first_lag;
    const int hi = population.front().last_lag();
    std::size_t positive = 0;
    for (const auto& w : population) {
        if (w.first_lag != lo || w.last_lag() != hi) {
            throw std::invalid_argument("empirical_tail_sampler: windows must share one lag range");
        }
        positive += w.y0() > 0.0;
    }
    TailSampler s;
    s.alpha = alpha;
    s.p = static_cast<double>(positive) / static_cast<double>(population.size());
    s.lag_min = s.exact_lag_min = lo;
    s.lag_max = s.exact_lag_max = hi;
    s.draw = [pop = std::move(population)](Rng& rng) { return pop[rng.below(pop.size())]; };
    return s;
}

double extremal_index_ma(const std::vector<double>& coefficients, double alpha) {
    const auto c = normalized(coefficients, alpha);
    double best = 0.0;
    for (double v : c) {
        best = std::max(best, std::pow(v, alpha));
    }
    return best;
}

double extremal_index_theoretical(const ModelSpec& spec) {
    validate_model(spec);
    if (const auto* ma = std::get_if<MaModel>(&spec)) {
        return extremal_index_ma(ma->coefficients, ma->marginal.alpha);
    }
    if (std::holds_alternative<Garch11SquaredModel>(spec)) {
        throw std::invalid_argument("extremal_index_theoretical: no closed form for garch");
    }
    return 1.0;
}

namespace {

void require_complete(const TailSampler& s, const char* what) {
    if (!s.draw) {
        throw std::invalid_argument(std::string(what) + ": sampler has no draw function");
    }
    if (s.lag_max < s.exact_lag_max) {
        throw std::invalid_argument(std::string(what) + ": window too short (R < m)");
    }
    if (s.lag_min > s.exact_lag_min) {
        throw std::invalid_argument(std::string(what) + ": window too short on the negative side");
    }
}

bool past_is_small(const TailWindow& w) {
    for (int lag = w.first_lag; lag <= -1; ++lag) {
        if (std::abs(w.at(lag)) > 1.0) {
            return false;
        }
    }
    return true;
}

bool past_vanishes(const TailWindow& w) {
    for (int lag = w.first_lag; lag <= -1; ++lag) {
        if (w.at(lag) != 0.0) {
            return false;
        }
    }
    return true;
}

McEstimate finish(std::vector<double> draws, std::uint64_t seed, double scale = 1.0) {
    McEstimate e = mean_with_se(draws);
    e.value *= scale;
    e.se *= scale;
    e.seed = seed;
    return e;
}

}  // namespace

McEstimate extremal_index_mc(const TailSampler& sampler, std::size_t reps, std::uint64_t seed) {
    require_complete(sampler, "extremal_index_mc");
    if (reps < 2) {
        throw std::invalid_argument("extremal_index_mc: need at least two replicates");
    }
    const double alpha = sampler.alpha;
    auto draws = mc_draws(reps, seed, stream::tail, [&](Rng& rng) {
        const TailWindow w = sampler.draw(rng);
        double later = 0.0;
        for (int lag = 1; lag <= w.last_lag(); ++lag) {
            later = std::max(later, std::abs(w.spectral(lag)));
        }
        const double from_zero = std::max(1.0, later);
        return std::pow(from_zero, alpha) - std::pow(later, alpha);
    });
    return finish(std::move(draws), seed);
}

ClusterDraw sample_cluster_process(const TailSampler& sampler, Rng& rng, std::size_t cap) {
    require_complete(sampler, "sample_cluster_process");
    for (std::size_t attempt = 1; attempt <= cap; ++attempt) {
        const TailWindow w = sampler.draw(rng);
        if (!past_is_small(w)) {
            continue;
        }
        ClusterDraw out;
        out.attempts = attempt;
        for (double v : w.values) {
            if (v != 0.0) {
                out.marks.push_back(v);
            }
        }
        return out;
    }
    throw std::runtime_error("sample_cluster_process: no window accepted within the rejection cap");
}

ClusterDraw sample_cluster_process(const TailSampler& sampler, std::uint64_t seed, std::size_t cap) {
    Rng rng(seed, stream::cluster, 0);
    return sample_cluster_process(sampler, rng, cap);
}

McEstimate cluster_acceptance_rate(const TailSampler& sampler, std::size_t attempts, std::uint64_t seed) {
    require_complete(sampler, "cluster_acceptance_rate");
    if (attempts < 2) {
        throw std::invalid_argument("cluster_acceptance_rate: need at least two attempts");
    }
    auto draws = mc_draws(attempts, seed, stream::cluster,
                          [&](Rng& rng) { return past_is_small(sampler.draw(rng)) ? 1.0 : 0.0; });
    return finish(std::move(draws), seed);
}

namespace {

// u sum_{i>=0} Y_i 1{|Y_i| > 1} when the past stays below 1, NaN otherwise.
double cluster_sum(const TailWindow& w, double u) {
    if (!past_is_small(w)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double s = 0.0;
    for (int lag = 0; lag <= w.last_lag(); ++lag) {
        const double y = w.at(lag);
        if (std::abs(y) > 1.0) {
            s += y;
        }
    }
    return u * s;
}

}  // namespace

NuTailCounts nu_u_counts(double u, const std::vector<double>& x, const TailSampler& sampler, std::size_t reps,
                         std::uint64_t seed) {
    if (!(u > 0.0)) {
        throw std::invalid_argument("nu_u: u must be positive");
    }
    if (reps < 100) {
        throw std::invalid_argument("nu_u: at least 100 replicates required");
    }
    for (double v : x) {
        if (!(v > 0.0)) {
            throw std::invalid_argument("nu_u: x must be positive");
        }
    }
    require_complete(sampler, "nu_u");
    const auto sums = mc_draws(reps, seed, stream::tail, [&](Rng& rng) { return cluster_sum(sampler.draw(rng), u); });
    NuTailCounts out{u, x, std::vector<std::size_t>(x.size(), 0), std::vector<std::size_t>(x.size(), 0), reps, seed};
    for (double w : sums) {
        if (std::isnan(w)) {
            continue;
        }
        for (std::size_t j = 0; j < x.size(); ++j) {
            out.positive[j] += w > x[j];
            out.negative[j] += w < -x[j];
        }
    }
    return out;
}

McEstimate nu_u_tail(double u, double x, const TailSampler& sampler, std::size_t reps, std::uint64_t seed,
                     int sign) {
    const auto counts = nu_u_counts(u, {x}, sampler, reps, seed);
    const double hits = static_cast<double>(sign >= 0 ? counts.positive[0] : counts.negative[0]);
    const double n = static_cast<double>(reps);
    const double prob = hits / n;
    const double scale = std::pow(u, -sampler.alpha);
    return {scale * prob, scale * std::sqrt(prob * (1.0 - prob) / n), reps, seed};
}

LevyTriple levy_triple_ma(const std::vector<double>& coefficients, double alpha, double p) {
    if (alpha == 1.0) {
        throw std::invalid_argument("levy_triple_ma: the alpha = 1 drift is not available in closed form");
    }
    const auto c = normalized(coefficients, alpha);
    const double total = std::pow(std::accumulate(c.begin(), c.end(), 0.0), alpha);
    const double q = 1.0 - p;
    return {alpha, p * total, q * total, (p - q) * alpha / (1.0 - alpha) * (total - 1.0)};
}

LevyTriple levy_triple_ma(const MaModel& model) {
    return levy_triple_ma(model.coefficients, model.marginal.alpha, model.marginal.p);
}

TripleReport levy_triple_spectral(const TailSampler& sampler, std::size_t reps, std::uint64_t seed) {
    require_complete(sampler, "levy_triple_spectral");
    if (reps < 2) {
        throw std::invalid_argument("levy_triple_spectral: need at least two replicates");
    }
    const double alpha = sampler.alpha;
    // Both passes replay the same substreams, so gp[i] and gm[i] share a window.
    auto one_sided = [&](int sign) {
        return mc_draws(reps, seed, stream::tail, [&](Rng& rng) {
            const TailWindow w = sampler.draw(rng);
            if (!past_vanishes(w)) {
                return 0.0;
            }
            double s = 0.0;
            for (int lag = 0; lag <= w.last_lag(); ++lag) {
                s += w.spectral(lag);
            }
            return std::pow(std::max(sign * s, 0.0), alpha);
        });
    };
    const auto gp = one_sided(1);
    const auto gm = one_sided(-1);
    std::vector<double> diff(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        diff[i] = gp[i] - gm[i];
    }
    const McEstimate cp = mean_with_se(gp);
    const McEstimate cm = mean_with_se(gm);
    const McEstimate d = mean_with_se(diff);
    TripleReport r;
    r.method = "monte_carlo";
    r.reps = reps;
    r.seed = seed;
    r.triple = {alpha, cp.value, cm.value, std::numeric_limits<double>::quiet_NaN()};
    r.se_c_plus = cp.se;
    r.se_c_minus = cm.se;
    if (alpha != 1.0) {
        const double k = alpha / (1.0 - alpha);
        r.triple.b = k * (d.value - (2.0 * sampler.p - 1.0));
        r.se_b = std::abs(k) * d.se;
    } else {
        r.se_b = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

double normal_abs_moment(double two_alpha) {
    return std::pow(2.0, two_alpha / 2.0) * std::tgamma((two_alpha + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
}

GarchCplus garch_cplus(double alpha0, double alpha1, double beta1, double alpha, std::size_t reps,
                       std::size_t terms, std::uint64_t seed) {
    validate_model(Garch11SquaredModel{alpha0, alpha1, beta1});
    if (!(garch_log_moment(alpha1, beta1).value < 0.0)) {
        throw std::invalid_argument("garch_cplus: E ln(alpha1 Z^2 + beta1) >= 0");
    }
    if (!(alpha > 0.0) || reps < 2 || terms < 1) {
        throw std::invalid_argument("garch_cplus: need alpha > 0, reps >= 2, terms >= 1");
    }
    GarchCplus out;
    {
        auto m = mc_draws(200000, seed, stream::garch, [&](Rng& rng) {
            const double z = rng.normal();
            return std::pow(alpha1 * z * z + beta1, alpha);
        });
        out.moment_check = finish(std::move(m), seed);
        if (std::abs(out.moment_check.value - 1.0) > 4.0 * out.moment_check.se + 1e-12) {
            throw std::invalid_argument("garch_cplus: alpha does not solve E[(alpha1 Z^2 + beta1)^alpha] = 1");
        }
    }
    std::vector<double> last(reps);
    std::vector<double> g(reps);
    parallel_chunks(reps, mc_chunk_size, 0, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Rng rng(seed, stream::tail, chunk);
        for (std::size_t i = begin; i < end; ++i) {
            const double z0 = rng.normal();
            double z = rng.normal();
            double prod = 1.0;
            double total = 0.0;
            double term = 0.0;
            for (std::size_t t = 1; t <= terms; ++t) {
                prod *= alpha1 * z * z + beta1;
                z = rng.normal();
                term = z * z * prod;
                total += term;
                if (prod == 0.0) {
                    break;  // every later term is an exact zero
                }
            }
            last[i] = term;
            const double a = z0 * z0;
            g[i] = total > 0.0 ? std::pow(total, alpha) * std::expm1(alpha * std::log1p(a / total))
                               : std::pow(a, alpha);
        }
    });
    out.estimate = finish(std::move(g), seed, 1.0 / normal_abs_moment(2.0 * alpha));
    out.truncation_last_term = mean(last);
    return out;
}

double drift_bu(double u, const LevyTriple& triple, double p) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("drift_bu: u must lie in (0, 1)");
    }
    const LevyTriple mu{triple.alpha, p, 1.0 - p, 0.0};
    return triple.truncated_first_moment(u, 1.0) - mu.truncated_first_moment(u, 1.0);
}

McEstimate drift_bu(double u, const TailSampler& sampler, std::size_t reps, std::uint64_t seed) {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::invalid_argument("drift_bu: u must lie in (0, 1)");
    }
    if (reps < 100) {
        throw std::invalid_argument("drift_bu: at least 100 replicates required");
    }
    require_complete(sampler, "drift_bu");
    auto draws = mc_draws(reps, seed, stream::tail, [&](Rng& rng) {
        const double w = cluster_sum(sampler.draw(rng), u);
        return !std::isnan(w) && std::abs(w) > u && std::abs(w) <= 1.0 ? w : 0.0;
    });
    McEstimate e = finish(std::move(draws), seed, std::pow(u, -sampler.alpha));
    const LevyTriple mu{sampler.alpha, sampler.p, 1.0 - sampler.p, 0.0};
    e.value -= mu.truncated_first_moment(u, 1.0);
    return e;
}

double extrapolate_drift(const std::vector<double>& u, const std::vector<double>& b_u, double alpha) {
    if (u.size() != b_u.size() || u.size() < 2) {
        throw std::invalid_argument("extrapolate_drift: need at least two (u, b_u) pairs");
    }
    if (alpha == 1.0) {
        throw std::invalid_argument("extrapolate_drift: alpha = 1 has no power trend");
    }
    std::vector<double> x(u.size());
    std::transform(u.begin(), u.end(), x.begin(), [alpha](double v) { return std::pow(v, 1.0 - alpha); });
    const double mx = mean(x);
    const double my = mean(b_u);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (b_u[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("extrapolate_drift: u values must differ");
    }
    return my - sxy / sxx * mx;
}

}  // namespace rvlab
