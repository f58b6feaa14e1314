#include "rvlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rvlab/parallel.hpp"

namespace rvlab {

void MarginalSpec::validate() const {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw std::invalid_argument("marginal: alpha must lie in (0, 2)");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("marginal: p must lie in [0, 1]");
    }
    if (!(scale > 0.0)) {
        throw std::invalid_argument("marginal: scale must be positive");
    }
}

double sample_pareto(const MarginalSpec& m, Rng& rng) {
    const double sign = rng.uniform() < m.p ? 1.0 : -1.0;
    return sign * m.scale * std::pow(rng.uniform(), -1.0 / m.alpha);
}

double pareto_from_normal(const MarginalSpec& m, double a) {
    const double upper = 0.5 * std::erfc(a / std::numbers::sqrt2);
    if (upper < m.p) {
        return m.scale * std::pow(upper / m.p, -1.0 / m.alpha);
    }
    const double lower = 0.5 * std::erfc(-a / std::numbers::sqrt2);
    return -m.scale * std::pow(std::max(lower, 1e-300) / m.q(), -1.0 / m.alpha);
}

namespace {

// Zeroth and first moments of the Pareto(alpha, w_min) law over [lo, hi].
struct Moments {
    double mass = 0.0;
    double first = 0.0;
};

Moments pareto_moments(double alpha, double w_min, double lo, double hi) {
    lo = std::max(lo, w_min);
    if (!(hi > lo)) {
        return {};
    }
    Moments out;
    out.mass = std::pow(w_min / lo, alpha) - std::pow(w_min / hi, alpha);
    const double log_ratio = std::log(hi / lo);
    const double beta = 1.0 - alpha;
    const double integral = std::abs(beta) < 1e-12 ? log_ratio : std::expm1(beta * log_ratio) / beta;
    out.first = alpha * w_min * std::pow(lo / w_min, beta) * integral;
    return out;
}

}  // namespace

double truncated_shifted_mean(const MarginalSpec& m, double c, double shift, double bound) {
    const double w_min = c * m.scale;
    double total = 0.0;
    if (m.p > 0.0) {
        const Moments pos = pareto_moments(m.alpha, w_min, -bound - shift, bound - shift);
        total += m.p * (pos.first + shift * pos.mass);
    }
    if (m.q() > 0.0) {
        const Moments neg = pareto_moments(m.alpha, w_min, shift - bound, shift + bound);
        total += m.q() * (shift * neg.mass - neg.first);
    }
    return total;
}

std::string model_name(const ModelSpec& spec) {
    struct Visitor {
        std::string operator()(const IidModel&) const { return "iid"; }
        std::string operator()(const MaModel&) const { return "ma"; }
        std::string operator()(const Garch11SquaredModel&) const { return "garch11sq"; }
        std::string operator()(const StochVolModel&) const { return "stochvol"; }
        std::string operator()(const IsolatedExtremesModel&) const { return "isolated"; }
    };
    return std::visit(Visitor{}, spec);
}

ModelSpec make_ma(const MarginalSpec& marginal, std::vector<double> coefficients) {
    marginal.validate();
    if (coefficients.empty()) {
        throw std::invalid_argument("ma: at least one coefficient required");
    }
    if (!(coefficients.front() > 0.0) || !(coefficients.back() > 0.0)) {
        throw std::invalid_argument("ma: first and last coefficients must be positive");
    }
    double norm = 0.0;
    for (double c : coefficients) {
        if (!(c >= 0.0)) {
            throw std::invalid_argument("ma: coefficients must be nonnegative");
        }
        norm += std::pow(c, marginal.alpha);
    }
    const double factor = std::pow(norm, -1.0 / marginal.alpha);
    if (std::abs(norm - 1.0) > 1e-12) {
        for (double& c : coefficients) {
            c *= factor;
        }
    }
    return MaModel{marginal, std::move(coefficients)};
}

McEstimate garch_log_moment(double alpha1, double beta1, std::size_t draws, std::uint64_t seed) {
    Rng rng(seed, stream::garch, 0);
    std::vector<double> v(draws);
    for (auto& x : v) {
        const double z = rng.normal();
        x = std::log(alpha1 * z * z + beta1);
    }
    McEstimate e = mean_with_se(v);
    e.seed = seed;
    return e;
}

ModelSpec make_garch11_squared(double alpha0, double alpha1, double beta1) {
    const Garch11SquaredModel g{alpha0, alpha1, beta1};
    validate_model(g);
    const McEstimate lm = garch_log_moment(alpha1, beta1);
    if (!(lm.value < 0.0)) {
        throw std::invalid_argument("garch: E ln(alpha1 Z^2 + beta1) >= 0, no stationary solution");
    }
    return g;
}

double garch_power_moment(double alpha1, double beta1, double kappa) {
    // Composite Simpson on [0, 40] for 2 * int (alpha1 z^2 + beta1)^kappa phi(z) dz;
    // the integrand is computed in log space.
    constexpr int intervals = 40000;
    constexpr double upper = 40.0;
    const double h = upper / intervals;
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi);
    auto f = [&](double z) {
        const double base = alpha1 * z * z + beta1;
        if (base <= 0.0) {
            return kappa > 0.0 ? 0.0 : 1.0;
        }
        return std::exp(kappa * std::log(base) - 0.5 * z * z + log_norm);
    };
    double s = f(0.0) + f(upper);
    for (int k = 1; k < intervals; ++k) {
        s += f(k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    }
    return 2.0 * s * h / 3.0;
}

double garch_tail_index(double alpha1, double beta1) {
    if (!(alpha1 > 0.0)) {
        throw std::invalid_argument("garch_tail_index: alpha1 must be positive");
    }
    auto h = [&](double kappa) { return garch_power_moment(alpha1, beta1, kappa) - 1.0; };
    double lo = 1e-6;
    if (!(h(lo) < 0.0)) {
        throw std::invalid_argument("garch_tail_index: E ln(alpha1 Z^2 + beta1) >= 0");
    }
    double hi = 1.0;
    while (h(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 256.0) {
            throw std::invalid_argument("garch_tail_index: no root below 256");
        }
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void validate_model(const ModelSpec& spec) {
    struct Visitor {
        void operator()(const IidModel& m) const { m.marginal.validate(); }
        void operator()(const MaModel& m) const {
            m.marginal.validate();
            if (m.coefficients.empty() || !(m.coefficients.front() > 0.0) || !(m.coefficients.back() > 0.0)) {
                throw std::invalid_argument("ma: first and last coefficients must be positive");
            }
            for (double c : m.coefficients) {
                if (!(c >= 0.0)) {
                    throw std::invalid_argument("ma: coefficients must be nonnegative");
                }
            }
        }
        void operator()(const Garch11SquaredModel& g) const {
            if (!(g.alpha0 > 0.0) || !(g.alpha1 >= 0.0) || !(g.beta1 >= 0.0)) {
                throw std::invalid_argument("garch: need alpha0 > 0, alpha1 >= 0, beta1 >= 0");
            }
            if (!(g.alpha1 > 0.0)) {
                throw std::invalid_argument("garch: alpha1 must be positive for a heavy-tailed series");
            }
        }
        void operator()(const StochVolModel& m) const {
            m.marginal.validate();
            if (!(std::abs(m.phi) < 1.0) || !(m.vol_scale >= 0.0)) {
                throw std::invalid_argument("stochvol: need |phi| < 1 and vol_scale >= 0");
            }
        }
        void operator()(const IsolatedExtremesModel& m) const {
            m.marginal.validate();
            if (!(std::abs(m.phi) < 1.0)) {
                throw std::invalid_argument("isolated: need |phi| < 1");
            }
        }
    };
    std::visit(Visitor{}, spec);
}

double tail_index(const ModelSpec& spec) {
    if (const auto* g = std::get_if<Garch11SquaredModel>(&spec)) {
        return garch_tail_index(g->alpha1, g->beta1);
    }
    return std::visit(
        [](const auto& m) -> double {
            if constexpr (requires { m.marginal; }) {
                return m.marginal.alpha;
            } else {
                return 0.0;
            }
        },
        spec);
}

double positive_tail_weight(const ModelSpec& spec) {
    if (std::holds_alternative<Garch11SquaredModel>(spec)) {
        return 1.0;
    }
    return std::visit(
        [](const auto& m) -> double {
            if constexpr (requires { m.marginal; }) {
                return m.marginal.p;
            } else {
                return 1.0;
            }
        },
        spec);
}

namespace {

std::vector<double> simulate_iid(const IidModel& m, std::size_t n, Rng& rng) {
    std::vector<double> x(n);
    for (auto& v : x) {
        v = sample_pareto(m.marginal, rng);
    }
    return x;
}

std::vector<double> simulate_ma(const MaModel& m, std::size_t n, Rng& rng) {
    const std::size_t order = m.coefficients.size() - 1;
    std::vector<double> z(n + order);
    for (auto& v : z) {
        v = sample_pareto(m.marginal, rng);
    }
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        double s = 0.0;
        for (std::size_t i = 0; i <= order; ++i) {
            s += m.coefficients[i] * z[t + order - i];
        }
        x[t] = s;
    }
    return x;
}

std::vector<double> simulate_garch(const Garch11SquaredModel& g, std::size_t n, Rng& rng) {
    const double persistence = g.alpha1 + g.beta1;
    double sigma2 = persistence < 1.0 ? g.alpha0 / (1.0 - persistence) : g.alpha0;
    std::vector<double> x(n);
    for (std::size_t t = 0; t < default_burn_in + n; ++t) {
        const double z = rng.normal();
        const double z2 = z * z;
        if (t >= default_burn_in) {
            x[t - default_burn_in] = sigma2 * z2;
        }
        sigma2 = g.alpha0 + (g.alpha1 * z2 + g.beta1) * sigma2;
    }
    return x;
}

std::vector<double> simulate_stochvol(const StochVolModel& m, std::size_t n, Rng& rng) {
    double h = 0.0;
    std::vector<double> x(n);
    for (std::size_t t = 0; t < default_burn_in + n; ++t) {
        h = m.phi * h + m.vol_scale * rng.normal();
        const double z = sample_pareto(m.marginal, rng);
        if (t >= default_burn_in) {
            x[t - default_burn_in] = std::exp(h) * z;
        }
    }
    return x;
}

std::vector<double> simulate_isolated(const IsolatedExtremesModel& m, std::size_t n, Rng& rng) {
    const double innovation = std::sqrt(1.0 - m.phi * m.phi);
    double a = rng.normal();
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            a = m.phi * a + innovation * rng.normal();
        }
        x[t] = pareto_from_normal(m.marginal, a);
    }
    return x;
}

}  // namespace

std::vector<double> simulate_series(const ModelSpec& spec, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    if (n < 1) {
        throw std::invalid_argument("simulate_series: n must be at least 1");
    }
    validate_model(spec);
    Rng rng(seed, stream::series, stream);
    struct Visitor {
        std::size_t n;
        Rng& rng;
        std::vector<double> operator()(const IidModel& m) const { return simulate_iid(m, n, rng); }
        std::vector<double> operator()(const MaModel& m) const { return simulate_ma(m, n, rng); }
        std::vector<double> operator()(const Garch11SquaredModel& m) const { return simulate_garch(m, n, rng); }
        std::vector<double> operator()(const StochVolModel& m) const { return simulate_stochvol(m, n, rng); }
        std::vector<double> operator()(const IsolatedExtremesModel& m) const { return simulate_isolated(m, n, rng); }
    };
    return std::visit(Visitor{n, rng}, spec);
}

namespace {

constexpr std::uint64_t kCalibrationStream = 0xffffffffULL;

const MarginalSpec* analytic_marginal(const ModelSpec& spec) {
    if (const auto* m = std::get_if<IidModel>(&spec)) {
        return &m->marginal;
    }
    if (const auto* m = std::get_if<MaModel>(&spec)) {
        return &m->marginal;
    }
    if (const auto* m = std::get_if<IsolatedExtremesModel>(&spec)) {
        return &m->marginal;
    }
    return nullptr;
}

}  // namespace

Normalization normalizing_sequence(const ModelSpec& spec, std::size_t n, const CalibrationOptions& opts) {
    if (n < 1) {
        throw std::invalid_argument("normalizing_sequence: n must be at least 1");
    }
    validate_model(spec);
    if (const MarginalSpec* m = analytic_marginal(spec)) {
        return {m->scale * std::pow(static_cast<double>(n), 1.0 / m->alpha), "analytic", 0};
    }
    const std::size_t length = std::max(opts.draws, 100 * n);
    auto x = simulate_series(spec, length, opts.seed, kCalibrationStream);
    for (auto& v : x) {
        v = std::abs(v);
    }
    // (1 - 1/n)-quantile: the value with length / n observations above it.
    const std::size_t above = std::max<std::size_t>(1, length / n);
    const auto kth = x.begin() + static_cast<std::ptrdiff_t>(length - above);
    std::nth_element(x.begin(), kth, x.end());
    return {*kth, "empirical", length};
}

namespace {

// Maps one uniform onto the two-sided Pareto law, monotone within each sign.
double pareto_from_uniform(const MarginalSpec& m, double u) {
    if (u < m.p) {
        return m.scale * std::pow(u / m.p, -1.0 / m.alpha);
    }
    return -m.scale * std::pow((u - m.p) / m.q(), -1.0 / m.alpha);
}

// Conditional Monte Carlo for the MA centering: the leading innovation is
// integrated in closed form, the next one is stratified, the rest are drawn.
Centering ma_centering(const MaModel& ma, double bound, const CalibrationOptions& opts) {
    const std::size_t strata = std::max<std::size_t>(opts.draws / 2, 1);
    std::vector<double> means(strata);
    std::vector<double> half_diff_sq(strata);
    const double c0 = ma.coefficients.front();
    parallel_chunks(strata, 8192, 0, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Rng rng(opts.seed, stream::calibration, chunk);
        for (std::size_t k = begin; k < end; ++k) {
            double g[2];
            for (double& gi : g) {
                const double u = (static_cast<double>(k) + rng.uniform()) / static_cast<double>(strata);
                double shift = ma.coefficients[1] * pareto_from_uniform(ma.marginal, u);
                for (std::size_t i = 2; i < ma.coefficients.size(); ++i) {
                    shift += ma.coefficients[i] * sample_pareto(ma.marginal, rng);
                }
                gi = truncated_shifted_mean(ma.marginal, c0, shift, bound);
            }
            means[k] = 0.5 * (g[0] + g[1]);
            half_diff_sq[k] = 0.25 * (g[0] - g[1]) * (g[0] - g[1]);
        }
    });
    Centering out;
    out.method = "conditional_mc";
    out.estimate.value = pairwise_sum(means) / static_cast<double>(strata);
    out.estimate.se = std::sqrt(pairwise_sum(half_diff_sq)) / static_cast<double>(strata);
    out.estimate.reps = 2 * strata;
    out.estimate.seed = opts.seed;
    return out;
}

Centering stochvol_centering(const StochVolModel& sv, double bound, const CalibrationOptions& opts) {
    const double sd = sv.vol_scale / std::sqrt(1.0 - sv.phi * sv.phi);
    std::vector<double> g(opts.draws);
    parallel_chunks(g.size(), 8192, 0, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Rng rng(opts.seed, stream::calibration, chunk);
        for (std::size_t k = begin; k < end; ++k) {
            g[k] = truncated_shifted_mean(sv.marginal, std::exp(sd * rng.normal()), 0.0, bound);
        }
    });
    Centering out{mean_with_se(g), "conditional_mc"};
    out.estimate.seed = opts.seed;
    return out;
}

Centering path_centering(const ModelSpec& spec, double bound, const CalibrationOptions& opts) {
    const auto x = simulate_series(spec, opts.draws, opts.seed, kCalibrationStream);
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), [bound](double v) { return std::abs(v) <= bound ? v : 0.0; });
    // Batch means over 100 contiguous batches for the dependent sample.
    constexpr std::size_t batches = 100;
    const std::size_t len = y.size() / batches;
    std::vector<double> batch_means;
    for (std::size_t b = 0; b < batches && len > 0; ++b) {
        batch_means.push_back(mean(std::span<const double>(y).subspan(b * len, len)));
    }
    Centering out;
    out.method = "mc";
    out.estimate.value = mean(y);
    out.estimate.se = batch_means.size() > 1 ? mean_with_se(batch_means).se : 0.0;
    out.estimate.reps = y.size();
    out.estimate.seed = opts.seed;
    return out;
}

}  // namespace

Centering centering_sequence(const ModelSpec& spec, double bound, const CalibrationOptions& opts) {
    if (!(bound > 0.0)) {
        throw std::invalid_argument("centering_sequence: bound must be positive");
    }
    validate_model(spec);
    if (const auto* m = std::get_if<IidModel>(&spec)) {
        return {{truncated_shifted_mean(m->marginal, 1.0, 0.0, bound), 0.0, 0, 0}, "closed_form"};
    }
    if (const auto* m = std::get_if<IsolatedExtremesModel>(&spec)) {
        return {{truncated_shifted_mean(m->marginal, 1.0, 0.0, bound), 0.0, 0, 0}, "closed_form"};
    }
    if (const auto* m = std::get_if<MaModel>(&spec)) {
        if (m->coefficients.size() == 1) {
            return {{truncated_shifted_mean(m->marginal, m->coefficients[0], 0.0, bound), 0.0, 0, 0},
                    "closed_form"};
        }
        return ma_centering(*m, bound, opts);
    }
    if (const auto* m = std::get_if<StochVolModel>(&spec)) {
        return stochvol_centering(*m, bound, opts);
    }
    return path_centering(spec, bound, opts);
}

CadlagPath build_partial_sum_path(std::span<const double> series, double a_n, double b_n) {
    if (!(a_n > 0.0)) {
        throw std::invalid_argument("build_partial_sum_path: a_n must be positive");
    }
    const double n = static_cast<double>(series.size());
    std::vector<Jump> jumps;
    jumps.reserve(series.size());
    double running = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        running += series[k];
        const double kk = static_cast<double>(k + 1);
        jumps.push_back({kk / n, (running - kk * b_n) / a_n});
    }
    return CadlagPath(0.0, std::move(jumps));
}

double partial_sum_terminal(std::span<const double> series, double a_n, double b_n) {
    double s = 0.0;
    for (double x : series) {
        s += x;
    }
    return (s - static_cast<double>(series.size()) * b_n) / a_n;
}

}  // namespace rvlab
