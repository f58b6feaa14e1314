#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rvlab/models.hpp"
#include "rvlab/rng.hpp"
#include "rvlab/stats.hpp"

namespace rvlab {

/// Finite window {Y_i : first_lag <= i <= last_lag()} of a tail process.
struct TailWindow {
    int first_lag = 0;
    std::vector<double> values;

    int last_lag() const { return first_lag + static_cast<int>(values.size()) - 1; }
    /// Y_lag, zero outside the window.
    double at(int lag) const;
    double y0() const { return at(0); }
    /// Theta_lag = Y_lag / |Y_0|.
    double spectral(int lag) const { return at(lag) / std::abs(y0()); }
};

/// Source of tail windows. `exact_lag_min/max` is the smallest lag range
/// outside of which the process is known to vanish (unbounded samplers set
/// them to the window itself).
struct TailSampler {
    double alpha = 1.0;
    double p = 1.0;  ///< P(Theta_0 = +1)
    int lag_min = 0;
    int lag_max = 0;
    int exact_lag_min = 0;
    int exact_lag_max = 0;
    std::function<TailWindow(Rng&)> draw;

    /// True when the window covers every lag that can be nonzero.
    bool complete() const { return lag_min <= exact_lag_min && lag_max >= exact_lag_max; }
};

/// nu(x, inf) = c_plus x^-alpha, nu(-inf, -x) = c_minus x^-alpha, drift b.
struct LevyTriple {
    double alpha = 1.0;
    double c_plus = 0.0;
    double c_minus = 0.0;
    double b = 0.0;

    void validate() const;
    double tail_plus(double x) const { return c_plus * std::pow(x, -alpha); }
    double tail_minus(double x) const { return c_minus * std::pow(x, -alpha); }
    /// int_{lo < |x| <= hi} x nu(dx).
    double truncated_first_moment(double lo, double hi) const;
};

/// A triple together with how it was obtained.
struct TripleReport {
    LevyTriple triple;
    std::string method;  ///< "closed_form" or "monte_carlo"
    double se_c_plus = 0.0;
    double se_c_minus = 0.0;
    double se_b = 0.0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

std::string triple_to_json(const TripleReport& report);
TripleReport triple_from_json(const std::string& text);

/// One draw of the MA tail process: K with P(K = k) = c_k^alpha, |Y_0| Pareto,
/// Y_n = (c_{n+K} / c_K) Y_0. Coefficients are normalized first.
TailWindow ma_tail_process(const std::vector<double>& coefficients, double alpha, double p, Rng& rng, int lag_min,
                           int lag_max);
TailWindow ma_tail_process(const std::vector<double>& coefficients, double alpha, double p, std::uint64_t seed,
                           int lag_min, int lag_max);

/// Tail process with Y_i = 0 for i != 0.
TailSampler iid_tail_sampler(double alpha, double p, int lag_min = 0, int lag_max = 0);
TailSampler ma_tail_sampler(const MaModel& model, int lag_min, int lag_max);
/// Analytic sampler for a model where one exists. IID, stochastic volatility
/// and isolated extremes share the degenerate tail process; the MA window
/// defaults to [-m, m]. GARCH has none and throws.
TailSampler tail_sampler(const ModelSpec& spec);
/// Uniform resampling of an observed population of windows.
TailSampler empirical_tail_sampler(std::vector<TailWindow> population, double alpha);

/// theta = max_k c_k^alpha for normalized MA coefficients.
double extremal_index_ma(const std::vector<double>& coefficients, double alpha);
/// Closed form theta: 1 for models with asymptotically independent extremes,
/// max_k c_k^alpha for MA. Throws for GARCH.
double extremal_index_theoretical(const ModelSpec& spec);
/// Monte Carlo mean of sup_{i>=0} |Theta_i|^alpha - sup_{i>=1} |Theta_i|^alpha.
/// Throws if the sampler window stops before the last nonzero lag.
McEstimate extremal_index_mc(const TailSampler& sampler, std::size_t reps, std::uint64_t seed);

struct ClusterDraw {
    std::vector<double> marks;  ///< nonzero Y values of an accepted window
    std::size_t attempts = 0;
};

inline constexpr std::size_t default_rejection_cap = 1000000;

/// Rejection sampler for the cluster law: windows are accepted iff
/// sup_{i<=-1} |Y_i| <= 1. Throws std::runtime_error after `cap` attempts.
ClusterDraw sample_cluster_process(const TailSampler& sampler, Rng& rng, std::size_t cap = default_rejection_cap);
ClusterDraw sample_cluster_process(const TailSampler& sampler, std::uint64_t seed,
                                   std::size_t cap = default_rejection_cap);

/// Fraction of accepted windows over `attempts` independent draws.
McEstimate cluster_acceptance_rate(const TailSampler& sampler, std::size_t attempts, std::uint64_t seed);

/// nu^(u)(x, inf) (or nu^(u)(-inf, -x) for sign < 0):
/// u^-alpha P(u sum_{i>=0} Y_i 1{|Y_i| > 1} > x, sup_{i<=-1} |Y_i| <= 1).
McEstimate nu_u_tail(double u, double x, const TailSampler& sampler, std::size_t reps, std::uint64_t seed,
                     int sign = 1);

/// Event counts on a shared set of windows, for ratios across x.
struct NuTailCounts {
    double u = 0.0;
    std::vector<double> x;
    std::vector<std::size_t> positive;  ///< windows with W > x
    std::vector<std::size_t> negative;  ///< windows with W < -x
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};
NuTailCounts nu_u_counts(double u, const std::vector<double>& x, const TailSampler& sampler, std::size_t reps,
                         std::uint64_t seed);

/// Closed-form triple for a normalized MA model; throws for alpha = 1.
LevyTriple levy_triple_ma(const MaModel& model);
LevyTriple levy_triple_ma(const std::vector<double>& coefficients, double alpha, double p);

/// c_+ and c_- from the spectral formulas
/// E[max(+-sum_{i>=0} Theta_i, 0)^alpha 1{Theta_i = 0 for i <= -1}],
/// and b = alpha / (1 - alpha) (c_+ - c_- - (p - q)); b is NaN for alpha = 1.
TripleReport levy_triple_spectral(const TailSampler& sampler, std::size_t reps, std::uint64_t seed);

struct GarchCplus {
    McEstimate estimate;
    double truncation_last_term = 0.0;  ///< mean of the last retained term of T
    McEstimate moment_check;            ///< E[(alpha1 Z^2 + beta1)^alpha]
};

inline constexpr std::size_t default_garch_truncation = 1000;

/// c_+ = E[(Z_0^2 + T)^alpha - T^alpha] / E|Z|^(2 alpha), with T the series
/// sum_{t>=1} Z_{t+1}^2 prod_{i<=t} (alpha1 Z_i^2 + beta1) cut after `terms`.
/// Throws when E[(alpha1 Z^2 + beta1)^alpha] differs from 1 by more than four
/// Monte Carlo standard errors, or the stationarity check fails.
GarchCplus garch_cplus(double alpha0, double alpha1, double beta1, double alpha, std::size_t reps,
                       std::size_t terms, std::uint64_t seed);

/// E|Z|^(2 alpha) for standard normal Z.
double normal_abs_moment(double two_alpha);

/// int_{u<|x|<=1} x nu(dx) - int_{u<|x|<=1} x mu(dx), with mu the marginal
/// limit measure p 1{x>0} alpha x^-alpha-1 + q 1{x<0} alpha |x|^-alpha-1.
double drift_bu(double u, const LevyTriple& triple, double p);
/// Monte Carlo version with nu^(u) from cluster sums; valid for alpha = 1.
McEstimate drift_bu(double u, const TailSampler& sampler, std::size_t reps, std::uint64_t seed);

/// Least-squares line through (u^(1 - alpha), b_u); the intercept
/// approximates the u -> 0 limit.
double extrapolate_drift(const std::vector<double>& u, const std::vector<double>& b_u, double alpha);

}  // namespace rvlab
