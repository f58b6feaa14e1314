#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rvlab/models.hpp"
#include "rvlab/stats.hpp"
#include "rvlab/tailproc.hpp"

namespace rvlab {

inline constexpr double default_scheme_exponent = 0.4;

struct BlockingScheme {
    std::size_t n = 0;
    std::size_t r_n = 1;
    std::size_t k_n = 0;

    /// r_n = floor(n^exponent), clamped to [1, n].
    static BlockingScheme make(std::size_t n, double exponent = default_scheme_exponent);
    /// Explicit block length; throws unless 1 <= r_n <= n.
    static BlockingScheme with_block_length(std::size_t n, std::size_t r_n);
};

/// Raw counts behind a blocks or runs estimate; counts from independent
/// series can be added and re-evaluated.
struct ThetaCounts {
    std::size_t hits = 0;         ///< blocks with an exceedance, or exceedances followed by a clear run
    std::size_t trials = 0;       ///< blocks, or exceedances with a full forward window
    std::size_t exceedances = 0;  ///< |X_i| > u over the whole series
    std::size_t n = 0;
    std::size_t r_n = 1;

    ThetaCounts& operator+=(const ThetaCounts& other);
};

/// (hits / trials) / (r_n exceedances / n).
double blocks_value(const ThetaCounts& c);
/// hits / trials.
double runs_value(const ThetaCounts& c);

/// Blocks estimator counts over the k_n complete blocks. Throws when no
/// observation exceeds u_abs.
ThetaCounts blocks_counts(std::span<const double> series, double u_abs, const BlockingScheme& scheme);
/// Runs estimator counts: exceedances i with i + r_n < n, and how many of
/// them see no exceedance among i+1..i+r_n. Throws when there is none.
ThetaCounts runs_counts(std::span<const double> series, double u_abs, const BlockingScheme& scheme);

double blocks_estimator(std::span<const double> series, double u_abs, const BlockingScheme& scheme);
double runs_estimator(std::span<const double> series, double u_abs, const BlockingScheme& scheme);

struct TailPopulation {
    double threshold = 0.0;
    std::vector<TailWindow> windows;  ///< Y_j = X_{i+j} / threshold
    std::size_t exceedances = 0;
    std::size_t dropped_at_edges = 0;
};

inline constexpr double default_tail_quantile = 0.995;
inline constexpr std::size_t min_tail_exceedances = 100;

/// Empirical 99.5% quantile of |X|.
double default_tail_threshold(std::span<const double> series);

/// Windows around every i with |X_i| > threshold whose lags [lag_min, lag_max]
/// fit inside the series. Throws with fewer than 100 exceedances.
TailPopulation empirical_tail_process(std::span<const double> series, double threshold, int lag_min, int lag_max);

/// JSON diagnostic report {condition, parameters, curve, intervals}.
struct DiagnosticReport {
    std::string condition;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<double> grid;
    std::vector<double> curve;
    std::vector<std::pair<double, double>> intervals;
    std::vector<std::pair<std::string, double>> extras;

    std::string to_json() const;
};

/// P(max_{m<=|i|<=r_n} |X_i| > u_abs | |X_0| > u_abs) for each m, with Wilson
/// intervals; anchors without a full two-sided window are skipped. With
/// pair_sum set, extras carry n sum_{i<=r_n} P(|X_0| > u_abs, |X_i| > u_abs).
DiagnosticReport anticlustering_diagnostic(std::span<const double> series, double u_abs,
                                           const std::vector<std::size_t>& m_grid, const BlockingScheme& scheme,
                                           bool pair_sum = false);

/// Fraction of replicate series whose centered small-jump partial sums
/// max_k |sum_{i<=k} (X_i/a_n 1{|X_i| <= u a_n} - E[X/a_n 1{|X| <= u a_n}])|
/// exceed delta, for each u. small_means[j] is E[X 1{|X| <= u_j a_n}].
/// Throws with fewer than 200 replicates. For 0 < alpha < 1 the extras
/// carry the Chebyshev bound 2 delta^-1 alpha/(1-alpha) u^(1-alpha).
DiagnosticReport small_step_diagnostic(const std::vector<std::vector<double>>& ensemble, double a_n,
                                       const std::vector<double>& u_grid, const std::vector<double>& small_means,
                                       double delta, double alpha = 0.0);
/// Per-u exceedance flags (0 or 1) of one series, for streaming use.
std::vector<unsigned char> small_step_exceedances(std::span<const double> series, double a_n,
                                                  const std::vector<double>& u_grid,
                                                  const std::vector<double>& small_means, double delta);
/// Report from per-u exceedance counts over `reps` series.
DiagnosticReport small_step_report(const std::vector<std::size_t>& hits, std::size_t reps, double a_n,
                                   const std::vector<double>& u_grid, double delta, double alpha = 0.0);
/// Same, with the means from centering_sequence.
DiagnosticReport small_step_diagnostic(const ModelSpec& spec, const std::vector<std::vector<double>>& ensemble,
                                       double a_n, const std::vector<double>& u_grid, double delta,
                                       const CalibrationOptions& opts = {});

/// f(x) = height * max(0, 1 - ||x| - center| / half_width).
struct TentFunction {
    double center = 1.0;
    double half_width = 0.5;
    double height = 1.0;

    double operator()(double x) const;
};

/// Three tents supported in |x| > u.
std::vector<TentFunction> default_tent_family(double u);

/// E[exp(-sum_{i<=k_n r_n} f(X_i/a_n))] - prod_k E[exp(-sum_{i in block k} f(X_i/a_n))]
/// per test function; the block expectations share one estimate by
/// stationarity. The standard error comes from the per-replicate influence
/// function of the difference.
DiagnosticReport mixing_diagnostic(const std::function<std::vector<double>(std::size_t)>& replicate, double a_n,
                                   const BlockingScheme& scheme, const std::vector<TentFunction>& tests,
                                   std::size_t reps);
DiagnosticReport mixing_diagnostic(const ModelSpec& spec, std::size_t n, const BlockingScheme& scheme,
                                   const std::vector<TentFunction>& tests, std::size_t reps, std::uint64_t seed);

}  // namespace rvlab
