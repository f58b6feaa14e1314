#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rvlab {

/// Monte Carlo result with its provenance.
struct McEstimate {
    double value = 0.0;
    double se = 0.0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
};

/// Fixed-order pairwise summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

/// Sample mean and its standard error (n - 1 denominator).
McEstimate mean_with_se(std::span<const double> values);

/// Wilson score interval for a binomial proportion at the given z.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96);

/// Empirical quantile, type 7 (linear interpolation between order statistics).
double quantile(std::vector<double> values, double prob);

double median(std::vector<double> values);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| with the
/// asymptotic Kolmogorov p-value. Throws when either sample has fewer than
/// 50 points.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

/// Hill estimate of the tail index alpha from the k largest values of |x|.
double hill_tail_index(std::span<const double> values, std::size_t k);

}  // namespace rvlab
