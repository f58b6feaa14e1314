#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rvlab/cadlag.hpp"
#include "rvlab/rng.hpp"
#include "rvlab/stats.hpp"

namespace rvlab {

/// Two-sided Pareto law: P(|Z| > x) = (x / scale)^-alpha for x >= scale,
/// positive with probability p.
struct MarginalSpec {
    double alpha = 1.0;
    double p = 1.0;
    double scale = 1.0;

    double q() const { return 1.0 - p; }
    void validate() const;
};

/// Draw from the two-sided Pareto law by inverse transform.
double sample_pareto(const MarginalSpec& m, Rng& rng);

/// Quantile transform of a standard normal value onto the Pareto marginal,
/// computed from the normal tail on whichever side is small.
double pareto_from_normal(const MarginalSpec& m, double a);

/// E[(c Z + shift) 1{|c Z + shift| <= bound}] for Z with marginal m, c > 0.
double truncated_shifted_mean(const MarginalSpec& m, double c, double shift, double bound);

struct IidModel {
    MarginalSpec marginal;
};

/// X_n = sum_i c_i Z_{n-i}; coefficients are kept normalized to sum c_i^alpha = 1.
struct MaModel {
    MarginalSpec marginal;
    std::vector<double> coefficients;
};

/// Squared GARCH(1,1) with standard normal innovations; the series is X_n^2.
struct Garch11SquaredModel {
    double alpha0 = 0.1;
    double alpha1 = 1.0;
    double beta1 = 0.0;
};

/// X_n = sigma_n Z_n with log sigma_n a Gaussian AR(1).
struct StochVolModel {
    MarginalSpec marginal;
    double phi = 0.5;
    double vol_scale = 0.5;  ///< innovation standard deviation of log sigma
};

/// X_n = f(A_n), A_n a unit-variance Gaussian AR(1), f mapping the normal
/// marginal onto the Pareto marginal.
struct IsolatedExtremesModel {
    MarginalSpec marginal;
    double phi = 0.5;
};

using ModelSpec = std::variant<IidModel, MaModel, Garch11SquaredModel, StochVolModel, IsolatedExtremesModel>;

std::string model_name(const ModelSpec& spec);

/// Normalizes MA coefficients to sum c_i^alpha = 1 and validates ranges.
ModelSpec make_ma(const MarginalSpec& marginal, std::vector<double> coefficients);

/// Validates the GARCH parameters, including a Monte Carlo check of
/// E ln(alpha1 Z^2 + beta1) < 0.
ModelSpec make_garch11_squared(double alpha0, double alpha1, double beta1);

/// Monte Carlo estimate of E ln(alpha1 Z^2 + beta1), Z standard normal.
McEstimate garch_log_moment(double alpha1, double beta1, std::size_t draws = 200000,
                            std::uint64_t seed = 0x6a7c);

/// Deterministic quadrature for E[(alpha1 Z^2 + beta1)^kappa].
double garch_power_moment(double alpha1, double beta1, double kappa);

/// The positive root kappa of E[(alpha1 Z^2 + beta1)^kappa] = 1: the tail
/// index of the squared GARCH series.
double garch_tail_index(double alpha1, double beta1);

/// Throws std::invalid_argument when the spec violates its invariants.
void validate_model(const ModelSpec& spec);

/// Tail index and positive-tail weight of the stationary marginal.
double tail_index(const ModelSpec& spec);
double positive_tail_weight(const ModelSpec& spec);

inline constexpr std::size_t default_burn_in = 1000;

/// Length-n stationary sample; replicate streams are selected by `stream`.
std::vector<double> simulate_series(const ModelSpec& spec, std::size_t n, std::uint64_t seed,
                                    std::uint64_t stream = 0);

struct Normalization {
    double value = 0.0;
    std::string method;  ///< "analytic" or "empirical"
    std::size_t calibration_length = 0;
};

struct CalibrationOptions {
    std::uint64_t seed = 0xca11b;
    std::size_t draws = 1000000;
};

/// a_n with n P(|X| > a_n) = 1: closed form for Pareto marginals, otherwise
/// the empirical (1 - 1/n)-quantile of |X| over max(draws, 100 n) values.
Normalization normalizing_sequence(const ModelSpec& spec, std::size_t n, const CalibrationOptions& opts = {});

struct Centering {
    McEstimate estimate;
    std::string method;  ///< "closed_form", "conditional_mc" or "mc"
};

/// b = E[X 1{|X| <= bound}] (bound is a_n for the usual centering).
Centering centering_sequence(const ModelSpec& spec, double bound, const CalibrationOptions& opts = {});

/// V_n: jump (X_k - b_n) / a_n at time k / n, V_n(0) = 0. The value at k / n
/// is computed as (S_k - k b_n) / a_n from the running sum S_k.
CadlagPath build_partial_sum_path(std::span<const double> series, double a_n, double b_n);

/// (S_n - n b_n) / a_n from a plain sequential sum.
double partial_sum_terminal(std::span<const double> series, double a_n, double b_n);

}  // namespace rvlab
