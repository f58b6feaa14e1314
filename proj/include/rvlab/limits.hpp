#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rvlab/cadlag.hpp"
#include "rvlab/pointproc.hpp"
#include "rvlab/rng.hpp"
#include "rvlab/tailproc.hpp"

namespace rvlab {

inline constexpr std::size_t default_drift_grid = 1000;

/// 1e-3 for alpha < 1, 1e-2 otherwise.
double default_u_trunc(double alpha);

/// Jumps with |x| > u_trunc are simulated exactly; the ones below are
/// replaced by their compensated mean, zero. For alpha < 1 the error then has
/// mean zero and standard deviation sqrt((c_+ + c_-) alpha/(2-alpha) u^(2-alpha)),
/// which is what this returns; the dropped-jump bias of the uncompensated
/// variant would be (c_+ + c_-) alpha/(1-alpha) u^(1-alpha).
double truncation_error_scale(const LevyTriple& triple, double u_trunc);

/// Drift per unit time of the truncated representation:
/// b - int_{u_trunc < |x| <= 1} x nu(dx).
double truncated_drift(const LevyTriple& triple, double u_trunc);

/// V(1) for the Levy process with triple (0, nu, b), truncation function
/// 1{|x| <= 1}.
double simulate_limit_marginal(const LevyTriple& triple, double u_trunc, Rng& rng);
double simulate_limit_marginal(const LevyTriple& triple, double u_trunc, std::uint64_t seed);
/// reps independent draws; replicate r uses substream (seed, r).
std::vector<double> simulate_limit_marginals(const LevyTriple& triple, double u_trunc, std::size_t reps,
                                             std::uint64_t seed, unsigned workers = 0);

/// Path of V on [0, 1]: Poisson jump times, drift added in steps of 1/grid.
CadlagPath simulate_limit_path(const LevyTriple& triple, double u_trunc, std::size_t grid, Rng& rng);
CadlagPath simulate_limit_path(const LevyTriple& triple, double u_trunc, std::size_t grid, std::uint64_t seed);

/// sum_i sum_j delta_(T_i, u Z_ij): Poisson(theta u^-alpha) uniform cluster
/// times, each with an independent cluster. With restrict_to_eu, only atoms
/// with |u Z| > u are kept.
PointMeasure simulate_cluster_limit_measure(double theta, double alpha, double u, const TailSampler& sampler,
                                            std::uint64_t seed, bool restrict_to_eu = true);

/// CSV `replicate,value`.
void write_samples_csv(std::ostream& out, const std::vector<double>& values);
std::vector<double> read_samples_csv(std::istream& in);
std::string samples_to_json(const std::vector<double>& values);

}  // namespace rvlab
