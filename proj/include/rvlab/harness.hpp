#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rvlab/config.hpp"
#include "rvlab/estimators.hpp"
#include "rvlab/limits.hpp"
#include "rvlab/models.hpp"
#include "rvlab/stats.hpp"

namespace rvlab {

inline constexpr double ks_level = 0.01;
inline constexpr std::size_t min_ks_sample = 50;
inline constexpr std::size_t min_powered_replicates = 100;
inline constexpr std::size_t min_powered_n = 1000;
inline constexpr std::size_t min_small_step_replicates = 200;
inline constexpr double psi_audit_tolerance = 1e-9;

/// Limit triple for the model: the user's when given, closed form for the
/// MA and asymptotically independent models, Monte Carlo for GARCH with
/// alpha < 1. Throws std::invalid_argument when none is available.
TripleReport resolve_triple(const ExperimentConfig& cfg, std::uint64_t seed);

struct TimeComparison {
    double t = 1.0;
    std::optional<KsResult> ks;  ///< empty when too few replicates
    bool pass = false;
};

struct ThetaCrossCheck {
    std::optional<double> theoretical;
    std::optional<McEstimate> tail_process;  ///< acceptance rate of the cluster sampler
    double u = 0.1;
    std::size_t r_n = 1;
    ThetaCounts blocks_counts;
    ThetaCounts runs_counts;
    std::optional<double> blocks;
    std::optional<double> runs;
    std::pair<double, double> blocks_interval{0.0, 0.0};
    std::pair<double, double> runs_interval{0.0, 0.0};
};

struct AuditSummary {
    double psi_u = 0.1;
    std::size_t conservation_failures = 0;
    std::size_t psi_failures = 0;
    double psi_max_relative_error = 0.0;
};

struct Report {
    ExperimentConfig config;
    std::uint64_t seed = 0;
    std::string model;
    Normalization a_n;
    Centering b_n;
    TripleReport triple;
    double u_trunc = 0.0;
    double truncation_error = 0.0;
    std::vector<TimeComparison> comparisons;
    bool underpowered = false;
    ThetaCrossCheck theta;
    std::optional<DiagnosticReport> small_step;
    std::string small_step_note;
    AuditSummary audits;
    bool passed = false;
    std::vector<std::string> artifacts;  ///< file names, relative to config.out

    double runtime_seconds = 0.0;  ///< not part of the JSON
    std::vector<std::vector<double>> prelimit;  ///< [time][replicate]
    std::vector<std::vector<double>> limit;     ///< [time][replicate]

    /// Deterministic JSON: no timings, worker counts or absolute paths.
    std::string to_json() const;
};

/// V_n at the comparison times over `replicates` series against the limit
/// process drawn from the resolved triple, KS per time, theta cross-check,
/// small-step diagnostic and the conservation and psi audits. Replicate r
/// uses substream r of the seed in every stage.
Report run_flt_experiment(const ExperimentConfig& cfg, std::uint64_t seed, unsigned workers = 0);

/// Writes the report per cfg.formats into cfg.out and records the file
/// names in report.artifacts: `<id>_seed<seed>.json` always,
/// `<id>_seed<seed>_samples.csv` for csv, `<id>_seed<seed>_t<t>.svg` per
/// comparison time for svg. Returns the full paths written.
std::vector<std::string> emit_report(Report& report);

struct SuiteResult {
    std::vector<Report> reports;
    std::size_t passed = 0;
    std::size_t required = 0;
    bool pass() const { return passed >= required; }
};

/// At least 4/5 of the seeds must pass, rounded up.
inline constexpr std::size_t suite_pass_numerator = 4;
inline constexpr std::size_t suite_pass_denominator = 5;

/// One experiment per configured seed.
SuiteResult run_flt_suite(const ExperimentConfig& cfg, unsigned workers = 0);

}  // namespace rvlab
