#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rvlab/models.hpp"
#include "rvlab/tailproc.hpp"

namespace rvlab {

/// Flat `key = value` configuration. Blank lines and `#` comments are
/// ignored; lists are comma separated.
using ConfigMap = std::map<std::string, std::string>;

/// Every key the parser accepts.
const std::vector<std::string>& known_config_keys();

/// Throws std::invalid_argument on a malformed line, an unknown key or a
/// repeated key; the message names the line.
ConfigMap parse_config(std::istream& in);
ConfigMap load_config(const std::string& path);

std::vector<double> parse_number_list(const std::string& text);
std::vector<std::string> parse_word_list(const std::string& text);

/// model = iid | ma | garch | stochvol | isolated, with alpha, p, scale,
/// coefficients, alpha0, alpha1, beta1, phi, vol_scale as applicable.
ModelSpec model_from_config(const ConfigMap& cfg);
/// Inverse of model_from_config, for echoing.
ConfigMap model_to_config(const ModelSpec& spec);

/// Ten fixed master seeds used when a config names none.
const std::vector<std::uint64_t>& published_master_seeds();

enum class SeedSource { config, environment, command_line };
std::string to_string(SeedSource s);

/// Environment variable that replaces the master seed list by one seed.
inline constexpr const char* seed_env_var = "RVLAB_SEED";

struct ExperimentConfig {
    std::string experiment_id = "flt";
    ModelSpec model = IidModel{{0.8, 1.0, 1.0}};
    std::size_t n = 10000;
    std::size_t replicates = 1000;
    std::vector<double> u_grid{0.01, 0.05, 0.1};
    double scheme_exponent = 0.4;
    std::vector<std::uint64_t> seeds = published_master_seeds();
    SeedSource seed_source = SeedSource::config;
    std::vector<double> times{0.25, 0.5, 1.0};
    std::string out = "out";
    double u_trunc = 0.0;  ///< 0 selects default_u_trunc(alpha)
    std::size_t grid = 1000;
    double delta = 0.1;
    double theta_u = 0.1;  ///< exceedance level for the theta cross-check, in units of a_n
    std::vector<std::string> formats{"json"};
    std::optional<LevyTriple> triple;  ///< user supplied; overrides the model's own

    void validate() const;
};

/// Missing keys keep their defaults.
ExperimentConfig experiment_from_config(const ConfigMap& cfg);
/// Flat key/value echo that parses back to the same experiment; `seed`
/// holds the one seed given, replacing the list.
ConfigMap experiment_to_config(const ExperimentConfig& cfg, std::uint64_t seed);
/// Replaces the seed list by the environment variable when it is set.
void apply_seed_override(ExperimentConfig& cfg);

}  // namespace rvlab
