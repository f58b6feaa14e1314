#include "rvlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <type_traits>

namespace rvlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw std::invalid_argument("config: " + key + " is not a number: '" + text + "'");
    }
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw std::invalid_argument("config: " + key + " is not a non-negative integer: '" + text + "'");
    }
    return v;
}

double get_double(const ConfigMap& cfg, const std::string& key, double fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : to_double(key, it->second);
}

MarginalSpec marginal_from(const ConfigMap& cfg) {
    return {get_double(cfg, "alpha", 1.0), get_double(cfg, "p", 1.0), get_double(cfg, "scale", 1.0)};
}

std::string number_text(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + number_text(v[i]);
    }
    return out;
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys{
        "model",  "alpha",     "p",        "scale",          "coefficients",   "alpha0",   "alpha1",
        "beta1",  "phi",       "vol_scale", "n",             "replicates",     "u_grid",   "scheme_exponent",
        "seed",   "seeds",     "times",    "out",            "u_trunc",        "grid",     "delta",
        "theta_u", "formats",  "experiment_id", "triple_c_plus", "triple_c_minus", "triple_b"};
    return keys;
}

ConfigMap parse_config(std::istream& in) {
    const auto& keys = known_config_keys();
    ConfigMap cfg;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw std::invalid_argument("config line " + std::to_string(number) + ": unknown key '" + key + "'");
        }
        if (!cfg.emplace(key, value).second) {
            throw std::invalid_argument("config line " + std::to_string(number) + ": repeated key '" + key + "'");
        }
    }
    return cfg;
}

ConfigMap load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path);
    }
    return parse_config(in);
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& w : parse_word_list(text)) {
        out.push_back(to_double("list", w));
    }
    return out;
}

std::vector<std::string> parse_word_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

ModelSpec model_from_config(const ConfigMap& cfg) {
    const auto it = cfg.find("model");
    const std::string kind = it == cfg.end() ? "iid" : it->second;
    ModelSpec spec;
    if (kind == "iid") {
        spec = IidModel{marginal_from(cfg)};
    } else if (kind == "ma") {
        const auto c = cfg.find("coefficients");
        if (c == cfg.end()) {
            throw std::invalid_argument("config: model = ma needs coefficients");
        }
        return make_ma(marginal_from(cfg), parse_number_list(c->second));
    } else if (kind == "garch") {
        return make_garch11_squared(get_double(cfg, "alpha0", 0.1), get_double(cfg, "alpha1", 1.0),
                                    get_double(cfg, "beta1", 0.0));
    } else if (kind == "stochvol") {
        spec = StochVolModel{marginal_from(cfg), get_double(cfg, "phi", 0.5), get_double(cfg, "vol_scale", 0.5)};
    } else if (kind == "isolated") {
        spec = IsolatedExtremesModel{marginal_from(cfg), get_double(cfg, "phi", 0.5)};
    } else {
        throw std::invalid_argument("config: unknown model '" + kind + "'");
    }
    validate_model(spec);
    return spec;
}

ConfigMap model_to_config(const ModelSpec& spec) {
    ConfigMap out;
    auto marginal = [&](const MarginalSpec& m) {
        out["alpha"] = number_text(m.alpha);
        out["p"] = number_text(m.p);
        out["scale"] = number_text(m.scale);
    };
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, IidModel>) {
                out["model"] = "iid";
                marginal(m.marginal);
            } else if constexpr (std::is_same_v<T, MaModel>) {
                out["model"] = "ma";
                marginal(m.marginal);
                out["coefficients"] = join(m.coefficients);
            } else if constexpr (std::is_same_v<T, Garch11SquaredModel>) {
                out["model"] = "garch";
                out["alpha0"] = number_text(m.alpha0);
                out["alpha1"] = number_text(m.alpha1);
                out["beta1"] = number_text(m.beta1);
            } else if constexpr (std::is_same_v<T, StochVolModel>) {
                out["model"] = "stochvol";
                marginal(m.marginal);
                out["phi"] = number_text(m.phi);
                out["vol_scale"] = number_text(m.vol_scale);
            } else {
                out["model"] = "isolated";
                marginal(m.marginal);
                out["phi"] = number_text(m.phi);
            }
        },
        spec);
    return out;
}

const std::vector<std::uint64_t>& published_master_seeds() {
    static const std::vector<std::uint64_t> seeds{20101, 20202, 20303, 20404, 20505,
                                                  20606, 20707, 20808, 20909, 21010};
    return seeds;
}

std::string to_string(SeedSource s) {
    switch (s) {
        case SeedSource::environment:
            return "environment";
        case SeedSource::command_line:
            return "command_line";
        default:
            return "config";
    }
}

void ExperimentConfig::validate() const {
    validate_model(model);
    if (n < 1 || replicates < 1) {
        throw std::invalid_argument("config: n and replicates must be at least 1");
    }
    if (seeds.empty()) {
        throw std::invalid_argument("config: at least one seed required");
    }
    if (times.empty()) {
        throw std::invalid_argument("config: at least one comparison time required");
    }
    for (double t : times) {
        if (!(t > 0.0 && t <= 1.0)) {
            throw std::invalid_argument("config: comparison times must lie in (0, 1]");
        }
    }
    for (double u : u_grid) {
        if (!(u > 0.0)) {
            throw std::invalid_argument("config: u_grid entries must be positive");
        }
    }
    if (!(scheme_exponent > 0.0 && scheme_exponent < 1.0)) {
        throw std::invalid_argument("config: scheme_exponent must lie in (0, 1)");
    }
    if (!(u_trunc >= 0.0 && u_trunc <= 1.0)) {
        throw std::invalid_argument("config: u_trunc must lie in (0, 1], or 0 for the default");
    }
    if (grid < 1 || !(delta > 0.0) || !(theta_u > 0.0)) {
        throw std::invalid_argument("config: grid, delta and theta_u must be positive");
    }
    for (const auto& f : formats) {
        if (f != "json" && f != "csv" && f != "svg") {
            throw std::invalid_argument("config: unknown format '" + f + "'");
        }
    }
    if (experiment_id.empty() ||
        experiment_id.find_first_of("/\\ ") != std::string::npos) {
        throw std::invalid_argument("config: experiment_id must be a non-empty word");
    }
    if (triple) {
        triple->validate();
    }
}

ExperimentConfig experiment_from_config(const ConfigMap& cfg) {
    ExperimentConfig e;
    if (cfg.count("model")) {
        e.model = model_from_config(cfg);
    }
    auto has = [&](const char* k) { return cfg.count(k) > 0; };
    if (has("experiment_id")) e.experiment_id = cfg.at("experiment_id");
    if (has("n")) e.n = to_uint("n", cfg.at("n"));
    if (has("replicates")) e.replicates = to_uint("replicates", cfg.at("replicates"));
    if (has("u_grid")) e.u_grid = parse_number_list(cfg.at("u_grid"));
    if (has("scheme_exponent")) e.scheme_exponent = to_double("scheme_exponent", cfg.at("scheme_exponent"));
    if (has("seed") && has("seeds")) {
        throw std::invalid_argument("config: give seed or seeds, not both");
    }
    if (has("seed")) e.seeds = {to_uint("seed", cfg.at("seed"))};
    if (has("seeds")) {
        e.seeds.clear();
        for (const auto& w : parse_word_list(cfg.at("seeds"))) {
            e.seeds.push_back(to_uint("seeds", w));
        }
    }
    if (has("times")) e.times = parse_number_list(cfg.at("times"));
    if (has("out")) e.out = cfg.at("out");
    if (has("u_trunc")) e.u_trunc = to_double("u_trunc", cfg.at("u_trunc"));
    if (has("grid")) e.grid = to_uint("grid", cfg.at("grid"));
    if (has("delta")) e.delta = to_double("delta", cfg.at("delta"));
    if (has("theta_u")) e.theta_u = to_double("theta_u", cfg.at("theta_u"));
    if (has("formats")) e.formats = parse_word_list(cfg.at("formats"));
    if (has("triple_c_plus") || has("triple_c_minus") || has("triple_b")) {
        LevyTriple t;
        t.alpha = tail_index(e.model);
        t.c_plus = get_double(cfg, "triple_c_plus", 0.0);
        t.c_minus = get_double(cfg, "triple_c_minus", 0.0);
        t.b = get_double(cfg, "triple_b", 0.0);
        e.triple = t;
    }
    if (std::find(e.formats.begin(), e.formats.end(), "json") == e.formats.end()) {
        e.formats.insert(e.formats.begin(), "json");
    }
    e.validate();
    return e;
}

ConfigMap experiment_to_config(const ExperimentConfig& cfg, std::uint64_t seed) {
    ConfigMap out = model_to_config(cfg.model);
    out["experiment_id"] = cfg.experiment_id;
    out["n"] = std::to_string(cfg.n);
    out["replicates"] = std::to_string(cfg.replicates);
    out["u_grid"] = join(cfg.u_grid);
    out["scheme_exponent"] = number_text(cfg.scheme_exponent);
    out["seed"] = std::to_string(seed);
    out["times"] = join(cfg.times);
    out["out"] = cfg.out;
    out["u_trunc"] = number_text(cfg.u_trunc);
    out["grid"] = std::to_string(cfg.grid);
    out["delta"] = number_text(cfg.delta);
    out["theta_u"] = number_text(cfg.theta_u);
    std::string formats;
    for (std::size_t i = 0; i < cfg.formats.size(); ++i) {
        formats += (i ? "," : "") + cfg.formats[i];
    }
    out["formats"] = formats;
    if (cfg.triple) {
        out["triple_c_plus"] = number_text(cfg.triple->c_plus);
        out["triple_c_minus"] = number_text(cfg.triple->c_minus);
        out["triple_b"] = number_text(cfg.triple->b);
    }
    return out;
}

void apply_seed_override(ExperimentConfig& cfg) {
    const char* v = std::getenv(seed_env_var);
    if (v == nullptr || *v == '\0') {
        return;
    }
    cfg.seeds = {to_uint(seed_env_var, v)};
    cfg.seed_source = SeedSource::environment;
}

}  // namespace rvlab
