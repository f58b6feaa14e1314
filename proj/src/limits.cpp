#include "rvlab/limits.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "rvlab/csv.hpp"
#include "rvlab/parallel.hpp"

namespace rvlab {

double default_u_trunc(double alpha) { return alpha < 1.0 ? 1e-3 : 1e-2; }

namespace {

void check(const LevyTriple& triple, double u_trunc) {
    triple.validate();
    if (!(u_trunc > 0.0 && u_trunc <= 1.0)) {
        throw std::invalid_argument("limit simulation: u_trunc must lie in (0, 1]");
    }
}

double jump_size(const LevyTriple& t, double u_trunc, Rng& rng) {
    const double total = t.c_plus + t.c_minus;
    const double sign = rng.uniform() * total < t.c_plus ? 1.0 : -1.0;
    return sign * u_trunc * std::pow(rng.uniform(), -1.0 / t.alpha);
}

}  // namespace

double truncation_error_scale(const LevyTriple& triple, double u_trunc) {
    check(triple, u_trunc);
    const double a = triple.alpha;
    return std::sqrt((triple.c_plus + triple.c_minus) * a / (2.0 - a) * std::pow(u_trunc, 2.0 - a));
}

double truncated_drift(const LevyTriple& triple, double u_trunc) {
    check(triple, u_trunc);
    return triple.b - triple.truncated_first_moment(u_trunc, 1.0);
}

double simulate_limit_marginal(const LevyTriple& triple, double u_trunc, Rng& rng) {
    const double drift = truncated_drift(triple, u_trunc);
    const double rate = (triple.c_plus + triple.c_minus) * std::pow(u_trunc, -triple.alpha);
    const std::uint64_t count = rng.poisson(rate);
    double s = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
        s += jump_size(triple, u_trunc, rng);
    }
    return drift + s;
}

double simulate_limit_marginal(const LevyTriple& triple, double u_trunc, std::uint64_t seed) {
    Rng rng(seed, stream::limit, 0);
    return simulate_limit_marginal(triple, u_trunc, rng);
}

std::vector<double> simulate_limit_marginals(const LevyTriple& triple, double u_trunc, std::size_t reps,
                                             std::uint64_t seed, unsigned workers) {
    check(triple, u_trunc);
    std::vector<double> out(reps);
    parallel_for(reps, workers, [&](std::size_t r) {
        Rng rng(seed, stream::limit, r);
        out[r] = simulate_limit_marginal(triple, u_trunc, rng);
    });
    return out;
}

CadlagPath simulate_limit_path(const LevyTriple& triple, double u_trunc, std::size_t grid, Rng& rng) {
    if (grid < 1) {
        throw std::invalid_argument("simulate_limit_path: grid must be at least 1");
    }
    const double drift = truncated_drift(triple, u_trunc);
    const double rate = (triple.c_plus + triple.c_minus) * std::pow(u_trunc, -triple.alpha);
    const std::uint64_t count = rng.poisson(rate);
    std::vector<std::pair<double, double>> events;
    events.reserve(count + grid);
    for (std::uint64_t k = 0; k < count; ++k) {
        const double t = rng.uniform();
        events.push_back({t, jump_size(triple, u_trunc, rng)});
    }
    if (drift != 0.0) {
        const double step = drift / static_cast<double>(grid);
        for (std::size_t k = 1; k <= grid; ++k) {
            events.push_back({static_cast<double>(k) / static_cast<double>(grid), step});
        }
    }
    std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<double> times(events.size());
    std::vector<double> incs(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        times[i] = events[i].first;
        incs[i] = events[i].second;
    }
    return CadlagPath::from_increments(0.0, times, incs);
}

CadlagPath simulate_limit_path(const LevyTriple& triple, double u_trunc, std::size_t grid, std::uint64_t seed) {
    Rng rng(seed, stream::limit, 0);
    return simulate_limit_path(triple, u_trunc, grid, rng);
}

PointMeasure simulate_cluster_limit_measure(double theta, double alpha, double u, const TailSampler& sampler,
                                            std::uint64_t seed, bool restrict_to_eu) {
    if (!(theta > 0.0 && theta <= 1.0)) {
        throw std::invalid_argument("simulate_cluster_limit_measure: theta must lie in (0, 1]");
    }
    if (!(u > 0.0) || !(alpha > 0.0)) {
        throw std::invalid_argument("simulate_cluster_limit_measure: u and alpha must be positive");
    }
    Rng rng(seed, stream::cluster, 0);
    const std::uint64_t clusters = rng.poisson(theta * std::pow(u, -alpha));
    std::vector<Atom> atoms;
    for (std::uint64_t i = 0; i < clusters; ++i) {
        const double t = rng.uniform();
        for (double z : sample_cluster_process(sampler, rng).marks) {
            if (!restrict_to_eu || std::abs(z) > 1.0) {
                atoms.push_back({t, u * z});
            }
        }
    }
    return PointMeasure(std::move(atoms));
}

void write_samples_csv(std::ostream& out, const std::vector<double>& values) {
    out << "replicate,value\n";
    out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << i << ',' << values[i] << '\n';
    }
}

std::vector<double> read_samples_csv(std::istream& in) { return read_csv_column(in, "value"); }

std::string samples_to_json(const std::vector<double>& values) { return nlohmann::json(values).dump(); }

}  // namespace rvlab
