#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rvlab/cadlag.hpp"

namespace rvlab::oracle {

struct Pt {
    double t;
    double x;
};

/// Completed graph sampled with L-infinity spacing at most h, built from the
/// path's breakpoints directly (not via completed_graph).
inline std::vector<Pt> dense_graph(const CadlagPath& path, double h) {
    std::vector<Pt> corners{{0.0, path.initial_value()}};
    double value = path.initial_value();
    for (const auto& j : path.jumps()) {
        corners.push_back({j.time, value});
        corners.push_back({j.time, j.value});
        value = j.value;
    }
    if (corners.back().t < 1.0) {
        corners.push_back({1.0, value});
    }
    std::vector<Pt> out{corners.front()};
    for (std::size_t k = 1; k < corners.size(); ++k) {
        const Pt a = corners[k - 1];
        const Pt b = corners[k];
        const double len = std::max(std::abs(b.t - a.t), std::abs(b.x - a.x));
        const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / h)));
        for (std::size_t s = 1; s <= steps; ++s) {
            const double w = static_cast<double>(s) / static_cast<double>(steps);
            out.push_back({a.t + w * (b.t - a.t), a.x + w * (b.x - a.x)});
        }
    }
    return out;
}

/// Discrete Frechet distance (monotone coupling of two point sequences)
/// under the L-infinity ground metric, by dynamic programming.
inline double discrete_frechet(const std::vector<Pt>& p, const std::vector<Pt>& q) {
    auto d = [&](std::size_t i, std::size_t j) {
        return std::max(std::abs(p[i].t - q[j].t), std::abs(p[i].x - q[j].x));
    };
    std::vector<double> prev(q.size()), cur(q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else if (i == 0) {
                best = cur[j - 1];
            } else if (j == 0) {
                best = prev[j];
            } else {
                best = std::min({prev[j], prev[j - 1], cur[j - 1]});
            }
            cur[j] = std::max(best, d(i, j));
        }
        std::swap(prev, cur);
    }
    return prev.back();
}

/// Brute-force M1 reference: dense monotone matching with spacing h.
/// Overestimates the true distance by at most h.
inline double m1_grid(const CadlagPath& a, const CadlagPath& b, double h) {
    return discrete_frechet(dense_graph(a, h), dense_graph(b, h));
}

/// Random step path with up to max_jumps jumps, values in [-1, 1].
inline CadlagPath random_step_path(std::mt19937_64& gen, int max_jumps) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, max_jumps);
    const int k = count(gen);
    std::vector<double> times;
    while (static_cast<int>(times.size()) < k) {
        const double t = std::round(unit(gen) * 1000.0) / 1000.0;
        if (t > 0.0 && std::find(times.begin(), times.end(), t) == times.end()) {
            times.push_back(t);
        }
    }
    std::sort(times.begin(), times.end());
    std::vector<Jump> jumps;
    for (double t : times) {
        jumps.push_back({t, 2.0 * unit(gen) - 1.0});
    }
    return CadlagPath(2.0 * unit(gen) - 1.0, std::move(jumps));
}

/// x_n(t) = (1/2) 1[1/2 - 1/n, 1/2)(t) + 1[1/2, 1](t).
inline CadlagPath staircase(int n) {
    return CadlagPath(0.0, {{0.5 - 1.0 / n, 0.5}, {0.5, 1.0}});
}

inline CadlagPath unit_step() { return CadlagPath(0.0, {{0.5, 1.0}}); }

}  // namespace rvlab::oracle
