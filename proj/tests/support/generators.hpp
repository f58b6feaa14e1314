#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rvlab/pointproc.hpp"

namespace rvlab::gen {

struct PerturbedPair {
    PointMeasure original;
    PointMeasure perturbed;
    std::size_t big_atoms = 0;  ///< atoms with |mark| > u
};

/// Random member of the continuity set with at most max_big atoms above u,
/// grouped at shared times with a common sign, plus a copy in which every
/// atom moved by at most delta in time and in mark. Group times are at least
/// 3 delta apart and marks stay 2 delta away from +-u, so the perturbation
/// cannot reorder groups or move a mark across the threshold.
inline PerturbedPair lambda_member_with_perturbation(std::mt19937_64& rng, double u, double delta,
                                                     std::size_t max_big) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> total(1, max_big);
    const std::size_t k = total(rng);

    std::vector<double> group_times;
    std::vector<Atom> atoms;
    std::size_t placed = 0;
    while (placed < k) {
        double t = 0.0;
        bool ok = false;
        while (!ok) {
            t = 0.05 + 0.9 * unit(rng);
            ok = std::all_of(group_times.begin(), group_times.end(),
                             [&](double s) { return std::abs(s - t) > 3.0 * delta; });
        }
        group_times.push_back(t);
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        const std::size_t size = std::min<std::size_t>(k - placed, 1 + static_cast<std::size_t>(unit(rng) * 3.0));
        for (std::size_t s = 0; s < size; ++s) {
            atoms.push_back({t, sign * (u + 2.0 * delta + 2.0 * unit(rng))});
        }
        placed += size;
    }
    // Atoms below the threshold never enter psi^(u).
    const std::size_t small = static_cast<std::size_t>(unit(rng) * 4.0);
    for (std::size_t s = 0; s < small; ++s) {
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        atoms.push_back({0.05 + 0.9 * unit(rng), sign * (u - 2.0 * delta) * (0.1 + 0.9 * unit(rng))});
    }

    std::vector<Atom> moved = atoms;
    for (auto& a : moved) {
        a.time += delta * (2.0 * unit(rng) - 1.0);
        a.mark += delta * (2.0 * unit(rng) - 1.0);
    }
    return {PointMeasure(std::move(atoms)), PointMeasure(std::move(moved)), k};
}

}  // namespace rvlab::gen
