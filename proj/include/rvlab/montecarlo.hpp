#pragma once

#include <cstdint>
#include <vector>

#include "rvlab/parallel.hpp"
#include "rvlab/rng.hpp"

namespace rvlab {

inline constexpr std::size_t mc_chunk_size = 4096;

/// reps values of f(rng), where replicate i uses the substream of its fixed
/// chunk (seed, domain, i / mc_chunk_size). Output is independent of the
/// worker count.
template <class F>
std::vector<double> mc_draws(std::size_t reps, std::uint64_t seed, std::uint64_t domain, F&& f,
                             unsigned workers = 0) {
    std::vector<double> out(reps);
    parallel_chunks(reps, mc_chunk_size, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        Rng rng(seed, domain, chunk);
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = f(rng);
        }
    });
    return out;
}

}  // namespace rvlab
