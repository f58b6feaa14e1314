#include "rvlab/rng.hpp"

namespace rvlab {

Rng::Rng(std::uint64_t seed, std::uint64_t domain, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(domain), static_cast<std::uint32_t>(domain >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    engine_.seed(seq);
}

std::uint64_t Rng::poisson(double mean) {
    if (mean <= 0.0) {
        return 0;
    }
    return std::poisson_distribution<std::uint64_t>(mean)(engine_);
}

}  // namespace rvlab
