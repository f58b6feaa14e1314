#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rvlab {

/// Seedable generator with independent substreams.
///
/// A stream is identified by (seed, domain, index). The engine state is
/// produced by std::seed_seq from those words, so replicate r of an
/// experiment always sees the same numbers no matter which worker runs it.
class Rng {
public:
    using engine_type = std::mt19937_64;

    explicit Rng(std::uint64_t seed, std::uint64_t domain = 0, std::uint64_t index = 0);

    /// Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return normal_(engine_); }

    std::uint64_t poisson(double mean);

    /// Integer uniform on [0, n).
    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    engine_type& engine() { return engine_; }

private:
    engine_type engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Stream domains used across the library; keeps substreams of different
/// purposes disjoint under one master seed.
namespace stream {
inline constexpr std::uint64_t series = 1;
inline constexpr std::uint64_t limit = 2;
inline constexpr std::uint64_t tail = 3;
inline constexpr std::uint64_t cluster = 4;
inline constexpr std::uint64_t calibration = 5;
inline constexpr std::uint64_t garch = 6;
inline constexpr std::uint64_t bootstrap = 7;
inline constexpr std::uint64_t mixing = 8;
}  // namespace stream

}  // namespace rvlab
