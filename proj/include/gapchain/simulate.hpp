#pragma once

#include <cstdint>
#include <vector>

#include "gapchain/matrix.hpp"

namespace gapchain {

/// SplitMix64 (Steele, Lea & Flood): fixed, splittable 64-bit generator, kept
/// deliberately independent of the platform's default engines so trajectories
/// reproduce bit-exactly across toolchains and reimplementations. Uniform
/// doubles take the top 53 bits: (next() >> 11) * 2^-53, giving [0, 1).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// A simulated path through a chain: steps + 1 state indices, reproducible
/// from the recorded seed.
struct Trajectory {
    std::uint64_t seed;
    std::vector<std::size_t> states;
};

/// Walks the chain from `start` for `steps` moves. Successors are drawn by
/// inverse-CDF sampling over cumulative row sums with strict thresholds
/// (draw < cumsum). A visited row summing to less than 1 - 1e-9 is an error.
Trajectory simulate(const StochasticMatrix& p, std::size_t start, std::size_t steps,
                    std::uint64_t seed);

/// Fraction of time the trajectory spends in each state.
Distribution occupancy(const Trajectory& traj, std::size_t order);

}  // namespace gapchain
