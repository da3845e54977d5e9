#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace dynprice {

// Deterministic random stream identified by (seed, stream). Draw functions
// are implemented here rather than through <random> distributions so that
// sequences are identical across standard library implementations.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    // Uniform on [0, 1) with 53 bits of resolution.
    double uniform01();
    // Uniform on [lo, hi).
    double uniform(double lo, double hi);
    // Uniform integer in [0, n).
    std::size_t index(std::size_t n);

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace dynprice
