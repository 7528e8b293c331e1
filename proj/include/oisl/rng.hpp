#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "oisl/constants.hpp"

namespace oisl {

// splitmix64 finalizer; used to decorrelate sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic random stream.
//
// Engine: std::mt19937_64 — its output sequence is fixed by the C++ standard,
// so identical (seed, stream) pairs reproduce identical draws on every
// conforming implementation.
//
// Sub-streams: stream k is seeded with splitmix64(seed + (k+1)*2^64/phi),
// giving decorrelated, index-addressable streams for parallel Monte Carlo.
//
// Normal deviates use the paired Box-Muller transform (one uniform pair
// yields two normals; the second is cached).  This transform is part of the
// reproducibility contract and must not be replaced.
class rng {
public:
    explicit rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15ULL)) {}

    // Uniform double in [0, 1): top 53 bits of the engine output.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal deviate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so that log(u1) is finite.
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    // Radial deviation sqrt(x^2 + y^2) of two independent N(0, sigma^2)
    // components.  Consumes exactly one Box-Muller pair per draw.
    double rayleigh(double sigma) {
        const double x = normal();
        const double y = normal();
        return sigma * std::hypot(x, y);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Fixed Monte Carlo block size.  Sample i always belongs to sub-stream
// i / mc_block_size at in-block index i % mc_block_size, so results do not
// depend on how blocks are scheduled across workers.
inline constexpr std::size_t mc_block_size = 1u << 16;

// Sums per-block partial results pairwise in index order.  The reduction
// tree is a function of the element count alone, so merged totals are
// reproducible no matter how the blocks were produced.
inline double pairwise_sum(std::vector<double> v) {
    if (v.empty()) return 0.0;
    while (v.size() > 1) {
        const std::size_t half = v.size() / 2;
        const std::size_t next = (v.size() + 1) / 2;
        for (std::size_t i = 0; i < half; ++i) v[i] = v[2 * i] + v[2 * i + 1];
        if (v.size() % 2 == 1) v[half] = v[v.size() - 1];
        v.resize(next);
    }
    return v[0];
}

}  // namespace oisl
