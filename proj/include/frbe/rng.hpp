#pragma once

#include <cstdint>

namespace frbe {

/// SplitMix64 step: advances the state by the golden-ratio increment and
/// returns a mixed 64-bit output.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256++ generator (256-bit state).
struct Xoshiro256pp {
    std::uint64_t s[4];

    /// Seeds the four state words from consecutive SplitMix64 outputs.
    explicit Xoshiro256pp(std::uint64_t seed);
    std::uint64_t next();

    /// Uniform draw in the open interval (0, 1).
    double next_uniform();
};

/// Inverse of the standard normal CDF (Wichura's rational approximations),
/// accurate to about 1e-15 relative over (0, 1).
double normal_icdf(double p);

/// The stream-split rule used by all simulations: the generator attached to
/// (seed, node_index) is xoshiro256++ seeded by SplitMix64 starting from
/// seed + (node_index + 1) * 0x9E3779B97F4A7C15. Distinct (seed, node) pairs
/// with offsets below 2^32 map to distinct starting points of the SplitMix64
/// Weyl sequence, so streams never overlap in practice. Returns one N(0, 1)
/// variate, independent of iteration order.
double standard_normal_for_node(std::uint64_t seed, std::uint64_t node_index);

}
