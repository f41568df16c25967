#pragma once

#include <cstdint>
#include <random>

namespace uavnet {

// SplitMix64 scrambler, used to derive independent seed values for
// named substreams so that parallel workers never share generator state.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Every random decision in the project draws from a generator built here.
// (seed, stream, substream) fully determines the sequence, independent of
// thread count or evaluation order.
inline std::mt19937_64 make_rng(std::uint64_t seed,
                                std::uint64_t stream = 0,
                                std::uint64_t substream = 0) {
    std::uint64_t s = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ substream);
    std::mt19937_64 gen(s);
    gen.discard(8);
    return gen;
}

// Uniform double in [0,1) built from the top 53 bits; bit-identical on
// every platform, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace uavnet
