#pragma once

// Counter-derived random streams.
//
// Replicate i of a run seeded with s draws from a SplitMix64 generator whose
// initial state is mix64(mix64(s) ^ (i * 0x9e3779b97f4a7c15)). Streams depend
// only on (seed, replicate), never on which worker runs the replicate.

#include <cstdint>
#include <limits>

namespace famplan {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t substream_state(std::uint64_t seed, std::uint64_t replicate) {
    return mix64(mix64(seed) ^ (replicate * golden_gamma));
}

/// SplitMix64. Satisfies std::uniform_random_bit_generator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t state) : state_(state) {}

    static constexpr SplitMix64 for_replicate(std::uint64_t seed, std::uint64_t replicate) {
        return SplitMix64(substream_state(seed, replicate));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() {
        state_ += golden_gamma;
        return mix64(state_);
    }

    /// Uniform double in [0,1) from the top 53 bits.
    constexpr double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

} // namespace famplan
