#pragma once

#include <cstdint>
#include <cstddef>

namespace saudit::rng {

// SplitMix64 output function (Steele, Lea & Flood 2014). Used both as the
// stream generator and as the key-derivation mix, so any draw is a pure
// function of (seed, counter) and sweeps can be parallelized in any order.
inline constexpr std::uint64_t GOLDEN_GAMMA = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// k-th output of SplitMix64 seeded with `seed`, computed in O(1).
inline constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t k) {
    return mix64(seed + (k + 1) * GOLDEN_GAMMA);
}

// Derives a child seed from a parent seed and a stream label. Chaining calls
// splits one seed into an arbitrary tuple-keyed tree of independent streams.
inline constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t label) {
    return mix64(seed ^ at(mix64(label), 0));
}

// Uniform double in [0, 1) from the top 53 bits of a 64-bit word.
inline constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// One uniform variate per (seed, draw_index); the per-draw contract used by
// sampling::sample.
inline constexpr double uniform_at(std::uint64_t seed, std::uint64_t draw_index) {
    return to_unit(at(seed, draw_index));
}

// Sequential SplitMix64 stream for consumers that need many variates
// (subset shuffles, logit fuzzing). State advances by the golden gamma.
class Stream {
public:
    explicit constexpr Stream(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next_u64() {
        state_ += GOLDEN_GAMMA;
        return mix64(state_);
    }

    constexpr double next_unit() { return to_unit(next_u64()); }

    // Unbiased integer in [0, bound) via rejection on the top bits.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = -bound % bound; // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
};

} // namespace saudit::rng
