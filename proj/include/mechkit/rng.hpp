#pragma once

#include <cstdint>

namespace mechkit {

/// SplitMix64: platform-stable 64-bit generator (pure integer mixing, no
/// implementation-defined library distributions). Instance substreams are
/// derived with substream_seed so experiment output is byte-reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, bound) without modulo bias (rejection sampling).
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform on the integer interval [lo, hi].
    long long int_in(long long lo, long long hi) {
        const std::uint64_t span =
            static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return static_cast<long long>(static_cast<std::uint64_t>(lo) + below(span));
    }

private:
    std::uint64_t state_;
};

/// Seed of the `index`-th substream of `seed`: the user seed is whitened once,
/// folded with the index, and whitened again.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t base = SplitMix64(seed).next();
    return SplitMix64(base ^ (index * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull)).next();
}

}  // namespace mechkit
