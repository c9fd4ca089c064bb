#pragma once

#include <cstdint>

namespace mtk {

// Counter-based generator: each draw is a stateless mix of (key, counter),
// so any (seed, stream) pair yields the same sequence on any thread schedule.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
        : key_(key), counter_(counter) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Substream key for path/point `stream` under a user seed.
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed) ^ (stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL));
    }

    std::uint64_t next_u64() { return mix(key_ ^ mix(counter_++)); }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace mtk
