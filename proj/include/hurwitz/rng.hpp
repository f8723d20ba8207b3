#pragma once

#include <cstdint>

namespace hq {

/// Counter-based generator: output i of a stream is mix(key + i * gamma), where
/// mix is the SplitMix64 finalizer. Streams are split by hashing (master, id).
class CounterRng {
public:
    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    explicit CounterRng(uint64_t seed, uint64_t stream = 0) : key_(mix(seed ^ mix(stream + kGamma))) {}

    static constexpr uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    uint64_t at(uint64_t counter) const { return mix(key_ + (counter + 1) * kGamma); }
    uint64_t next_u64() { return at(counter_++); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
    uint64_t below(uint64_t n) {
        if (n == 0) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }
    uint64_t counter() const { return counter_; }
    uint64_t key() const { return key_; }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace hq
