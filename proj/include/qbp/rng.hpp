#pragma once

#include <cstdint>
#include <random>

namespace qbp {

// splitmix64, used to derive well-mixed sub-seeds from a master seed.
// Every stream of randomness in the toolkit is keyed by
// (master seed, stream tag, counter) so that sharding work across
// threads cannot change results.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream));
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream, uint64_t counter) {
    return splitmix64(derive_seed(master, stream) ^ splitmix64(counter + 0x51u));
}

// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard,
// and we avoid std::*_distribution (whose algorithms are not), so the same
// seed gives the same bits on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1) with 53 random bits
    double next_double() { return (engine_() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_double() < p; }

    // uniform integer in [0, bound), bound > 0; rejection sampling, unbiased
    uint64_t next_below(uint64_t bound) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace qbp
