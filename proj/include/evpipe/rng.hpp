#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace evpipe {

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64 finalizer.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Seed for an independent per-recording stream. Hashing the manifest path
// string (not a resolved absolute path) keeps output machine-independent.
inline uint64_t derive_stream_seed(uint64_t seed, std::string_view key) {
    return mix64(seed ^ fnv1a64(key));
}

// mt19937_64 with an explicit unbiased bounded draw.
// std::uniform_int_distribution is implementation-defined, so it cannot
// back byte-exact reproducibility across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next() { return gen_(); }

    // Uniform in [0, n). Rejection sampling over whole cycles of n.
    uint64_t bounded(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t r;
        do {
            r = gen_();
        } while (r >= limit);
        return r % n;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace evpipe
