#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <vector>

namespace sslbench {

// SplitMix64 output function. The whole project draws randomness through
// this one primitive so that results do not depend on the platform's
// <random> distributions.
constexpr uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

// Child-seed derivation: hash-combine the parts into the parent seed.
// Used for (master, budget, scenario, k, n, method, repeat) trees so that
// every run owns an independent stream regardless of scheduling.
inline uint64_t derive_seed(uint64_t parent, std::initializer_list<uint64_t> parts) {
    uint64_t h = mix64(parent + 0x9e3779b97f4a7c15ULL);
    for (uint64_t p : parts) {
        h = mix64(h ^ (p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
    }
    return h;
}

// Counter-based uniform stream: Weyl sequence counter fed through the
// SplitMix64 mix. Cheap to seed, no warm-up, identical on every platform.
class RandomStream {
public:
    explicit RandomStream(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // [0, bound), unbiased via rejection. bound must be > 0.
    uint64_t below(uint64_t bound) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    // Standard normal via Box-Muller (cosine branch, two uniforms per draw).
    double next_normal() {
        const double u1 = 1.0 - next_double(); // (0, 1]
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    uint64_t state_;
};

// Uniform sample of k distinct indices from [0, population) in draw order
// (partial Fisher-Yates). k must be <= population.
inline std::vector<uint32_t> sample_indices(size_t population, size_t k, RandomStream& rng) {
    std::vector<uint32_t> pool(population);
    for (size_t i = 0; i < population; ++i) pool[i] = static_cast<uint32_t>(i);
    std::vector<uint32_t> out;
    out.reserve(k);
    for (size_t i = 0; i < k; ++i) {
        const size_t j = i + static_cast<size_t>(rng.below(population - i));
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

} // namespace sslbench
