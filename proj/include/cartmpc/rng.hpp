#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cartmpc {

// Seeded RNG used throughout the project. mt19937_64 is fully specified by
// the C++ standard; the value mappings below replace the
// implementation-defined std::*_distribution classes so that a given seed
// produces the same stream on every compiler.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be > 0.
    int uniform_int(int n) { return static_cast<int>(eng_() % static_cast<uint64_t>(n)); }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        have_spare_ = true;
        return mag * std::cos(two_pi * u2);
    }

    double normal(double mean, double std) { return mean + std * normal(); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64 finalizer; used to derive independent child seeds from a master
// seed plus stream indices.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    return mix64(master ^ mix64(stream));
}

inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b) {
    return derive_seed(derive_seed(master, a), b);
}

// FNV-1a over raw bytes; used for config/provenance hashes.
inline uint64_t fnv1a(const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t h = 0xcbf29ce484222325ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace cartmpc
