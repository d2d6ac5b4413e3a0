#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace osr {

// splitmix64; used to scramble user seeds and derive independent sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) {
    return mix_seed(seed ^ mix_seed(stream_id));
}

// Seeded random source. All transformations are implemented here so that a
// given seed produces the same draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, n).
    std::uint64_t uniform_u64(std::uint64_t n) {
        const std::uint64_t min = (-n) % n;  // 2^64 mod n
        std::uint64_t v = next_u64();
        while (v < min) v = next_u64();
        return v % n;
    }

    int uniform_int(int n) { return static_cast<int>(uniform_u64(static_cast<std::uint64_t>(n))); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [-1, 1).
    double uniform_pm() { return 2.0 * uniform_unit() - 1.0; }

    bool coin() { return (next_u64() & 1ULL) != 0; }

    // Standard normal via Box-Muller; second value cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform_unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace osr
