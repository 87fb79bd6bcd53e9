#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ringprobe {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator keyed by (seed, stream_a, stream_b). Draws are a
// pure function of the key and an incrementing counter, so independent
// streams can be consumed from any thread in any order and still reproduce
// the same sequence for a given key.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b)
        : key_(mix64(mix64(mix64(seed) ^ (0xa0761d6478bd642fULL + stream_a)) ^
                     (0xe7037ed1a0b428dbULL + stream_b))) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

    // Uniform in (0, 1]; never returns 0 so it is safe under log().
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; pairs are cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace ringprobe
