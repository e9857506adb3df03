#pragma once

#include <cstdint>

namespace cellstress::rng {

// splitmix64: tiny, fast, and identical on every platform, which keeps
// generated datasets byte-stable across compilers.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_unit() { return (next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n); n must be positive.
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    bool chance(double p) { return next_unit() < p; }

private:
    std::uint64_t state_;
};

// Decorrelates derived streams (e.g. one per client) from a master seed.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL));
    return g.next();
}

}  // namespace cellstress::rng
