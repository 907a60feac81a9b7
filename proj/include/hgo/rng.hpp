#pragma once

#include <cstdint>

namespace hgo {

/// splitmix64 finalizer (Steele, Lea, Flood 2014). Full-avalanche mix of a
/// 64-bit word; also the recommended seeding function for other generators.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Counter-addressed random stream: the state for logical sample `index`
/// under `seed` is a pure function of (seed, index), so sample i draws the
/// same values no matter how samples are partitioned into chunks or
/// threads. Each stream walks the splitmix64 orbit from a hashed offset;
/// distinct (seed, index) pairs land at unrelated positions.
class SampleRng {
public:
    SampleRng(std::uint64_t seed, std::uint64_t index)
        : state_(mix64(mix64(seed) ^ (0x9e3779b97f4a7c15ull * (index + 1)))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::uint64_t state_;
};

}  // namespace hgo
