#pragma once

#include <cstdint>
#include <random>

namespace urnlab {

// SplitMix64 finalizer. Used only to derive well-separated seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed of replica stream `index` under `master_seed`:
//   splitmix64(splitmix64(master_seed) ^ splitmix64(index + 1))
// The derivation is fixed; changing it breaks reproducibility of stored reports.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 1));
}

// Seeded random stream. Uniform variates are built from the top 53 bits of a
// 64-bit Mersenne twister draw so results do not depend on the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    static Rng stream(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(derive_stream_seed(master_seed, index));
    }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace urnlab
