#pragma once

#include <cstdint>
#include <random>

namespace natscale {

// Seeded uniform stream. Equal seeds give bit-identical streams on every
// platform: the engine is fully specified and the uniform mapping is done
// here rather than through std::uniform_real_distribution.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    // Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Source for parallel worker `index`; seeds are split as seed + index.
    RandomSource worker(std::uint64_t index) const { return RandomSource(seed_ + index); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace natscale
