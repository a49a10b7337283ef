#pragma once

#include <cstdint>
#include <random>

namespace pca {

// Seeded random stream. The generator (mt19937_64) and the uniform mapping
// below are pinned so a trace produced with a given seed is identical on any
// platform; std::uniform_real_distribution is not portable across stdlibs.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 1) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform double in [0, 1): top 53 bits of one 64-bit draw.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace pca
