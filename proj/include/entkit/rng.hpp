#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "entkit/common.hpp"

namespace entkit {

// splitmix64 step; used to derive independent per-sample seeds so that a
// scan's output is identical no matter how samples are assigned to workers.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// mt19937_64 is fully specified by the standard and uniform doubles are built
// from raw 53-bit draws, so every stream here is reproducible bit-for-bit
// across platforms. Gaussians go through an explicit Box-Muller because
// std::normal_distribution is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform();                      // [0,1)
    double uniform(double lo, double hi);  // [lo,hi)
    double normal();
    cx complex_normal();  // standard complex Gaussian, E|z|^2 = 1
    std::uint64_t raw() { return gen_(); }

    std::vector<cx> ginibre(std::size_t rows, std::size_t cols);

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace entkit
