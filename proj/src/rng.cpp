#include "entkit/rng.hpp"

#include <cmath>
#include <numbers>

namespace entkit {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ splitmix64(index + 0x51f15eedULL));
}

double Rng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u is kept away from 0 so the log stays finite.
    double u = 0.0;
    do {
        u = uniform();
    } while (u <= 0.0);
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double theta = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

cx Rng::complex_normal() {
    const double re = normal();
    const double im = normal();
    return cx{re, im} / std::sqrt(2.0);
}

std::vector<cx> Rng::ginibre(std::size_t rows, std::size_t cols) {
    std::vector<cx> g(rows * cols);
    for (auto& z : g) z = complex_normal();
    return g;
}

}  // namespace entkit
