#pragma once

#include <cstdint>
#include <random>

namespace fibtrace {

// splitmix64 finaliser, used to derive per-sample seeds
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// the std distributions are implementation-defined, so doubles are drawn from raw bits
struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    Rng(std::uint64_t seed, std::uint64_t index) : g(mix_seed(seed, index)) {}

    double uniform() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double sign() { return (g() >> 63) ? -1.0 : 1.0; }
    std::uint64_t below(std::uint64_t n) { return g() % n; }
};

}  // namespace fibtrace
