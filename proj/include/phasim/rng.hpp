#pragma once

#include <cstdint>
#include <initializer_list>

namespace phasim {

// Counter-based random numbers: every draw is a pure function of
// (seed, counter), so results never depend on scheduling order.

constexpr std::uint64_t mix64(std::uint64_t z) {
    // SplitMix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(root);
    for (auto p : path) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t bits = mix64(seed ^ mix64(counter));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Sequential view over the counter stream, for code that draws many values.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

    constexpr double uniform() { return uniform01(seed_, counter_++); }

    /// Uniform integer in [0, bound).
    constexpr std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)) % bound;
    }

    constexpr std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace phasim
