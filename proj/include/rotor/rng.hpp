#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rotor {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so traces are reproducible regardless of
// evaluation order and across threads.
struct CounterRng {
    std::uint64_t seed = 0;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
        return mix(mix(seed ^ mix(stream)) + counter);
    }

    // uniform on (0, 1]
    double uniform(std::uint64_t stream, std::uint64_t counter) const {
        return 1.0 - static_cast<double>(bits(stream, counter) >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller on two decorrelated uniforms
    double normal(std::uint64_t stream, std::uint64_t counter) const {
        const double u1 = uniform(stream, 2 * counter);
        const double u2 = uniform(stream, 2 * counter + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
};

} // namespace rotor
