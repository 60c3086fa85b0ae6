#pragma once

#include <cstdint>
#include <random>

namespace wta {

/// Seeded generator used for every random draw in the library.
///
/// The engine is std::mt19937_64 (64-bit Mersenne Twister, fixed by the C++
/// standard).  Real-valued draws do not go through <random> distributions,
/// whose algorithms are implementation-defined; they take the top 53 bits of
/// one engine output instead, so results are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling keeps the draw unbiased
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace wta
