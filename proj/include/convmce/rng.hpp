#pragma once

#include <cstdint>
#include <random>

namespace convmce {

/// Deterministic random source. All samplers take an `Rng&` owned by the
/// caller. Bounded draws avoid `std::uniform_int_distribution` so that key
/// files and ciphertexts are reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). `bound` must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        // Rejection on the top of the range keeps the draw exactly uniform.
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x > limit);
        return x % bound;
    }

    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

    /// True with probability num/den.
    bool bernoulli(std::uint32_t num, std::uint32_t den) {
        if (num >= den) return true;
        if (num == 0) return false;
        return below(den) < num;
    }

    /// Uniform double in [0, 1). Only for Monte-Carlo style test code.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Exact fraction in [0, 1], e.g. the above-diagonal fill rate of Π or the
/// error load.
struct Fraction {
    std::uint32_t num = 1;
    std::uint32_t den = 2;
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// splitmix64 finalizer; used for informational seed fingerprints.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace convmce
