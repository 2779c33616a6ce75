#ifndef POLYDYN_RNG_HPP
#define POLYDYN_RNG_HPP

#include <cstdint>

namespace polydyn {

/// SplitMix64 generator (Steele, Lea & Flood's mixer, the java.util
/// SplittableRandom finalizer). Chosen over std::mt19937_64 because the
/// scenario generators must produce identical streams from the same seed in
/// any implementation language, and the standard <random> distributions are
/// not specified bit-for-bit. The mapping to doubles uses the top 53 bits.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, bound). bound must be positive. The floor
    /// mapping keeps the stream language-portable; the O(bound/2^53) bias is
    /// irrelevant at scenario scale.
    std::uint64_t next_index(std::uint64_t bound) {
        auto i = static_cast<std::uint64_t>(next_double() *
                                            static_cast<double>(bound));
        return i < bound ? i : bound - 1;
    }

    /// Standard normal via Box-Muller; consumes exactly two draws.
    double next_normal();

private:
    std::uint64_t state_;
};

}  // namespace polydyn

#endif
