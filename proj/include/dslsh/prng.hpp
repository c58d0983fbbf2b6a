#pragma once

#include <cmath>
#include <cstdint>

namespace dslsh {

/// SplitMix64: the fixed PRNG used everywhere a hash function or a
/// benchmark needs reproducible randomness. Chosen because the whole
/// sequence is defined by plain 64-bit integer arithmetic, so two
/// processes that agree on a seed agree on every derived value.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double uniform_pos() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Lemire's multiply-shift; the bias of
    /// n/2^64 is far below anything our statistical tests can see.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    /// Standard Gaussian via Box-Muller. One value per call, two
    /// uniforms consumed, no cached spare: keeps the draw count per
    /// coefficient fixed, which regeneration-by-seed relies on.
    double gaussian() {
        double u1 = uniform_pos();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    uint64_t state_;
};

/// SplitMix64 finalizer as a standalone mixing function.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-independent combiner for deriving child seeds.
inline uint64_t seed_combine(uint64_t a, uint64_t b) {
    return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ULL));
}

} // namespace dslsh
