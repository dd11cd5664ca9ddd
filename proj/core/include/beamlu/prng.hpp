#pragma once

#include <cstdint>

namespace beamlu {

/// SplitMix64: the state advances by a fixed odd constant and each output is
/// a finalizer of the new state, so the stream is a pure function of
/// (seed, counter) and reproduces bit-for-bit everywhere.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double symmetric() { return 2.0 * uniform() - 1.0; }

    /// Standard normal via Box-Muller (deterministic two-draw form).
    double normal();

private:
    std::uint64_t state_;
};

} // namespace beamlu
