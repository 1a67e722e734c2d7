#pragma once

// Counter-based deterministic random streams. Every consumer derives an
// independent substream from (seed, stream index), so results are
// bit-reproducible for a fixed seed regardless of evaluation order.

#include <complex>
#include <cstdint>

namespace focklab {

struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t s) : state(s) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in (0,1]; safe as a log() argument.
    double uniform01_open() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one spare cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Complex with independent N(0, var_per_component) real and imaginary parts.
    std::complex<double> complex_normal(double var_per_component = 1.0) {
        const double s = std::sqrt(var_per_component);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

private:
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Independent substream for (seed, stream). Streams with distinct indices are
/// decorrelated by an extra mixing round.
inline SplitMix64 substream(uint64_t seed, uint64_t stream) {
    SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ull + stream * 0xd1342543de82ef95ull));
    SplitMix64 out(mix.next());
    return out;
}

}  // namespace focklab
