#pragma once

// Portable seeded randomness. All randomized paths in the project derive
// their streams from a single top-level seed via derive_seed(), and draw
// through SplitMix64; distribution sampling is hand-rolled (Box-Muller for
// gaussians) so traces are bit-identical across platforms and standard
// library implementations.

#include <cmath>
#include <cstdint>
#include <string_view>

#include "curseval/hash.hpp"

namespace curseval {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 bits of precision.
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Inclusive integer range.
    std::uint64_t bounded(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    double gaussian(double mean, double sigma) {
        // Box-Muller; one value per call, the paired value is discarded to
        // keep the stream position independent of call parity.
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t state_;
};

// Documented seed fan-out: component streams are keyed by a label so that
// adding a consumer never shifts another consumer's stream.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label) {
    return SplitMix64(root ^ fnv1a64(label)).next();
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t index) {
    return SplitMix64(derive_seed(root, label) ^ (index * 0x9E3779B97F4A7C15ull)).next();
}

}  // namespace curseval
