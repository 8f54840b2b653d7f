#pragma once

#include <cstdint>
#include <random>

namespace psad {

/// Seedable deterministic generator. Doubles are produced by an explicit
/// 53-bit mapping rather than std::uniform_real_distribution, whose output
/// is implementation-defined; identical seeds therefore give identical
/// streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool coin() { return (gen_() & 1u) != 0; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

private:
    std::mt19937_64 gen_;
};

} // namespace psad
