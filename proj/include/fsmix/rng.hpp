#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fsmix {

/// Seeded generator with a fixed, platform-independent output sequence.
///
/// std::mt19937_64 is fully specified by the standard, but the standard
/// distributions are not, so doubles are built from the top 53 bits of each
/// draw. The algorithm name is written into output metadata; bump the suffix
/// if the derivation of any draw changes.
class Rng {
  public:
    static constexpr std::string_view kAlgorithm = "mt19937_64/u53/v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11U) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t next_u64() { return engine_(); }

    /// Generator for the index-th independent task derived from a base seed.
    static Rng stream(std::uint64_t seed, std::uint64_t index);

  private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace fsmix
