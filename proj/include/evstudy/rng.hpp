#pragma once

#include <cstdint>
#include <limits>

namespace evstudy {

/// SplitMix64 finaliser: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based 64-bit generator (SplitMix64): the i-th output is
/// mix64(key + (i+1) * golden_gamma), so any stream position is addressable
/// and independent substreams come from independent keys.
///
/// Distribution helpers are implemented here rather than taken from <random>
/// so outputs are identical across standard libraries.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    explicit SplitMix64(std::uint64_t key) noexcept : state_(key) {}

    /// Stream `index` of the family rooted at `seed`.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
        return SplitMix64(mix64(seed ^ mix64(index * kGamma + 0x632be59bd9b4e019ULL)));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += kGamma;
        return mix64(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with
    /// rejection, unbiased).
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Standard normal deviate (Box-Muller; the second value is cached).
    double normal() noexcept;

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace evstudy
