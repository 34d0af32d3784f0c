#pragma once

#include <cstdint>
#include <limits>

namespace nesynth {

/// SplitMix64 generator. Small state, so one can be derived cheaply for every
/// (iteration, candidate, hole) triple and draws stay independent of the
/// order in which candidates are evaluated.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Generator for one hole of one candidate in one iteration.
constexpr SplitMix64 substream(std::uint64_t seed, std::uint64_t iteration,
                               std::uint64_t candidate, std::uint64_t hole) noexcept {
    SplitMix64 mix(seed);
    std::uint64_t key = mix();
    for (const std::uint64_t part : {iteration, candidate, hole}) {
        key = SplitMix64(key ^ (part * 0xd1b54a32d192ed03ULL))();
    }
    return SplitMix64(key);
}

} // namespace nesynth
