#pragma once

#include <cstdint>
#include <string_view>

namespace oamch {

// Pinned in every Monte Carlo report so runs can be reproduced elsewhere.
inline constexpr std::string_view kRngAlgorithm = "splitmix64-counter/1";

constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: draw k is a pure function of (key, k), so any
/// partition of the counter range across threads yields the same stream.
class CounterRng {
public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(seed ^ mix64(stream * kGamma + 0x632be59bd9b4e019ULL)))
    {
    }

    constexpr std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ + (counter + 1) * kGamma); }

    // 53-bit uniform in [0, 1)
    constexpr double uniform(std::uint64_t counter) const
    {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
};

} // namespace oamch
