#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace mcpde {

// Philox 2x64, 10 rounds (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3"). Counter-based: block (c0, c1) under key -> 128 random bits,
// with no state carried between calls.
struct Philox2x64 {
    static constexpr std::uint64_t kMult = 0xD2B74407B1CE6E93ULL;
    static constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;

    static std::array<std::uint64_t, 2> block(std::uint64_t key, std::uint64_t c0,
                                              std::uint64_t c1) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round != 0) key += kWeyl;
            const unsigned __int128 prod = static_cast<unsigned __int128>(kMult) * c0;
            const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
            const std::uint64_t lo = static_cast<std::uint64_t>(prod);
            c0 = hi ^ key ^ c1;
            c1 = lo;
        }
        return {c0, c1};
    }
};

// Map 64 random bits to the open interval (0, 1); never returns 0 or 1, so
// log/Box-Muller stay finite.
inline double uniform_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Two independent N(0,1) draws from one Philox block via Box-Muller.
inline std::pair<double, double> normal_pair(std::uint64_t key, std::uint64_t c0,
                                             std::uint64_t c1) noexcept {
    const auto bits = Philox2x64::block(key, c0, c1);
    const double u1 = uniform_open(bits[0]);
    const double u2 = uniform_open(bits[1]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

// SplitMix64 finalizer; used for seed mixing, not for streams.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(const void* data, std::size_t size) noexcept {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace mcpde
