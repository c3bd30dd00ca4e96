#pragma once

// Counter-based random streams (Philox4x32-10).  Every draw is a pure
// function of (seed, key words), so per-cell sampling is deterministic
// under any evaluation order or worker count.

#include <array>
#include <cmath>
#include <cstdint>

namespace cqsedram {

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         std::array<std::uint32_t, 2>& key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    std::array<std::uint32_t, 4> out;
    out[0] = static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0];
    out[1] = static_cast<std::uint32_t>(p1);
    out[2] = static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1];
    out[3] = static_cast<std::uint32_t>(p0);
    ctr = out;
    key[0] += 0x9E3779B9u;  // golden ratio
    key[1] += 0xBB67AE85u;  // sqrt(3) - 1
}

inline std::array<std::uint32_t, 4> philox10(std::array<std::uint32_t, 4> ctr,
                                             std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) philox_round(ctr, key);
    return ctr;
}

inline double uniform53(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits =
        ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    // 53 significant bits mapped to (0, 1); offset keeps log() finite.
    return (static_cast<double>(bits) + 0.5) / 9007199254740992.0;
}

}  // namespace detail

// One 128-bit block keyed by (seed, a, b, c); yields two iid N(0,1)
// deviates via Box-Muller.
struct NormalPair {
    double first;
    double second;
};

inline NormalPair keyed_normal_pair(std::uint64_t seed, std::uint32_t a,
                                    std::uint32_t b, std::uint32_t c) {
    const std::array<std::uint32_t, 4> ctr = {a, b, c, 0x5EEDC0DEu};
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32)};
    const auto r = detail::philox10(ctr, key);
    const double u1 = detail::uniform53(r[0], r[1]);
    const double u2 = detail::uniform53(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586 * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

inline double keyed_uniform(std::uint64_t seed, std::uint32_t a, std::uint32_t b,
                            std::uint32_t c) {
    const auto r = detail::philox10(
        {a, b, c, 0xA11CE5EDu},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    return detail::uniform53(r[0], r[1]);
}

}  // namespace cqsedram
