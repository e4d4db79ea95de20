#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "dloc/lattice.hpp"

namespace dloc {

// Philox4x32-10 (Salmon et al.), stateless: output is a function of (counter, key).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(m0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(m1) * ctr[2];
        ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
               std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

// Streams separate independent uses of the same seed.
enum class Stream : std::uint32_t { disorder = 0, monte_carlo = 1, test_vector = 2 };

// Zigzag-encodes a site so the key does not depend on any box.
inline std::uint64_t site_key(const Site& x) {
    auto zz = [](int v) { return std::uint64_t(std::uint32_t((v << 1) ^ (v >> 31))); };
    return (zz(x[0]) << 32) | zz(x[1]);
}

// Two standard normals per (seed, stream, a, b) via Box-Muller on 53-bit uniforms.
inline std::array<double, 2> gaussian_pair(std::uint64_t seed, Stream stream, std::uint64_t a, std::uint32_t b) {
    const PhiloxKey key{std::uint32_t(seed), std::uint32_t(seed >> 32)};
    const PhiloxCounter ctr{std::uint32_t(a), std::uint32_t(a >> 32), b, std::uint32_t(stream)};
    const auto r = philox4x32(ctr, key);
    const std::uint64_t h0 = (std::uint64_t(r[0]) << 21) ^ (r[1] >> 11);
    const std::uint64_t h1 = (std::uint64_t(r[2]) << 21) ^ (r[3] >> 11);
    const double u0 = (double(h0 & ((1ull << 53) - 1)) + 0.5) * 0x1.0p-53;  // (0,1)
    const double u1 = double(h1 & ((1ull << 53) - 1)) * 0x1.0p-53;        // [0,1)
    const double rad = std::sqrt(-2.0 * std::log(u0));
    return {rad * std::cos(2.0 * pi * u1), rad * std::sin(2.0 * pi * u1)};
}

inline double site_gaussian(std::uint64_t seed, const Site& x) {
    return gaussian_pair(seed, Stream::disorder, site_key(x), 0)[0];
}

// Small splittable helper for test/config randomization: one uniform per (seed, stream, index).
inline double uniform01(std::uint64_t seed, Stream stream, std::uint64_t index) {
    const PhiloxKey key{std::uint32_t(seed), std::uint32_t(seed >> 32)};
    const auto r = philox4x32({std::uint32_t(index), std::uint32_t(index >> 32), 0u, std::uint32_t(stream)}, key);
    const std::uint64_t h = (std::uint64_t(r[0]) << 21) ^ (r[1] >> 11);
    return double(h & ((1ull << 53) - 1)) * 0x1.0p-53;
}

}  // namespace dloc
