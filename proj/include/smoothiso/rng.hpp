#pragma once

#include <cmath>
#include <cstdint>

// Counter-based randomness: every variate is a pure function of
// (seed, stream, counter), so parallel and serial generation agree
// draw for draw and experiments can be split across workers freely.

namespace smoothiso {

namespace stream {
// Stream tags keep independent uses of the same seed from colliding.
inline constexpr std::uint64_t regression_noise = 0x01;
inline constexpr std::uint64_t density_draw     = 0x02;
inline constexpr std::uint64_t replication      = 0x03;
inline constexpr std::uint64_t bootstrap        = 0x04;
inline constexpr std::uint64_t trial            = 0x05;
inline constexpr std::uint64_t brownian_pos     = 0x06;
inline constexpr std::uint64_t brownian_neg     = 0x07;
inline constexpr std::uint64_t trial_data       = 0x08;
inline constexpr std::uint64_t trial_boot       = 0x09;
inline constexpr std::uint64_t generic          = 0x0a;
}  // namespace stream

// splitmix64 finalizer; full-avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    return mix64(mix64(mix64(seed) ^ tag) ^ index);
}

inline std::uint64_t rng_u64(std::uint64_t seed, std::uint64_t tag, std::uint64_t counter) {
    return mix64(mix64(mix64(seed) ^ tag) ^ counter);
}

// Uniform on the open interval (0,1); 53 random bits, never exactly 0 or 1.
inline double rng_u01(std::uint64_t seed, std::uint64_t tag, std::uint64_t counter) {
    const std::uint64_t bits = rng_u64(seed, tag, counter) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
double normal_quantile(double p);

inline double rng_normal(std::uint64_t seed, std::uint64_t tag, std::uint64_t counter) {
    return normal_quantile(rng_u01(seed, tag, counter));
}

// Standard normal CDF via erfc.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

}  // namespace smoothiso
