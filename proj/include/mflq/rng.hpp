#pragma once

#include <cmath>
#include <cstdint>

namespace mflq::rng {

// 64-bit avalanche mix (splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Keyed counter hash: every draw is addressed by
/// (seed, stream, path, particle, draw) and can be generated in any order.
inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t path,
                                  std::uint64_t particle, std::uint64_t draw) {
    std::uint64_t h = mix64(seed ^ 0x8f1bbcdcbfa53e0bULL);
    h = mix64(h ^ stream);
    h = mix64(h ^ path);
    h = mix64(h ^ particle);
    h = mix64(h ^ draw);
    return h;
}

/// Uniform on (0, 1), strictly interior so logs are safe.
inline double u01(std::uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two addressed uniforms.
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t path,
                     std::uint64_t particle, std::uint64_t draw) {
    const double u1 = u01(counter_hash(seed, stream, path, particle, 2 * draw));
    const double u2 = u01(counter_hash(seed, stream, path, particle, 2 * draw + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t path,
                      std::uint64_t particle, std::uint64_t draw) {
    return u01(counter_hash(seed, stream, path, particle, draw));
}

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

/// Inverse standard normal CDF (Acklam's rational approximation polished by
/// one Halley step; accurate to full double precision on (0, 1)).
double inverse_normal_cdf(double p);

}  // namespace mflq::rng
