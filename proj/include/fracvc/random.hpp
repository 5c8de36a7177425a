#ifndef FRACVC_RANDOM_HPP
#define FRACVC_RANDOM_HPP

#include <fracvc/types.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace fracvc {

/// Engine used by every Monte Carlo routine. The conversions below are written
/// out by hand so streams are identical across standard library vendors.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Open interval (0,1), safe for logarithms and negative powers.
inline double uniform01_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform direction on S^{n-1}.
inline Point random_direction(int n, Rng& rng) {
  Point d(n);
  if (n == 1) {
    d(0) = (rng() >> 63) ? 1.0 : -1.0;
  } else if (n == 2) {
    const double phi = 2.0 * kPi * uniform01(rng);
    d << std::cos(phi), std::sin(phi);
  } else {
    const double z = 2.0 * uniform01(rng) - 1.0;
    const double phi = 2.0 * kPi * uniform01(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    d << s * std::cos(phi), s * std::sin(phi), z;
  }
  return d;
}

/// Uniform point in the ball B_r(center).
inline Point random_in_ball(const Point& center, double r, Rng& rng) {
  const int n = static_cast<int>(center.size());
  const double rho = r * std::pow(uniform01(rng), 1.0 / n);
  return center + rho * random_direction(n, rng);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable per-job seed from a master seed and a job name (FNV-1a, then splitmix).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(master ^ h);
}

}  // namespace fracvc

#endif  // FRACVC_RANDOM_HPP
