#pragma once

// Counter-based random streams: the k-th draw of stream s under seed depends
// only on (seed, s, k), so parallel schedules cannot change sampled values.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "sphere/quadform.hpp"

namespace sphere {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform on (0, 1): 53 random bits, never exactly 0.
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  // Box-Muller; consumes two uniforms per call.
  double gaussian() {
    const double u = uniform(), v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Uniform point of S^n for sample `index` of the stream family `seed`.
inline SpherePoint sample_sphere(int n, std::uint64_t seed, std::uint64_t index) {
  CounterStream rng(seed, index);
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  for (;;) {
    double norm2 = 0.0;
    for (auto& c : v) {
      c = rng.gaussian();
      norm2 += c * c;
    }
    if (norm2 > 1e-300) return SpherePoint::normalized(std::move(v));
  }
}

}  // namespace sphere
