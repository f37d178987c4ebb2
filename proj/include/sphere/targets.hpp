#pragma once

// Named target points used by the experiments.

#include <cmath>
#include <vector>

#include "sphere/quadform.hpp"

namespace sphere {

// The sphere point with stereographic coordinate x:
// (1 - |x|^2, 2x) / (1 + |x|^2).
inline SpherePoint from_stereo(const std::vector<double>& x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  std::vector<double> a;
  a.reserve(x.size() + 1);
  a.push_back((1.0 - s) / (1.0 + s));
  for (double c : x) a.push_back(2.0 * c / (1.0 + s));
  return SpherePoint::normalized(std::move(a));
}

// Circle point at stereographic coordinate (1 + sqrt 5) / 2.
inline SpherePoint golden_point() { return from_stereo({(1.0 + std::sqrt(5.0)) / 2.0}); }

// Circle point at stereographic coordinate sum_{k=1}^{4} 2^{-k!}.
inline SpherePoint liouville_point() {
  double x = 0.0, fact = 1.0;
  for (int k = 1; k <= 4; ++k) {
    fact *= k;
    x += std::ldexp(1.0, -static_cast<int>(fact));
  }
  return from_stereo({x});
}

}  // namespace sphere
