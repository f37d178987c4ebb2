#pragma once

// Bucket-window scans shared by the nearest-point queries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

#include "sphere/rational_points.hpp"

namespace sphere::detail {

inline double sup_error(std::span<const double> alpha, std::span<const std::int64_t> p, std::int64_t q) {
  const double qd = static_cast<double>(q);
  double m = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    m = std::max(m, std::abs(alpha[i] - static_cast<double>(p[i]) / qd));
  return m;
}

// Calls f(index, err_sup) for every point of bucket q with |alpha_1 - p_1/q| <= r
// (and possibly a few just outside), in table order.
template <typename F>
inline void visit_window(const PointTable& table, std::span<const double> alpha, std::int64_t q,
                         double r, F&& f) {
  std::size_t lo = table.bucket_begin(q), hi = table.bucket_end(q);
  if (lo == hi) return;
  const auto coords = table.coord_data();
  const std::size_t stride = table.stride();
  if (std::isfinite(r)) {
    const double qd = static_cast<double>(q);
    const double p_lo = std::floor(qd * (alpha[0] - r)) - 1.0;
    const double p_hi = std::ceil(qd * (alpha[0] + r)) + 1.0;
    std::size_t a = lo, b = hi;
    while (a < b) {
      const std::size_t mid = a + (b - a) / 2;
      if (static_cast<double>(coords[mid * stride]) < p_lo) a = mid + 1; else b = mid;
    }
    lo = a;
    b = hi;
    while (a < b) {
      const std::size_t mid = a + (b - a) / 2;
      if (static_cast<double>(coords[mid * stride]) <= p_hi) a = mid + 1; else b = mid;
    }
    hi = a;
  }
  for (std::size_t i = lo; i < hi; ++i) f(i, sup_error(alpha, table.p(i), q));
}

}  // namespace sphere::detail
