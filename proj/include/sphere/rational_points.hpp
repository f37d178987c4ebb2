#pragma once

// Primitive rational points p/q on S^n with q <= N.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sphere/quadform.hpp"

namespace sphere {

inline constexpr std::uint32_t kGeneratorVersion = 1;

// x = a / c in lowest terms, a in Z^n, c >= 1.
class StereoCoord {
 public:
  StereoCoord(std::vector<std::int64_t> a, std::int64_t c);

  const std::vector<std::int64_t>& a() const { return a_; }
  std::int64_t c() const { return c_; }

 private:
  std::vector<std::int64_t> a_;
  std::int64_t c_;
};

// A primitive cone vector with q >= 1.
class RationalSpherePoint {
 public:
  explicit RationalSpherePoint(ConeVector w);

  const ConeVector& point() const { return w_; }
  const std::vector<std::int64_t>& p() const { return w_.p(); }
  std::int64_t q() const { return w_.q(); }

  friend bool operator==(const RationalSpherePoint&, const RationalSpherePoint&) = default;
  friend auto operator<=>(const RationalSpherePoint& a, const RationalSpherePoint& b) {
    return a.w_ <=> b.w_;
  }

 private:
  ConeVector w_;
};

// (c^2 - |a|^2, 2 a c, c^2 + |a|^2) divided by its gcd.
RationalSpherePoint stereo_to_sphere(const StereoCoord& x);

// x = (alpha_2, ..., alpha_{n+1}) / (1 + alpha_1). Throws DomainError when
// alpha_1 <= -1 + 1e-9.
std::vector<double> sphere_to_stereo(const SpherePoint& alpha);

struct Provenance {
  std::uint32_t generator_version = kGeneratorVersion;
  bool oracle_verified = false;
};

// Every primitive point with 1 <= q <= N_max, sorted by (q, p lexicographic),
// stored flat. Immutable once built.
class PointTable {
 public:
  struct Record {
    std::vector<std::int64_t> p;
    std::int64_t q;
  };

  PointTable() = default;
  // Sorts and validates: on the cone, primitive, 1 <= q <= N_max, no duplicates.
  PointTable(int n, std::int64_t n_max, std::vector<Record> records, Provenance provenance = {});
  // Flat form: q[i] and coords[i * (n + 1) ... (i + 1) * (n + 1)). Same checks.
  PointTable(int n, std::int64_t n_max, std::vector<std::int64_t> q,
             std::vector<std::int64_t> coords, Provenance provenance = {});

  int n() const { return n_; }
  std::int64_t n_max() const { return n_max_; }
  std::size_t size() const { return q_.size(); }
  std::size_t stride() const { return static_cast<std::size_t>(n_) + 1; }

  std::int64_t q(std::size_t i) const { return q_[i]; }
  std::span<const std::int64_t> p(std::size_t i) const {
    return {coords_.data() + i * stride(), stride()};
  }
  RationalSpherePoint point(std::size_t i) const;

  // Index range [begin, end) of the points with denominator q (empty for q
  // outside [1, N_max]). Within a bucket, points are sorted by p lexicographically.
  std::size_t bucket_begin(std::int64_t q) const;
  std::size_t bucket_end(std::int64_t q) const;
  // Number of points with denominator <= q.
  std::size_t count_upto(std::int64_t q) const { return bucket_end(std::min(q, n_max_)); }

  const Provenance& provenance() const { return provenance_; }
  void mark_oracle_verified() { provenance_.oracle_verified = true; }

  std::span<const std::int64_t> q_data() const { return q_; }
  std::span<const std::int64_t> coord_data() const { return coords_; }

  bool operator==(const PointTable& other) const {
    return n_ == other.n_ && n_max_ == other.n_max_ && q_ == other.q_ && coords_ == other.coords_;
  }

 private:
  int n_ = 0;
  std::int64_t n_max_ = 0;
  std::vector<std::int64_t> q_;
  std::vector<std::int64_t> coords_;
  std::vector<std::size_t> offsets_;  // offsets_[q] = first index with denominator >= q
  Provenance provenance_;
};

struct EnumerationOptions {
  // Upper bound on generator candidates; exceeding it raises BudgetError.
  double candidate_budget = 2e10;
  unsigned threads = 1;
};

// Estimated number of generator candidates for (n, N).
double enumeration_cost(int n, std::int64_t N);

PointTable enumerate_points(int n, std::int64_t N, const EnumerationOptions& options = {});

struct PointCount {
  std::uint64_t count = 0;
  double normalized = 0.0;  // count / N^n
};

PointCount count_points(int n, std::int64_t N, const EnumerationOptions& options = {});

// Every point of a table with the first coordinate negated, re-sorted.
PointTable reflect_table(const PointTable& table);

}  // namespace sphere
