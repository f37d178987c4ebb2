#include "sphere/rational_points.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "sphere/errors.hpp"
#include "sphere/parallel.hpp"

namespace sphere {

namespace {

std::int64_t isqrt(std::int64_t v) {
  if (v <= 0) return 0;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::int64_t abs64(std::int64_t x) { return x < 0 ? -x : x; }

// Largest N for which q^2 sums fit comfortably in int64.
constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 30;

}  // namespace

StereoCoord::StereoCoord(std::vector<std::int64_t> a, std::int64_t c) : a_(std::move(a)), c_(c) {
  if (a_.empty()) throw ContractError("stereographic coordinate needs n >= 1 numerators");
  if (c_ < 1) throw ContractError("stereographic denominator must be positive");
  std::int64_t g = c_;
  for (auto x : a_) g = std::gcd(g, abs64(x));
  if (g != 1) throw ContractError("stereographic coordinate is not in lowest terms");
}

RationalSpherePoint::RationalSpherePoint(ConeVector w) : w_(std::move(w)) {
  if (w_.q() < 1) throw ContractError("rational sphere point needs q >= 1");
  if (!w_.is_primitive()) throw ContractError("rational sphere point must be primitive");
}

RationalSpherePoint stereo_to_sphere(const StereoCoord& x) {
  const BigInt c = x.c();
  BigInt a2 = 0;
  for (auto ai : x.a()) a2 += BigInt(ai) * ai;
  IntVector raw;
  raw.reserve(x.a().size() + 2);
  raw.push_back(c * c - a2);
  for (auto ai : x.a()) raw.push_back(2 * BigInt(ai) * c);
  raw.push_back(c * c + a2);
  const BigInt g = gcd_all(raw);
  std::vector<std::int64_t> p;
  p.reserve(raw.size() - 1);
  for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
    const BigInt v = raw[i] / g;
    if (abs(v) > BigInt(std::numeric_limits<std::int64_t>::max()))
      throw ContractError("rational point exceeds 64-bit storage");
    p.push_back(v.convert_to<std::int64_t>());
  }
  const BigInt q = raw.back() / g;
  if (q > BigInt(std::numeric_limits<std::int64_t>::max()))
    throw ContractError("rational point exceeds 64-bit storage");
  return RationalSpherePoint(ConeVector(std::move(p), q.convert_to<std::int64_t>()));
}

std::vector<double> sphere_to_stereo(const SpherePoint& alpha) {
  const double denom = 1.0 + alpha[0];
  if (!(alpha[0] > -1.0 + 1e-9))
    throw DomainError("point is at the antipode of u_1; outside the stereographic chart");
  std::vector<double> x(alpha.alpha().begin() + 1, alpha.alpha().end());
  for (auto& v : x) v /= denom;
  return x;
}

RationalSpherePoint PointTable::point(std::size_t i) const {
  auto pp = p(i);
  return RationalSpherePoint(ConeVector(std::vector<std::int64_t>(pp.begin(), pp.end()), q_[i]));
}

PointTable::PointTable(int n, std::int64_t n_max, std::vector<Record> records,
                       Provenance provenance)
    : PointTable(n, n_max, {}, {}, provenance) {
  const std::size_t d = stride();
  std::vector<std::int64_t> q;
  std::vector<std::int64_t> coords;
  q.reserve(records.size());
  coords.reserve(records.size() * d);
  for (auto& r : records) {
    if (r.p.size() != d) throw ContractError("record has wrong dimension");
    q.push_back(r.q);
    coords.insert(coords.end(), r.p.begin(), r.p.end());
  }
  records.clear();
  *this = PointTable(n, n_max, std::move(q), std::move(coords), provenance);
}

PointTable::PointTable(int n, std::int64_t n_max, std::vector<std::int64_t> q,
                       std::vector<std::int64_t> coords, Provenance provenance)
    : n_(n), n_max_(n_max), q_(std::move(q)), coords_(std::move(coords)), provenance_(provenance) {
  if (n < 1) throw ContractError("point table needs n >= 1");
  if (n_max < 1) throw ContractError("point table needs N >= 1");
  if (n_max > kMaxDenominator) throw ContractError("point table depth exceeds supported range");
  const std::size_t d = stride();
  if (coords_.size() != q_.size() * d) throw ContractError("flat table has inconsistent sizes");

  auto less = [&](std::size_t a, std::size_t b) {
    if (q_[a] != q_[b]) return q_[a] < q_[b];
    return std::lexicographical_compare(coords_.begin() + a * d, coords_.begin() + (a + 1) * d,
                                        coords_.begin() + b * d, coords_.begin() + (b + 1) * d);
  };
  bool sorted = true;
  for (std::size_t i = 1; i < q_.size() && sorted; ++i) sorted = less(i - 1, i);
  if (!sorted) {
    std::vector<std::size_t> order(q_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), less);
    std::vector<std::int64_t> q2(q_.size()), c2(coords_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      q2[i] = q_[order[i]];
      std::copy_n(coords_.begin() + order[i] * d, d, c2.begin() + i * d);
    }
    q_ = std::move(q2);
    coords_ = std::move(c2);
    for (std::size_t i = 1; i < q_.size(); ++i)
      if (!less(i - 1, i)) throw ContractError("duplicate rational point in table");
  }

  for (std::size_t i = 0; i < q_.size(); ++i) {
    const std::int64_t qi = q_[i];
    if (qi < 1 || qi > n_max) throw ContractError("record denominator outside [1, N]");
    std::int64_t g = qi;
    __int128 s = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const std::int64_t x = coords_[i * d + k];
      if (abs64(x) > qi) throw ContractError("record is not on the sphere");
      g = std::gcd(g, abs64(x));
      s += static_cast<__int128>(x) * x;
    }
    if (s != static_cast<__int128>(qi) * qi) throw ContractError("record is not on the sphere");
    if (g != 1) throw ContractError("record is not primitive");
  }

  offsets_.assign(static_cast<std::size_t>(n_max) + 2, 0);
  std::size_t idx = 0;
  for (std::int64_t qq = 0; qq <= n_max + 1; ++qq) {
    while (idx < q_.size() && q_[idx] < qq) ++idx;
    offsets_[static_cast<std::size_t>(qq)] = idx;
  }
}

std::size_t PointTable::bucket_begin(std::int64_t q) const {
  if (q < 1 || q > n_max_) return q < 1 ? 0 : size();
  return offsets_[static_cast<std::size_t>(q)];
}

std::size_t PointTable::bucket_end(std::int64_t q) const {
  if (q < 1 || q > n_max_) return q < 1 ? 0 : size();
  return offsets_[static_cast<std::size_t>(q) + 1];
}

double enumeration_cost(int n, std::int64_t N) {
  const double Nd = static_cast<double>(N);
  if (n == 1) return std::numbers::pi * Nd / 2.0 + 1.0;
  // Sorted nonnegative prefixes (p_1 >= ... >= p_n) inside the ball of radius q.
  const double unit_ball = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
  const double perms = std::tgamma(n + 1.0) * std::pow(2.0, n);
  return std::pow(Nd, n + 1) / (n + 1) * unit_ball / perms + Nd;
}

namespace {

// Flat (q, p) buffers, stride n + 1 for p.
struct FlatPoints {
  std::vector<std::int64_t> q;
  std::vector<std::int64_t> coords;

  void push(std::int64_t qq, std::span<const std::int64_t> p) {
    q.push_back(qq);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  void append(FlatPoints&& other) {
    q.insert(q.end(), other.q.begin(), other.q.end());
    coords.insert(coords.end(), other.coords.begin(), other.coords.end());
    other = {};
  }
};

// Canonical generator for n = 1: x = a / c with |a| <= c (the closed
// hemisphere alpha_1 >= 0) and a^2 + c^2 <= 2N, then the reflection. For n = 1
// the raw vector has gcd 1 or 2, so q = (a^2 + c^2) / g and the bound is complete.
FlatPoints enumerate_circle(std::int64_t N, unsigned threads) {
  const std::int64_t cmax = isqrt(2 * N);
  std::vector<FlatPoints> per_worker(std::max(1u, threads));
  parallel_for(static_cast<std::size_t>(cmax), threads,
               [&](std::size_t begin, std::size_t end, unsigned w) {
                 auto& out = per_worker[w];
                 for (std::size_t ci = begin; ci < end; ++ci) {
                   const std::int64_t c = static_cast<std::int64_t>(ci) + 1;
                   for (std::int64_t a = -c; a <= c; ++a) {
                     if (a * a + c * c > 2 * N) continue;
                     if (std::gcd(abs64(a), c) != 1) continue;
                     std::int64_t x0 = c * c - a * a, x1 = 2 * a * c, h = c * c + a * a;
                     const std::int64_t g = std::gcd(std::gcd(abs64(x0), abs64(x1)), h);
                     x0 /= g;
                     x1 /= g;
                     h /= g;
                     if (h > N) continue;
                     const std::int64_t p[2] = {x0, x1};
                     out.push(h, p);
                     if (x0 != 0) {
                       const std::int64_t r[2] = {-x0, x1};
                       out.push(h, r);
                     }
                   }
                 }
               });
  FlatPoints all;
  for (auto& part : per_worker) all.append(std::move(part));
  // The antipode (-1, 0)/1 has no stereographic preimage; it is also the
  // reflection of (1, 0)/1, so only add it if missing.
  bool has_antipode = false;
  for (std::size_t i = 0; i < all.q.size() && !has_antipode; ++i)
    has_antipode = all.q[i] == 1 && all.coords[2 * i] == -1;
  if (!has_antipode) {
    const std::int64_t p[2] = {-1, 0};
    all.push(1, p);
  }
  return all;
}

// Every signed permutation of a nonnegative tuple, sorted lexicographically.
void expand_orbit(std::vector<std::int64_t> canonical, std::vector<std::vector<std::int64_t>>& out) {
  std::sort(canonical.begin(), canonical.end());
  const std::size_t d = canonical.size();
  std::vector<std::size_t> nonzero;
  do {
    nonzero.clear();
    for (std::size_t i = 0; i < d; ++i)
      if (canonical[i] != 0) nonzero.push_back(i);
    const std::size_t patterns = std::size_t{1} << nonzero.size();
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      std::vector<std::int64_t> p = canonical;
      for (std::size_t b = 0; b < nonzero.size(); ++b)
        if (mask & (std::size_t{1} << b)) p[nonzero[b]] = -p[nonzero[b]];
      out.push_back(std::move(p));
    }
  } while (std::next_permutation(canonical.begin(), canonical.end()));
}

// Descending nonnegative tuples (t_0 >= t_1 >= ...) of length `remaining`
// whose squares sum to `rest`, entries <= cap, gcd with g equal to 1.
void sorted_representations(std::vector<std::int64_t>& prefix, std::size_t remaining,
                            std::int64_t rest, std::int64_t cap, std::int64_t g,
                            std::vector<std::vector<std::int64_t>>& out) {
  if (remaining == 1) {
    const std::int64_t t = isqrt(rest);
    if (t * t != rest || t > cap) return;
    if (std::gcd(g, t) != 1) return;
    prefix.push_back(t);
    expand_orbit(prefix, out);
    prefix.pop_back();
    return;
  }
  const std::int64_t hi = std::min(cap, isqrt(rest));
  // Need t^2 * remaining >= rest, otherwise smaller entries cannot reach rest.
  const auto r = static_cast<std::int64_t>(remaining);
  std::int64_t lo = isqrt(rest / r);
  while (lo * lo * r < rest) ++lo;
  for (std::int64_t t = hi; t >= lo; --t) {
    prefix.push_back(t);
    sorted_representations(prefix, remaining - 1, rest - t * t, t, std::gcd(g, t), out);
    prefix.pop_back();
  }
}

void points_with_denominator(int n, std::int64_t q, FlatPoints& out) {
  std::vector<std::vector<std::int64_t>> pts;
  std::vector<std::int64_t> prefix;
  sorted_representations(prefix, static_cast<std::size_t>(n) + 1, q * q, q, q, pts);
  std::sort(pts.begin(), pts.end());
  for (const auto& p : pts) out.push(q, p);
}

// n >= 2: representations of q^2 as a sum of n + 1 squares, one q at a time.
FlatPoints enumerate_sum_of_squares(int n, std::int64_t N, unsigned threads) {
  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    FlatPoints all;
    for (std::int64_t q = 1; q <= N; ++q) points_with_denominator(n, q, all);
    return all;
  }
  const std::size_t count = static_cast<std::size_t>(N);
  std::vector<FlatPoints> per_q(count);
  // Interleave denominators so that each worker sees a similar mix of sizes.
  parallel_for(workers, workers, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t w = begin; w < end; ++w)
      for (std::size_t qi = w; qi < count; qi += workers)
        points_with_denominator(n, static_cast<std::int64_t>(qi) + 1, per_q[qi]);
  });
  FlatPoints all;
  for (auto& bucket : per_q) all.append(std::move(bucket));
  return all;
}

}  // namespace

PointTable enumerate_points(int n, std::int64_t N, const EnumerationOptions& options) {
  if (n < 1) throw ContractError("n must be >= 1");
  if (N < 1) throw ContractError("N must be >= 1");
  if (N > kMaxDenominator) throw BudgetError("N exceeds the supported denominator range");
  const double cost = enumeration_cost(n, N);
  if (cost > options.candidate_budget)
    throw BudgetError("enumeration of n=" + std::to_string(n) + ", N=" + std::to_string(N) +
                      " needs ~" + std::to_string(cost) + " candidates, budget is " +
                      std::to_string(options.candidate_budget));
  auto flat = n == 1 ? enumerate_circle(N, options.threads)
                     : enumerate_sum_of_squares(n, N, options.threads);
  return PointTable(n, N, std::move(flat.q), std::move(flat.coords));
}

PointCount count_points(int n, std::int64_t N, const EnumerationOptions& options) {
  const auto table = enumerate_points(n, N, options);
  PointCount c;
  c.count = table.size();
  c.normalized = static_cast<double>(c.count) / std::pow(static_cast<double>(N), n);
  return c;
}

PointTable reflect_table(const PointTable& table) {
  std::vector<std::int64_t> q(table.q_data().begin(), table.q_data().end());
  std::vector<std::int64_t> coords(table.coord_data().begin(), table.coord_data().end());
  for (std::size_t i = 0; i < q.size(); ++i) coords[i * table.stride()] *= -1;
  return PointTable(table.n(), table.n_max(), std::move(q), std::move(coords), table.provenance());
}

}  // namespace sphere
